//! Von Neumann and Kaniadakis entropies over spectra.
//!
//! `von_neumann` is in bits. `k_entropy` is in nats; with the `α = 0` sentinel
//! it returns the von Neumann entropy in nats so that the deformed family is
//! continuous at the sentinel.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::Result;
use crate::kdeform::{kernel, Alpha};
use crate::states::{reduced_b, spectrum_analytic, Spectrum, StateFamily};

/// `-Σ m λ log₂ λ` with `0 log 0 = 0`.
pub fn von_neumann(spec: &Spectrum) -> f64 {
    -spec
        .entries()
        .iter()
        .filter(|&&(l, _)| l > 0.0)
        .map(|&(l, m)| m as f64 * l * l.log2())
        .sum::<f64>()
}

/// `(1/2α) Σ m K̂_α(λ)` in nats.
pub fn k_entropy(alpha: Alpha, spec: &Spectrum) -> f64 {
    if alpha.is_classical() {
        return von_neumann(spec) * LN_2;
    }
    let a = alpha.value();
    spec.entries()
        .iter()
        .map(|&(l, m)| m as f64 * kernel(a, l))
        .sum::<f64>()
        / (2.0 * a)
}

/// `S(AB) − S(B)`.
pub fn conditional_k(alpha: Alpha, family: &StateFamily) -> Result<f64> {
    let joint = k_entropy(alpha, &spectrum_analytic(family)?);
    Ok(joint - k_entropy(alpha, &reduced_b(family)))
}

/// `S(A) + S(B) − S(AB)`; both marginals are maximally mixed.
pub fn mutual_k(alpha: Alpha, family: &StateFamily) -> Result<f64> {
    let joint = k_entropy(alpha, &spectrum_analytic(family)?);
    Ok(2.0 * k_entropy(alpha, &reduced_b(family)) - joint)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub joint: f64,
    pub marginal_b: f64,
    pub conditional: f64,
    pub mutual: Option<f64>,
    pub alpha: Alpha,
}

impl EntropyReport {
    pub fn new(alpha: Alpha, family: &StateFamily) -> Result<Self> {
        let joint = k_entropy(alpha, &spectrum_analytic(family)?);
        let marginal_b = k_entropy(alpha, &reduced_b(family));
        Ok(EntropyReport {
            joint,
            marginal_b,
            conditional: joint - marginal_b,
            mutual: Some(2.0 * marginal_b - joint),
            alpha,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::states::build;
    use proptest::prelude::*;

    fn spec(entries: &[(f64, usize)]) -> Spectrum {
        Spectrum::new(entries.to_vec()).unwrap()
    }

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    /// Joint entropy straight from the matrix eigenvalues, bypassing the analytic spectra.
    fn numeric_joint(alpha: f64, family: &StateFamily) -> f64 {
        let eig = hermitian_eigenvalues(build(family).unwrap().matrix()).unwrap();
        eig.iter()
            .map(|&l| {
                let l = l.max(0.0);
                l.powf(1.0 - alpha) - l.powf(1.0 + alpha)
            })
            .sum::<f64>()
            / (2.0 * alpha)
    }

    #[test]
    fn von_neumann_examples() {
        assert_eq!(von_neumann(&spec(&[(1.0, 1), (0.0, 3)])), 0.0);
        assert!((von_neumann(&spec(&[(0.25, 4)])) - 2.0).abs() < 1e-15);
        assert!((von_neumann(&spec(&[(0.5, 2)])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k_entropy_examples() {
        for v in [0.1, 0.5, 0.9] {
            assert_eq!(k_entropy(a(v), &spec(&[(1.0, 1), (0.0, 3)])), 0.0);
        }
        let half = k_entropy(a(0.5), &spec(&[(0.5, 2)]));
        assert!((half - 0.5f64.sqrt()).abs() < 1e-12);
        let w = spectrum_analytic(&StateFamily::Werner2 { p: 0.5 }).unwrap();
        assert!((k_entropy(a(1e-5), &w) - von_neumann(&w) * LN_2).abs() < 1e-4);
        assert_eq!(k_entropy(Alpha::CLASSICAL, &w), von_neumann(&w) * LN_2);
    }

    #[test]
    fn conditional_examples() {
        let c = conditional_k(a(0.5), &StateFamily::Werner2 { p: 1.0 }).unwrap();
        assert!((c + 0.5f64.sqrt()).abs() < 1e-12);
        for v in [0.05, 0.3, 0.6, 0.95] {
            assert!(conditional_k(a(v), &StateFamily::Werner2 { p: 0.0 }).unwrap() > 0.0);
        }
    }

    #[test]
    fn mutual_examples() {
        let m = mutual_k(a(1e-5), &StateFamily::Werner2 { p: 0.0 }).unwrap();
        assert!(m.abs() < 1e-4);
        let m = mutual_k(a(0.5), &StateFamily::Werner2 { p: 1.0 }).unwrap();
        assert!((m - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_generic_path() {
        let al = 0.37;
        let k = |x: f64| x.powf(1.0 - al) - x.powf(1.0 + al);
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let printed = (3.0 * k((1.0 - p) / 4.0) + k((1.0 + 3.0 * p) / 4.0) - 2.0 * k(0.5)) / (2.0 * al);
            let got = conditional_k(a(al), &StateFamily::Werner2 { p }).unwrap();
            assert!((got - printed).abs() < 1e-12);
        }
        for d in 2..=9usize {
            let df = d as f64;
            for i in 0..=20 {
                let f = i as f64 / 20.0;
                let printed = (k(f) + (df * df - 1.0) * k((1.0 - f) / (df * df - 1.0)) - df * k(1.0 / df)) / (2.0 * al);
                let got = conditional_k(a(al), &StateFamily::Isotropic { d, f }).unwrap();
                assert!((got - printed).abs() < 1e-12, "d={d} F={f}");

                let x = 2.0 * f - 1.0;
                let printed = ((df * df + df) / 2.0 * k((1.0 + x) / (df * df + df))
                    + (df * df - df) / 2.0 * k((1.0 - x) / (df * df - df))
                    - df * k(1.0 / df))
                    / (2.0 * al);
                let got = conditional_k(a(al), &StateFamily::WernerD { d, x }).unwrap();
                assert!((got - printed).abs() < 1e-12, "d={d} x={x}");
            }
        }
        let t = [0.1, 0.25, 0.3];
        let l = [
            (1.0 - t[0] - t[1] - t[2]) / 4.0,
            (1.0 - t[0] + t[1] + t[2]) / 4.0,
            (1.0 + t[0] - t[1] + t[2]) / 4.0,
            (1.0 + t[0] + t[1] - t[2]) / 4.0,
        ];
        let printed = (l.iter().map(|&x| k(x)).sum::<f64>() - 2.0 * k(0.5)) / (2.0 * al);
        let got = conditional_k(a(al), &StateFamily::Weyl2 { t }).unwrap();
        assert!((got - printed).abs() < 1e-12);
    }

    #[test]
    fn matrix_path_agrees_with_spectra() {
        let fams = [
            StateFamily::Werner2 { p: 0.8 },
            StateFamily::Weyl2 { t: [0.3, -0.1, 0.2] },
            StateFamily::Isotropic { d: 5, f: 0.6 },
            StateFamily::WernerD { d: 4, x: -0.5 },
        ];
        for fam in fams {
            let joint = k_entropy(a(0.4), &spectrum_analytic(&fam).unwrap());
            assert!((joint - numeric_joint(0.4, &fam)).abs() < 1e-9, "{fam}");
        }
    }

    #[test]
    fn maximum_at_maximally_mixed_member() {
        for al in [0.1, 0.5, 0.9] {
            let grids: Vec<Vec<StateFamily>> = vec![
                (0..=20).map(|i| StateFamily::Werner2 { p: i as f64 / 20.0 }).collect(),
                (0..=10)
                    .flat_map(|i| (0..=10).map(move |j| (i, j)))
                    .filter_map(|(i, j)| StateFamily::weyl2([i as f64 / 10.0 - 0.5, j as f64 / 10.0 - 0.5, 0.1]).ok())
                    .collect(),
                (0..=20).map(|i| StateFamily::Isotropic { d: 4, f: i as f64 / 20.0 }).collect(),
                (0..=20).map(|i| StateFamily::WernerD { d: 3, x: i as f64 / 10.0 - 1.0 }).collect(),
            ];
            for grid in grids {
                let top = grid[0].maximally_mixed_member();
                let best = k_entropy(a(al), &spectrum_analytic(&top).unwrap());
                for fam in &grid {
                    let s = k_entropy(a(al), &spectrum_analytic(fam).unwrap());
                    assert!(s <= best + 1e-12, "{fam} exceeds {top}");
                }
            }
        }
    }

    #[test]
    fn report_fields_are_consistent() {
        let r = EntropyReport::new(a(0.3), &StateFamily::Werner2 { p: 0.5 }).unwrap();
        assert_eq!(r.conditional, r.joint - r.marginal_b);
        assert_eq!(r.mutual, Some(2.0 * r.marginal_b - r.joint));
    }

    proptest! {
        #[test]
        fn pure_states_have_zero_entropy(al in 0.001f64..0.999, n in 1usize..10) {
            let mut e = vec![(1.0, 1)];
            if n > 1 { e.push((0.0, n - 1)); }
            prop_assert_eq!(k_entropy(a(al), &spec(&e)), 0.0);
        }

        #[test]
        fn classical_limit(p in 0.0f64..=1.0, d in 2usize..12, f in 0.0f64..=1.0) {
            for fam in [StateFamily::Werner2 { p }, StateFamily::Isotropic { d, f }, StateFamily::WernerD { d, x: 2.0 * f - 1.0 }] {
                let s = spectrum_analytic(&fam).unwrap();
                prop_assert!((k_entropy(a(1e-5), &s) - von_neumann(&s) * LN_2).abs() < 1e-4);
            }
        }

        #[test]
        fn mutual_is_marginal_minus_conditional(al in 0.01f64..0.99, p in 0.0f64..=1.0) {
            let fam = StateFamily::Werner2 { p };
            let m = mutual_k(a(al), &fam).unwrap();
            let c = conditional_k(a(al), &fam).unwrap();
            let sb = k_entropy(a(al), &reduced_b(&fam));
            prop_assert!((m - (sb - c)).abs() < 1e-12);
        }
    }
}
