//! Steering thresholds for isotropic states and the critical fidelity at which
//! their conditional κ-entropy changes sign.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundVerdict, Theorem};
use crate::entropy::conditional_k;
use crate::error::{Error, Result};
use crate::kdeform::{bisect, kernel, Alpha, Bisection};
use crate::states::StateFamily;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Largest `N` for which the harmonic number is summed term by term.
pub const HARMONIC_DIRECT_MAX: u64 = 1_000_000;
/// Cap on `d^k` in the k-copy thresholds.
pub const MAX_COPIES_DIM: u64 = 1 << 30;
/// Largest dimension accepted by [`limit_estimate`].
pub const LIMIT_D_MAX: usize = 10_000;
/// Critical fidelity quoted for the large-`d`, small-`α` limit.
pub const QUOTED_LIMIT_VALUE: f64 = 0.506;

const CRITICAL_F_BISECTION: Bisection = Bisection::EXACT;

/// `H_N = Σ_{n=1}^{N} 1/n`.
pub fn harmonic(n: u64) -> f64 {
    if n <= HARMONIC_DIRECT_MAX {
        harmonic_direct(n)
    } else {
        harmonic_asymptotic(n)
    }
}

/// Summed from the smallest term up.
pub fn harmonic_direct(n: u64) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// `ln N + γ + 1/(2N)`.
pub fn harmonic_asymptotic(n: u64) -> f64 {
    let x = n as f64;
    x.ln() + EULER_GAMMA + 0.5 / x
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::parameter("d", d as f64, "dimension must be at least 2"));
    }
    Ok(())
}

/// Projective-measurement LHS ceiling `((1+d)H_d − d)/d²`.
pub fn lhs_threshold_projective(d: usize) -> Result<f64> {
    check_d(d)?;
    Ok(projective_at(d as u64))
}

fn projective_at(n: u64) -> f64 {
    let x = n as f64;
    ((1.0 + x) * harmonic(n) - x) / (x * x)
}

/// POVM threshold `(1 + ((d+1)/d)^d (3d−1))/d²`, evaluated as written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PovmThreshold {
    pub d: usize,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub fn lhs_threshold_povm(d: usize) -> Result<PovmThreshold> {
    check_d(d)?;
    let x = d as f64;
    let value = (1.0 + ((x + 1.0) / x).powi(d as i32) * (3.0 * x - 1.0)) / (x * x);
    let warning = (value > 1.0).then(|| format!("POVM threshold {value} exceeds 1 at d={d}; not a fidelity"));
    Ok(PovmThreshold { d, value, warning })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringThresholds {
    pub d: usize,
    pub lhs_projective: f64,
    pub lhs_povm: f64,
}

impl SteeringThresholds {
    pub fn new(d: usize) -> Result<Self> {
        Ok(SteeringThresholds {
            d,
            lhs_projective: lhs_threshold_projective(d)?,
            lhs_povm: lhs_threshold_povm(d)?.value,
        })
    }
}

/// Which k-copy onset formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KCopyRule {
    /// `F^k > ((1+N)(H_N − 1) − N)/N²` with `N = d^k`, as written.
    Printed,
    /// The projective ceiling evaluated at `N = d^k`: `F^k > ((1+N)H_N − N)/N²`.
    /// Reduces to the single-copy ceiling at `k = 1`.
    #[default]
    ProjectiveAtDk,
}

impl std::str::FromStr for KCopyRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "printed" => Ok(KCopyRule::Printed),
            "projective" | "projective-at-dk" => Ok(KCopyRule::ProjectiveAtDk),
            _ => Err(Error::Parse(format!("unknown k-copy rule '{s}' (printed|projective)"))),
        }
    }
}

fn copies_dim(d: usize, k: u32) -> Result<u64> {
    check_d(d)?;
    if k == 0 {
        return Err(Error::parameter("k", 0.0, "at least one copy is required"));
    }
    (d as u64)
        .checked_pow(k)
        .filter(|&n| n <= MAX_COPIES_DIM)
        .ok_or_else(|| Error::parameter("k", k as f64, format!("d^k exceeds 2^30 for d={d}")))
}

/// Onset `f_low` of k-copy steerability: the k-th root of the threshold on `F^k`.
/// A non-positive threshold is satisfied by every `F`, giving `f_low = 0`.
pub fn kcopy_onset(d: usize, k: u32, rule: KCopyRule) -> Result<f64> {
    let n = copies_dim(d, k)?;
    let x = n as f64;
    let rhs = match rule {
        KCopyRule::Printed => ((1.0 + x) * (harmonic(n) - 1.0) - x) / (x * x),
        KCopyRule::ProjectiveAtDk => projective_at(n),
    };
    Ok(if rhs <= 0.0 { 0.0 } else { rhs.powf(1.0 / k as f64) })
}

/// `(f_low, f_high]`: steerable with k copies but LHS-local with one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperactivationWindow {
    pub d: usize,
    pub k: u32,
    pub f_low: f64,
    pub f_high: f64,
    pub nonempty: bool,
    pub rule: KCopyRule,
}

pub fn superactivation_window(d: usize, k: u32, rule: KCopyRule) -> Result<SuperactivationWindow> {
    let f_low = kcopy_onset(d, k, rule)?;
    let f_high = lhs_threshold_projective(d)?;
    Ok(SuperactivationWindow {
        d,
        k,
        f_low,
        f_high,
        nonempty: f_low < f_high,
        rule,
    })
}

/// Smallest `k ≤ k_max` with a nonempty window; `d^k` beyond the cap ends the search.
pub fn min_k_superactivation(d: usize, k_max: u32, rule: KCopyRule) -> Result<Option<u32>> {
    if k_max > 30 {
        return Err(Error::parameter("k_max", k_max as f64, "at most 30 copies are searched"));
    }
    check_d(d)?;
    for k in 1..=k_max {
        match superactivation_window(d, k, rule) {
            Ok(w) if w.nonempty => return Ok(Some(k)),
            Ok(_) => {}
            Err(Error::Parameter { name: "k", .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Smallest `2 ≤ d ≤ d_max` with a nonempty window at `k` copies.
pub fn min_d_superactivation(k: u32, d_max: usize, rule: KCopyRule) -> Result<Option<usize>> {
    if k == 0 {
        return Err(Error::parameter("k", 0.0, "at least one copy is required"));
    }
    for d in 2..=d_max {
        match superactivation_window(d, k, rule) {
            Ok(w) if w.nonempty => return Ok(Some(d)),
            Ok(_) => {}
            Err(Error::Parameter { name: "k", .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Zero crossing of the isotropic conditional κ-entropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalF {
    pub alpha: Alpha,
    pub d: usize,
    pub f_star: f64,
}

/// The classical sentinel is evaluated at `α = 1e-5`.
fn effective_alpha(alpha: Alpha) -> Alpha {
    if alpha.is_classical() {
        Alpha::ZERO_PLUS
    } else {
        alpha
    }
}

/// Isotropic conditional κ-entropy with a real-valued dimension.
pub fn isotropic_conditional(alpha: Alpha, d: f64, f: f64) -> f64 {
    let a = effective_alpha(alpha).value();
    let n = d * d - 1.0;
    (kernel(a, f) + n * kernel(a, (1.0 - f) / n) - d * kernel(a, 1.0 / d)) / (2.0 * a)
}

pub fn critical_f(alpha: Alpha, d: usize) -> Result<CriticalF> {
    check_d(d)?;
    let al = effective_alpha(alpha);
    let cond = |f: f64| conditional_k(al, &StateFamily::Isotropic { d, f }).unwrap_or(f64::NAN);
    let lo = 1.0 / (d * d) as f64;
    let (c_lo, c_hi) = (cond(lo), cond(1.0));
    if !(c_lo > 0.0 && c_hi < 0.0) {
        return Err(Error::Bracket {
            lo,
            hi: 1.0,
            f_lo: c_lo,
            f_hi: c_hi,
        });
    }
    let f_star = bisect(cond, lo, 1.0, CRITICAL_F_BISECTION)?;
    Ok(CriticalF { alpha, d, f_star })
}

/// [`critical_f`] for a real dimension, used to extrapolate beyond integer grids.
pub fn critical_f_continuous(alpha: Alpha, d: f64) -> Result<f64> {
    if !(d >= 2.0) || !d.is_finite() {
        return Err(Error::parameter("d", d, "dimension must be a finite real ≥ 2"));
    }
    bisect(|f| isotropic_conditional(alpha, d, f), 1.0 / (d * d), 1.0, CRITICAL_F_BISECTION)
}

/// Row-major `alphas × ds` table of critical fidelities.
pub fn critical_f_table(alphas: &[Alpha], ds: &[usize]) -> Result<Vec<CriticalF>> {
    let cells: Vec<(Alpha, usize)> = alphas.iter().flat_map(|&a| ds.iter().map(move |&d| (a, d))).collect();
    cells.par_iter().map(|&(a, d)| critical_f(a, d)).collect()
}

/// `(F, conditional)` samples of the isotropic curve on `[0, 1]`.
pub fn conditional_curve(alpha: Alpha, d: usize, step: f64) -> Result<Vec<(f64, f64)>> {
    check_d(d)?;
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::parameter("step", step, "must lie in (0, 1]"));
    }
    let al = effective_alpha(alpha);
    let n = (1.0 / step).round() as usize;
    (0..=n)
        .map(|i| {
            let f = i as f64 / n as f64;
            Ok((f, conditional_k(al, &StateFamily::Isotropic { d, f })?))
        })
        .collect()
}

/// Checks `conditional < 0 ⇒ F > f_low` for the two steering propositions.
///
/// Scope is `d = 2, k ≥ 7` or `d ≥ 6, k = 2`. The onset uses the written
/// k-copy formula.
pub fn proposition_check(alpha: Alpha, d: usize, k: u32, f: f64) -> Result<BoundVerdict> {
    let theorem = match (d, k) {
        (2, k) if k >= 7 => Theorem::P7,
        (d, 2) if d >= 6 => Theorem::P8,
        _ => {
            return Err(Error::OutOfScope(format!(
                "the steering propositions cover d=2 with k≥7 or d≥6 with k=2, got d={d}, k={k}"
            )))
        }
    };
    let al = effective_alpha(alpha);
    let cond = conditional_k(al, &StateFamily::isotropic(d, f)?)?;
    let onset = kcopy_onset(d, k, KCopyRule::Printed)?;
    let params: BTreeMap<String, f64> = [
        ("alpha", al.value()),
        ("d", d as f64),
        ("k", k as f64),
        ("F", f),
        ("conditional", cond),
    ]
    .into_iter()
    .map(|(n, v)| (n.to_string(), v))
    .collect();
    Ok(BoundVerdict {
        theorem,
        params,
        antecedent_holds: cond < 0.0,
        bound_lhs: f,
        bound_rhs: onset,
        bound_holds: f > onset,
        applicable: true,
        consistent: !(cond < 0.0 && f <= onset),
        notes: Vec::new(),
    })
}

/// Large-`d` behaviour of the critical fidelity at `α = 1e-5`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub points: Vec<(usize, f64)>,
    pub d_max: usize,
    pub value_at_d_max: f64,
    pub strictly_decreasing: bool,
    /// Least-squares `c` in `F* ≈ ½ + c / ln d` over the points with `d ≥ 10`.
    pub trend_coefficient: f64,
    pub analytic_limit: f64,
    pub quoted_value: f64,
    /// Real dimension where the continuous extrapolation reaches the quoted value.
    pub d_at_quoted_value: Option<f64>,
}

pub fn limit_estimate(d_max: usize) -> Result<LimitEstimate> {
    if !(2..=LIMIT_D_MAX).contains(&d_max) {
        return Err(Error::parameter("d_max", d_max as f64, "must lie in [2, 10^4]"));
    }
    let mut ds: Vec<usize> = (2..=d_max.min(1000)).collect();
    let mut x = 1000.0f64;
    while x < d_max as f64 {
        x *= 10f64.powf(0.1);
        ds.push((x.round() as usize).min(d_max));
    }
    ds.push(d_max);
    ds.sort_unstable();
    ds.dedup();

    let points: Vec<(usize, f64)> = ds
        .par_iter()
        .map(|&d| critical_f(Alpha::ZERO_PLUS, d).map(|c| (d, c.f_star)))
        .collect::<Result<_>>()?;
    let strictly_decreasing = points.windows(2).all(|w| w[1].1 < w[0].1);
    let value_at_d_max = points.last().expect("nonempty").1;

    let (num, den) = points
        .iter()
        .filter(|(d, _)| *d >= 10)
        .fold((0.0, 0.0), |(n, m), &(d, f)| {
            let u = 1.0 / (d as f64).ln();
            (n + u * (f - 0.5), m + u * u)
        });
    let trend_coefficient = if den > 0.0 { num / den } else { f64::NAN };

    let gap = |ln_d: f64| critical_f_continuous(Alpha::ZERO_PLUS, ln_d.exp()).map(|f| f - QUOTED_LIMIT_VALUE);
    let lo = (d_max as f64).ln();
    let d_at_quoted_value = if gap(lo)? <= 0.0 {
        None
    } else {
        let hi = 300.0f64;
        if gap(hi)? > 0.0 {
            None
        } else {
            let root = bisect(|l| gap(l).unwrap_or(f64::NAN), lo, hi, Bisection { tol: 1e-9, max_iter: 200 })?;
            Some(root.exp())
        }
    };

    Ok(LimitEstimate {
        points,
        d_max,
        value_at_d_max,
        strictly_decreasing,
        trend_coefficient,
        analytic_limit: 0.5,
        quoted_value: QUOTED_LIMIT_VALUE,
        d_at_quoted_value,
    })
}

/// The α at which `critical_f(α, d_small)` and `critical_f(α, d_large)` coincide,
/// searched on `[lo, hi]`.
pub fn observation2_crossover(d_small: usize, d_large: usize, lo: f64, hi: f64) -> Result<f64> {
    let gap = |a: f64| -> f64 {
        let al = match Alpha::deformed(a) {
            Ok(al) => al,
            Err(_) => return f64::NAN,
        };
        match (critical_f(al, d_small), critical_f(al, d_large)) {
            (Ok(s), Ok(l)) => s.f_star - l.f_star,
            _ => f64::NAN,
        }
    };
    bisect(gap, lo, hi, Bisection { tol: 1e-9, max_iter: 200 })
}
