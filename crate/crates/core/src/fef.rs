//! Fully entangled fraction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron, singular_values, ComplexMatrix, DensityMatrix, C64};
use crate::states::{bloch_decompose, build, StateFamily};

/// FEF above this value beats the classical teleportation fidelity.
pub const TELEPORTATION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FefSource {
    TensorFormula,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FefResult {
    pub value: f64,
    pub useful_for_teleportation: bool,
    pub source: FefSource,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl FefResult {
    fn new(value: f64, source: FefSource) -> Self {
        FefResult {
            value,
            useful_for_teleportation: value > TELEPORTATION_THRESHOLD,
            source,
            warnings: Vec::new(),
        }
    }
}

/// `¼(1 + Tr|T|)` from the correlation tensor of a 2⊗2 state.
pub fn fef_tensor(rho: &DensityMatrix) -> Result<FefResult> {
    let dec = bloch_decompose(rho)?;
    let t = dec.correlation_matrix();
    let sv = singular_values(&t)?;
    let mut out = FefResult::new(0.25 * (1.0 + sv.iter().sum::<f64>()), FefSource::TensorFormula);
    if det3(&dec.t) > 1e-14 {
        out.warnings.push(
            "correlation tensor has positive determinant; the trace-norm formula exceeds the largest maximally-entangled overlap here"
                .into(),
        );
    }
    Ok(out)
}

fn det3(t: &[[f64; 3]; 3]) -> f64 {
    t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
        + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])
}

/// Closed-form FEF of each family.
///
/// The odd-`d` Werner branch for `x < 1/d` is evaluated as written; results
/// above 1 are clamped to 1 and reported in `warnings`.
pub fn fef_analytic(family: &StateFamily) -> Result<FefResult> {
    family.validate()?;
    let value = match *family {
        StateFamily::Werner2 { p } => (1.0 + 3.0 * p) / 4.0,
        StateFamily::Weyl2 { t } => 0.25 * (1.0 + t.iter().map(|v| v.abs()).sum::<f64>()),
        StateFamily::Isotropic { f, .. } => f,
        StateFamily::WernerD { d, x } => {
            let df = d as f64;
            if x >= 1.0 / df {
                (1.0 + x) / (df * (df + 1.0))
            } else if d % 2 == 0 {
                (1.0 - x) / (df * (df - 1.0))
            } else {
                let raw = (df * df - df * df * x + df * x + df - 2.0) / (df * (df - 1.0));
                if raw > 1.0 {
                    let mut out = FefResult::new(1.0, FefSource::Analytic);
                    out.warnings.push(format!(
                        "odd-d branch evaluates to {raw} > 1 at d={d}, x={x}; clamped to 1"
                    ));
                    return Ok(out);
                }
                raw
            }
        }
    };
    Ok(FefResult::new(value, FefSource::Analytic))
}

/// Whether the tensor formula on the built matrix matches the closed form to 1e-10.
pub fn fef_consistency(family: &StateFamily) -> bool {
    if !family.is_two_qubit() {
        return false;
    }
    let (Ok(rho), Ok(analytic)) = (build(family), fef_analytic(family)) else {
        return false;
    };
    match fef_tensor(&rho) {
        Ok(t) => (t.value - analytic.value).abs() <= 1e-10,
        Err(_) => false,
    }
}

/// The four Bell vectors `Φ±, Ψ±`.
pub fn bell_basis() -> [Vec<C64>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |v: [f64; 4]| v.iter().map(|&x| C64::new(x * h, 0.0)).collect::<Vec<_>>();
    [
        c([1.0, 0.0, 0.0, 1.0]),
        c([1.0, 0.0, 0.0, -1.0]),
        c([0.0, 1.0, 1.0, 0.0]),
        c([0.0, 1.0, -1.0, 0.0]),
    ]
}

fn overlap(rho: &ComplexMatrix, v: &[C64]) -> f64 {
    let n = v.len();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += v[i].conj() * rho[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Largest overlap with the four Bell states; equals the FEF for Bell-diagonal states.
pub fn fef_max_bell_overlap(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    Ok(bell_basis()
        .iter()
        .map(|v| overlap(rho.matrix(), v))
        .fold(f64::NEG_INFINITY, f64::max))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != (2, 2) {
        let (a, b) = rho.dims();
        return Err(Error::Dimension(format!("expected a 2⊗2 state, got {a}⊗{b}")));
    }
    Ok(())
}

/// Haar-random SU(2) element from a uniform point on S³.
fn random_su2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0] / n, q[1] / n);
    let b = C64::new(q[2] / n, q[3] / n);
    ComplexMatrix::from_rows(2, 2, vec![a, -b.conj(), b, a.conj()]).expect("2×2")
}

/// Best overlap `⟨Φ⁺|(U⊗V)† ρ (U⊗V)|Φ⁺⟩` over `samples` random local unitaries.
/// A lower bound on the FEF; deterministic for a given seed.
pub fn sampled_local_unitary_overlap(rho: &DensityMatrix, samples: usize, seed: u64) -> Result<f64> {
    require_two_qubit(rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = &bell_basis()[0];
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let u = kron(&random_su2(&mut rng), &random_su2(&mut rng));
        let v: Vec<C64> = (0..4).map(|i| (0..4).map(|j| u[(i, j)] * phi[j]).sum()).collect();
        best = best.max(overlap(rho.matrix(), &v));
    }
    Ok(best)
}
