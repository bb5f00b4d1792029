//! κ-deformed exponential and logarithm, the entropy kernel
//! `K̂_α(x) = x^{1-α} - x^{1+α}` and its critical-point analysis.

use serde::Serialize;

use crate::error::{Error, Result};

/// Deformation parameter of the Kaniadakis functions.
///
/// Valid values are the open interval `(0, 1)` plus the sentinel `0`, which
/// selects the classical (Boltzmann-Gibbs / von Neumann) limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    /// The classical-limit sentinel.
    pub const CLASSICAL: Alpha = Alpha(0.0);

    /// Stand-in for the one-sided limit `α → 0⁺` used by table rows labelled `0⁺`.
    pub const ZERO_PLUS: Alpha = Alpha(1e-5);

    pub fn new(value: f64) -> Result<Self> {
        if value == 0.0 || (value > 0.0 && value < 1.0) {
            Ok(Alpha(value))
        } else {
            Err(Error::parameter(
                "alpha",
                value,
                "must lie in (0, 1), or be exactly 0 for the classical limit",
            ))
        }
    }

    /// Like [`Alpha::new`] but rejects the classical sentinel.
    pub fn deformed(value: f64) -> Result<Self> {
        if value == 0.0 {
            return Err(Error::parameter("alpha", value, "a deformed value in (0, 1) is required"));
        }
        Self::new(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 0.0
    }

    fn require_deformed(self) -> Result<f64> {
        if self.is_classical() {
            Err(Error::parameter("alpha", 0.0, "a deformed value in (0, 1) is required"))
        } else {
            Ok(self.0)
        }
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// κ-exponential `(√(1+α²x²) + αx)^{1/α}`, evaluated as `exp(asinh(αx)/α)`.
pub fn kexp(alpha: Alpha, x: f64) -> f64 {
    if alpha.is_classical() {
        return x.exp();
    }
    let a = alpha.value();
    ((a * x).asinh() / a).exp()
}

/// κ-logarithm `(x^α - x^{-α}) / 2α = sinh(α ln x) / α`.
pub fn klog(alpha: Alpha, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("klog requires x > 0, got {x}")));
    }
    if alpha.is_classical() {
        return Ok(x.ln());
    }
    let a = alpha.value();
    Ok((a * x.ln()).sinh() / a)
}

/// `0^q` with the convention `0^q = 0` for `q > 0`.
fn pow_at_zero(q: f64) -> f64 {
    if q > 0.0 {
        0.0
    } else if q == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `x^{1-β} - x^{1+β}` for an arbitrary real index `β` and `x ≥ 0`.
///
/// Indices outside `(0, 1)` (`α ± 1`, `α/2`) only show up inside algebraic
/// identities; they are evaluated by the raw formula. Negative `x` yields NaN.
pub fn khat_with_index(beta: f64, x: f64) -> f64 {
    if x == 0.0 {
        return pow_at_zero(1.0 - beta) - pow_at_zero(1.0 + beta);
    }
    if x < 0.0 {
        return f64::NAN;
    }
    // x^{1-β} - x^{1+β} = -2x sinh(β ln x); no cancellation for small β.
    -2.0 * x * (beta * x.ln()).sinh()
}

/// Unchecked kernel for callers that have already validated `x ≥ 0`.
#[inline]
pub(crate) fn kernel(alpha: f64, x: f64) -> f64 {
    khat_with_index(alpha, x)
}

/// The kernel `K̂_α(x) = x^{1-α} - x^{1+α}`, defined for `x ≥ 0`.
pub fn khat(alpha: Alpha, x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("K̂_α is only evaluated on x ≥ 0, got {x}")));
    }
    Ok(kernel(alpha.value(), x))
}

/// Closed-form derivative `(1-α)x^{-α} - (1+α)x^{α}`.
pub fn khat_derivative(alpha: Alpha, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("K̂_α' requires x > 0, got {x}")));
    }
    let a = alpha.value();
    Ok((1.0 - a) * x.powf(-a) - (1.0 + a) * x.powf(a))
}

/// Argmax of `K̂_α` on the positive reals, `((1-α)/(1+α))^{1/2α}`.
///
/// Computed as `exp(-atanh(α)/α)`; the classical sentinel returns the limit `1/e`.
pub fn fhat(alpha: Alpha) -> f64 {
    if alpha.is_classical() {
        return (-1.0f64).exp();
    }
    let a = alpha.value();
    (-a.atanh() / a).exp()
}

/// Settings for [`bisect`].
#[derive(Debug, Clone, Copy)]
pub struct Bisection {
    pub tol: f64,
    pub max_iter: usize,
}

impl Bisection {
    /// Runs until the bracket cannot be split further in `f64`.
    pub const EXACT: Bisection = Bisection {
        tol: 0.0,
        max_iter: 2100,
    };
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Bracketed bisection for a root of `f` on `[lo, hi]`.
///
/// Stops once the bracket half-width is below `tol` (absolute, on x), the
/// bracket has collapsed to adjacent floats, or the iteration cap is reached,
/// returning the bracket midpoint.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, cfg: Bisection) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if 0.5 * (hi - lo) < cfg.tol || mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Left companion of `level_point`: the `g ∈ [0, f̂(α)]` on the increasing
/// branch of `K̂_α` with `K̂_α(g) = K̂_α(level_point)`.
///
/// Returns `None` when the level is negative (`level_point > 1`), since the
/// increasing branch only takes values in `[0, K̂_α(f̂)]`. A level point that
/// already sits on the increasing branch is its own companion.
pub fn companion_point(alpha: Alpha, level_point: f64) -> Result<Option<f64>> {
    let a = alpha.require_deformed()?;
    if level_point < 0.0 {
        return Err(Error::Domain(format!(
            "companion point requires a non-negative level point, got {level_point}"
        )));
    }
    let peak = fhat(alpha);
    if level_point <= peak {
        return Ok(Some(level_point));
    }
    let target = kernel(a, level_point);
    if target < 0.0 {
        return Ok(None);
    }
    if target == 0.0 {
        return Ok(Some(0.0));
    }
    bisect(|g| kernel(a, g) - target, 0.0, peak, Bisection::EXACT).map(Some)
}

/// `ĝ(α)`: the point left of the maximum where `K̂_α(ĝ) = K̂_α(1/2)`.
pub fn ghat(alpha: Alpha) -> Result<Option<f64>> {
    companion_point(alpha, 0.5)
}

/// Critical-point summary of `K̂_α` for one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KhatProfile {
    pub alpha: Alpha,
    pub fhat: f64,
    pub ghat: Option<f64>,
    pub khat_at_half: f64,
}

impl KhatProfile {
    pub fn new(alpha: Alpha) -> Result<Self> {
        Ok(KhatProfile {
            alpha,
            fhat: fhat(alpha),
            ghat: ghat(alpha)?,
            khat_at_half: kernel(alpha.value(), 0.5),
        })
    }
}

/// `K̂_{α+1}(x) + K̂_{α-1}(x) - K̂_{α/2}(x²)`, which reduces to `x^{-α} - x^{α}`.
pub fn shifted_index_combination(alpha: Alpha, x: f64) -> f64 {
    let a = alpha.value();
    khat_with_index(a + 1.0, x) + khat_with_index(a - 1.0, x) - khat_with_index(a / 2.0, x * x)
}
