//! Executable implication checks linking the conditional κ-entropy to the
//! fully entangled fraction, and the exception regions that gate them.
//!
//! Each check evaluates the antecedent, the bound and the exception-region
//! gate at one parameter point and reports whether the implication
//! `antecedent ∧ applicable ⇒ bound` is violated there. The `certify`
//! function runs a check over a grid and collects any violating points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{conditional_k, mutual_k};
use crate::error::{Error, Result};
use crate::fef::{fef_analytic, TELEPORTATION_THRESHOLD};
use crate::kdeform::{companion_point, fhat, ghat, khat_with_index, kernel, Alpha};
use crate::states::{weyl_printed_eigenvalues, StateFamily};
use crate::steering::proposition_check;

const NOT_EVALUABLE: &str = "proof-step not machine-evaluable";

/// The checked statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    T1,
    C11,
    T2,
    T3,
    T4,
    T5,
    T6,
    /// Steering superactivation with `d = 2` and `k ≥ 7` copies.
    P7,
    /// Steering superactivation with `d ≥ 6` and `k = 2` copies.
    P8,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::T1,
        Theorem::C11,
        Theorem::T2,
        Theorem::T3,
        Theorem::T4,
        Theorem::T5,
        Theorem::T6,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Theorem::T1 => "theorem-1",
            Theorem::C11 => "corollary-1.1",
            Theorem::T2 => "theorem-2",
            Theorem::T3 => "theorem-3",
            Theorem::T4 => "theorem-4",
            Theorem::T5 => "theorem-5",
            Theorem::T6 => "theorem-6",
            Theorem::P7 => "proposition-7",
            Theorem::P8 => "proposition-8",
        }
    }

    /// Whether the statement concludes that the state is not useful for teleportation.
    pub fn claims_not_useful(self) -> bool {
        matches!(self, Theorem::T2 | Theorem::T4)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key
            .strip_prefix("theorem-")
            .or_else(|| key.strip_prefix("corollary-"))
            .or_else(|| key.strip_prefix("proposition-").map(|k| if k == "7" { "p7" } else if k == "8" { "p8" } else { k }))
            .unwrap_or(&key);
        Ok(match key {
            "1" => Theorem::T1,
            "1.1" => Theorem::C11,
            "2" => Theorem::T2,
            "3" => Theorem::T3,
            "4" => Theorem::T4,
            "5" => Theorem::T5,
            "6" => Theorem::T6,
            "p7" => Theorem::P7,
            "p8" => Theorem::P8,
            _ => return Err(Error::Parse(format!("unknown theorem '{s}' (expected 1, 1.1, 2, …, 6)"))),
        })
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Outcome of one check at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub theorem: Theorem,
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "antecedent")]
    pub antecedent_holds: bool,
    #[serde(rename = "lhs")]
    pub bound_lhs: f64,
    #[serde(rename = "rhs")]
    pub bound_rhs: f64,
    #[serde(rename = "holds")]
    pub bound_holds: bool,
    pub applicable: bool,
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl BoundVerdict {
    fn new(
        theorem: Theorem,
        params: &[(&str, f64)],
        antecedent_holds: bool,
        (bound_lhs, bound_rhs, bound_holds): (f64, f64, bool),
        applicable: bool,
    ) -> Self {
        BoundVerdict {
            theorem,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            antecedent_holds,
            bound_lhs,
            bound_rhs,
            bound_holds,
            applicable,
            consistent: !(antecedent_holds && applicable && !bound_holds),
            notes: Vec::new(),
        }
    }

    /// For statements that conclude non-usefulness: the conclusion fires while FEF > ½.
    pub fn claim_contradicted(&self) -> bool {
        self.theorem.claims_not_useful()
            && self.antecedent_holds
            && self.applicable
            && self.bound_holds
            && self.params.get("FEF").is_some_and(|&f| f > TELEPORTATION_THRESHOLD)
    }
}

/// One interval with per-endpoint closedness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

/// Finite union of disjoint intervals, sorted by lower endpoint.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RegionSet {
    intervals: Vec<Interval>,
}

impl RegionSet {
    pub fn empty() -> Self {
        RegionSet::default()
    }

    /// Drops empty intervals and merges overlapping or touching ones.
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|i| !i.is_empty());
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            if let Some(last) = out.last_mut() {
                let touches = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
                if touches {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                        last.hi_closed = iv.hi_closed;
                    } else if iv.hi == last.hi {
                        last.hi_closed |= iv.hi_closed;
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        RegionSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &RegionSet) -> RegionSet {
        RegionSet::new(self.intervals.iter().chain(&other.intervals).copied().collect())
    }
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(
                f,
                "{}{}, {}{}",
                if iv.lo_closed { '[' } else { '(' },
                iv.lo,
                iv.hi,
                if iv.hi_closed { ']' } else { ')' }
            )?;
        }
        Ok(())
    }
}

fn deformed(alpha: Alpha) -> Result<f64> {
    if alpha.is_classical() {
        return Err(Error::parameter("alpha", 0.0, "the bounds need α ∈ (0, 1)"));
    }
    Ok(alpha.value())
}

/// Region of `p` on which the Werner FEF `(1+3p)/4` falls in `(¼, ĝ(α))`.
pub fn exception_region1(alpha: Alpha) -> Result<RegionSet> {
    deformed(alpha)?;
    let g = ghat(alpha)?.expect("K̂_α(½) > 0 always has a companion");
    Ok(region1_from_ghat(g))
}

/// The region-1 construction for a given companion point `g`.
pub fn region1_from_ghat(g: f64) -> RegionSet {
    if g > 0.25 {
        RegionSet::new(vec![Interval::open(0.0, (4.0 * g - 1.0) / 3.0)])
    } else {
        RegionSet::empty()
    }
}

/// First α where `ĝ(α)` crosses ¼, scanning `n` grid points then bisecting.
pub fn region1_onset_alpha(n: usize) -> Result<Option<f64>> {
    let gap = |a: f64| -> Result<f64> {
        let al = Alpha::deformed(a)?;
        Ok(ghat(al)?.unwrap_or(0.0) - 0.25)
    };
    let grid: Vec<f64> = (1..n).map(|i| i as f64 / n as f64).collect();
    let mut prev = (grid[0], gap(grid[0])?);
    for &a in &grid[1..] {
        let v = gap(a)?;
        if v.signum() != prev.1.signum() {
            let (mut lo, mut hi, flo) = (prev.0, a, prev.1);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if 0.5 * (hi - lo) < 1e-12 {
                    break;
                }
                if gap(mid)?.signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev = (a, v);
    }
    Ok(None)
}

fn require_weyl_scope(t: [f64; 3]) -> Result<StateFamily> {
    if let Some(&neg) = t.iter().find(|&&v| v < 0.0) {
        return Err(Error::parameter("t", neg, "the Weyl bounds are stated for t_i ≥ 0"));
    }
    StateFamily::weyl2(t)
}

/// Exception regions 2 for `t`, one per axis, in the coordinate `t_i`.
pub fn exception_region2(alpha: Alpha, t: [f64; 3]) -> Result<[RegionSet; 3]> {
    require_weyl_scope(t)?;
    let theta = t.iter().map(|&ti| 2.0 * (1.0 - ti)).fold(f64::NEG_INFINITY, f64::max);
    exception_region2_at_level(alpha, t, theta)
}

/// Region-2 construction for an explicit level point `θ`.
///
/// Axis `i` uses the argument `a_i = 1 + s - t_i` with `s` the sum of the other
/// two correlations. `a_i` ranges down to `2s` on the physical region, so the
/// gated set is `a_i ∈ (2s, g)` with `g` the companion of `θ`, i.e.
/// `t_i ∈ (1 + s - g, 1 - s)`.
pub fn exception_region2_at_level(alpha: Alpha, t: [f64; 3], theta: f64) -> Result<[RegionSet; 3]> {
    deformed(alpha)?;
    let g = companion_point(alpha, theta.max(0.0))?;
    Ok(std::array::from_fn(|i| {
        let s = t[(i + 1) % 3] + t[(i + 2) % 3];
        match g {
            Some(g) if g > 2.0 * s => RegionSet::new(vec![Interval::open(1.0 + s - g, 1.0 - s)]),
            _ => RegionSet::empty(),
        }
    }))
}

/// `(½)^{-α} - (½)^{α}`, i.e. `2K̂_α(½)`.
fn half_power_gap(a: f64) -> f64 {
    0.5f64.powf(-a) - 0.5f64.powf(a)
}

pub fn theorem1_check(alpha: Alpha, p: f64) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    let fam = StateFamily::werner2(p)?;
    let cond = conditional_k(alpha, &fam)?;
    let fef = (1.0 + 3.0 * p) / 4.0;
    let delta = (1.0 - p) / 4.0;
    let lhs = kernel(a, fef);
    let rhs_statement = khat_with_index(a + 1.0, 0.5) + khat_with_index(a - 1.0, 0.5)
        - khat_with_index(a / 2.0, 0.25)
        - 3.0 * kernel(a, delta);
    let rhs_proof = half_power_gap(a) - 3.0 * kernel(a, delta);
    let mut v = BoundVerdict::new(
        Theorem::T1,
        &[("alpha", a), ("p", p), ("FEF", fef), ("conditional", cond)],
        cond < 0.0,
        (lhs, rhs_statement, lhs < rhs_statement),
        true,
    );
    if (rhs_statement - rhs_proof).abs() > 1e-12 {
        v.notes.push(format!(
            "statement and proof right-hand sides differ: {rhs_statement} vs {rhs_proof}"
        ));
    }
    Ok(v)
}

/// How the corollary's hypothesis on the mutual information is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MutualReading {
    /// `I ≤ ε`, as used in the proof; pairs with `K̂(FEF) ≥ 4K̂(½) − 3K̂(δ) − 2εα`.
    #[default]
    UpperBounded,
    /// `I ≥ ε`, as in the parenthetical; pairs with `K̂(FEF) ≤ 4K̂(½) − 3K̂(δ) − 2εα`.
    LowerBounded,
}

impl FromStr for MutualReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "upper" | "le" | "upper-bounded" => Ok(MutualReading::UpperBounded),
            "lower" | "ge" | "lower-bounded" => Ok(MutualReading::LowerBounded),
            _ => Err(Error::Parse(format!("unknown mutual-information reading '{s}' (upper|lower)"))),
        }
    }
}

pub fn corollary11_check(alpha: Alpha, p: f64, eps: f64, reading: MutualReading) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    if !(eps > 0.0) {
        return Err(Error::parameter("eps", eps, "must be strictly positive"));
    }
    let fam = StateFamily::werner2(p)?;
    let mutual = mutual_k(alpha, &fam)?;
    let fef = (1.0 + 3.0 * p) / 4.0;
    let delta = (1.0 - p) / 4.0;
    let lhs = kernel(a, fef);
    let rhs = 4.0 * kernel(a, 0.5) - 3.0 * kernel(a, delta) - 2.0 * eps * a;
    // ½K̂(FEF) ≥ K̂_{α+1}(½) + K̂_{α−1}(½) − K̂_{α/2}(¼) − (3/2)K̂(δ) − εα
    let half_rhs = khat_with_index(a + 1.0, 0.5) + khat_with_index(a - 1.0, 0.5)
        - khat_with_index(a / 2.0, 0.25)
        - 1.5 * kernel(a, delta)
        - eps * a;
    let (antecedent, holds) = match reading {
        MutualReading::UpperBounded => (mutual <= eps, lhs >= rhs),
        MutualReading::LowerBounded => (mutual >= eps, lhs <= rhs),
    };
    let mut v = BoundVerdict::new(
        Theorem::C11,
        &[("alpha", a), ("p", p), ("eps", eps), ("FEF", fef), ("mutual", mutual)],
        antecedent,
        (lhs, rhs, holds),
        true,
    );
    if ((0.5 * lhs >= half_rhs) != (lhs >= rhs)) && (0.5 * lhs - half_rhs).abs() > 1e-12 {
        v.notes.push("halved form disagrees with the full form".into());
    }
    v.notes.push(match reading {
        MutualReading::UpperBounded => format!("reading I ≤ ε; printed ≤ form holds: {}", lhs <= rhs),
        MutualReading::LowerBounded => format!("reading I ≥ ε; rearranged ≥ form holds: {}", lhs >= rhs),
    });
    Ok(v)
}

pub fn theorem2_check(alpha: Alpha, p: f64) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    let fam = StateFamily::werner2(p)?;
    let cond = conditional_k(alpha, &fam)?;
    let applicable = !exception_region1(alpha)?.contains(p);
    let fef = (1.0 + 3.0 * p) / 4.0;
    let delta = (1.0 - p) / 4.0;
    let lhs = kernel(a, delta);
    let rhs = (kernel(a, 0.5) - khat_with_index(a + 1.0, 0.5) - khat_with_index(a - 1.0, 0.5)
        + khat_with_index(a / 2.0, 0.25))
        / 3.0;
    let mut v = BoundVerdict::new(
        Theorem::T2,
        &[("alpha", a), ("p", p), ("FEF", fef), ("conditional", cond)],
        cond < 0.0 && applicable,
        (lhs, rhs, lhs > rhs),
        applicable,
    );
    v.notes.push(format!(
        "K̂(δ) < K̂(½)/3 (chain from FEF < ½ and Theorem 1): {}",
        lhs < kernel(a, 0.5) / 3.0
    ));
    if v.claim_contradicted() {
        v.notes.push(format!("conclusion 'not useful' fires with FEF = {fef} > ½"));
    }
    Ok(v)
}

/// Conditional κ-entropy from the printed unnormalized Weyl eigenvalues, or
/// `None` when a base is negative and the real power is undefined.
pub fn weyl_printed_conditional(alpha: Alpha, t: [f64; 3]) -> Result<Option<f64>> {
    let a = deformed(alpha)?;
    let vals = weyl_printed_eigenvalues(t);
    if vals.iter().any(|&l| l < 0.0) {
        return Ok(None);
    }
    let joint: f64 = vals.iter().map(|&l| kernel(a, l)).sum();
    Ok(Some((joint - 2.0 * kernel(a, 0.5)) / (2.0 * a)))
}

pub fn theorem3_check(alpha: Alpha, t: [f64; 3]) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    let fam = require_weyl_scope(t)?;
    let cond = conditional_k(alpha, &fam)?;
    let fef = fef_analytic(&fam)?.value;
    let mut notes = Vec::new();
    let mut lhs = 0.0;
    // the t̃ = 0 term enters the proof as K̂(4·FEF − 2) = K̂(Σt − 1)
    let args = [4.0 * fef - 2.0, 4.0 * fef - 2.0 * t[0], 4.0 * fef - 2.0 * t[1], 4.0 * fef - 2.0 * t[2]];
    for arg in args {
        if arg < 0.0 {
            notes.push(format!("{NOT_EVALUABLE}: K̂({arg}) skipped"));
        } else {
            lhs += kernel(a, arg);
        }
    }
    let rhs = 2.0 * kernel(a, 0.5);
    let mut v = BoundVerdict::new(
        Theorem::T3,
        &[("alpha", a), ("t1", t[0]), ("t2", t[1]), ("t3", t[2]), ("FEF", fef), ("conditional", cond)],
        cond < 0.0,
        (lhs, rhs, lhs < rhs),
        true,
    );
    v.notes = notes;
    v.notes.push(match weyl_printed_conditional(alpha, t)? {
        Some(c) => format!("printed-convention conditional entropy: {c}"),
        None => "printed-convention undefined".to_string(),
    });
    Ok(v)
}

/// Gate used by Theorem 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegionMode {
    /// `t_i ∉ J̃_i` for each axis.
    #[default]
    PerAxis,
    /// Every `t_i` outside the union `J̃₁ ∪ J̃₂ ∪ J̃₃`.
    Contracted,
}

pub fn theorem4_check(alpha: Alpha, t: [f64; 3], mode: RegionMode) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    let fam = require_weyl_scope(t)?;
    let cond = conditional_k(alpha, &fam)?;
    let fef = fef_analytic(&fam)?.value;
    let regions = exception_region2(alpha, t)?;
    let applicable = match mode {
        RegionMode::PerAxis => (0..3).all(|i| !regions[i].contains(t[i])),
        RegionMode::Contracted => {
            let union = regions[0].union(&regions[1]).union(&regions[2]);
            t.iter().all(|&ti| !union.contains(ti))
        }
    };
    let lhs: f64 = t.iter().map(|&ti| kernel(a, 2.0 * (1.0 - ti))).sum();
    let rhs = 2.0 * kernel(a, 0.5);
    let mut v = BoundVerdict::new(
        Theorem::T4,
        &[("alpha", a), ("t1", t[0]), ("t2", t[1]), ("t3", t[2]), ("FEF", fef), ("conditional", cond)],
        cond < 0.0,
        (lhs, rhs, lhs < rhs),
        applicable,
    );
    if v.claim_contradicted() {
        v.notes.push(format!("conclusion 'not useful' fires with FEF = {fef} > ½"));
    }
    Ok(v)
}

/// `δ` for the isotropic bound: the smaller eigenvalue when `F > 1/d²`, the larger otherwise.
pub fn isotropic_delta(d: usize, f: f64) -> f64 {
    let n = (d * d) as f64;
    let other = (1.0 - f) / (n - 1.0);
    if f > 1.0 / n {
        f.min(other)
    } else {
        f.max(other)
    }
}

pub fn theorem5_check(alpha: Alpha, d: usize, f: f64) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    let fam = StateFamily::isotropic(d, f)?;
    let cond = conditional_k(alpha, &fam)?;
    let df = d as f64;
    let delta = isotropic_delta(d, f);
    let lhs = kernel(a, f) + (df * df - 1.0) * kernel(a, delta);
    let rhs = df * kernel(a, 1.0 / df);
    Ok(BoundVerdict::new(
        Theorem::T5,
        &[("alpha", a), ("d", df), ("F", f), ("delta", delta), ("conditional", cond)],
        cond < 0.0,
        (lhs, rhs, lhs < rhs),
        true,
    ))
}

pub fn theorem6_check(alpha: Alpha, d: usize, x: f64) -> Result<BoundVerdict> {
    let a = deformed(alpha)?;
    if x != 1.0 && x != -1.0 {
        return Err(Error::parameter("x", x, "the two-qudit Werner bound is stated for x = ±1"));
    }
    if x == -1.0 && d % 2 == 1 {
        return Err(Error::OutOfScope(format!("x = -1 requires even d, got d = {d}")));
    }
    let fam = StateFamily::werner_d(d, x)?;
    let cond = conditional_k(alpha, &fam)?;
    let df = d as f64;
    let fef = if x == 1.0 { 2.0 / (df * df + df) } else { 2.0 / (df * df - df) };
    let lhs = kernel(a, fef) / fef;
    let rhs = kernel(a, 1.0 / df) * df;
    let lhs_pow = fef.powf(-a) - fef.powf(a);
    let rhs_pow = df.powf(a) - df.powf(-a);
    let mut v = BoundVerdict::new(
        Theorem::T6,
        &[("alpha", a), ("d", df), ("x", x), ("FEF", fef), ("conditional", cond)],
        cond < 0.0,
        (lhs, rhs, lhs < rhs),
        true,
    );
    if (lhs - lhs_pow).abs() > 1e-12 || (rhs - rhs_pow).abs() > 1e-12 {
        v.notes.push(format!("ratio and power forms differ: {lhs}/{rhs} vs {lhs_pow}/{rhs_pow}"));
    }
    Ok(v)
}

/// Parameter grids for the certification sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub alphas: Vec<f64>,
    /// Step for scalar parameters (`p`, `F`).
    pub scalar_step: f64,
    /// Step per axis for Weyl correlation vectors.
    pub t_step: f64,
    pub eps: Vec<f64>,
    pub iso_dims: Vec<usize>,
    pub werner_dims: Vec<usize>,
    pub region_mode: RegionMode,
    pub reading: MutualReading,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            alphas: (1..=19).map(|i| i as f64 * 0.05).collect(),
            scalar_step: 0.01,
            t_step: 0.05,
            eps: vec![1e-3, 1e-2, 0.1, 1.0, 1e6],
            iso_dims: (2..=8).collect(),
            werner_dims: (2..=50).collect(),
            region_mode: RegionMode::PerAxis,
            reading: MutualReading::UpperBounded,
        }
    }
}

impl Grid {
    /// A coarse grid for smoke runs.
    pub fn coarse() -> Self {
        Grid {
            alphas: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            scalar_step: 0.05,
            t_step: 0.1,
            eps: vec![1e-2, 1.0, 1e6],
            iso_dims: vec![2, 3, 6],
            werner_dims: vec![2, 3, 4, 5, 6],
            ..Grid::default()
        }
    }

    fn steps(step: f64) -> Vec<f64> {
        let n = (1.0 / step).round() as usize;
        (0..=n).map(|i| (i as f64 / n as f64).min(1.0)).collect()
    }

    /// Every `t` with nonnegative entries on the step lattice inside the physical region.
    pub fn weyl_points(&self) -> Vec<[f64; 3]> {
        let n = (1.0 / self.t_step).round() as usize;
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=(n - i) {
                for k in 0..=(n - i - j) {
                    let t = [i as f64 / n as f64, j as f64 / n as f64, k as f64 / n as f64];
                    if StateFamily::weyl2(t).is_ok() {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// Outcome of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub theorem: Theorem,
    pub points: usize,
    pub antecedent_true: usize,
    pub inapplicable: usize,
    pub inconsistencies: Vec<BoundVerdict>,
    /// Points where a "not useful" conclusion fires on a state with FEF > ½.
    pub claim_contradictions: Vec<BoundVerdict>,
    /// Distinct notes seen across the sweep.
    pub notes: Vec<String>,
}

impl Certification {
    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }
}

type Job = Box<dyn Fn() -> Result<BoundVerdict> + Send + Sync>;

fn jobs_for(theorem: Theorem, grid: &Grid) -> Result<Vec<Job>> {
    let mut jobs: Vec<Job> = Vec::new();
    let alphas: Vec<Alpha> = grid.alphas.iter().map(|&a| Alpha::deformed(a)).collect::<Result<_>>()?;
    let scalars = Grid::steps(grid.scalar_step);
    for &al in &alphas {
        match theorem {
            Theorem::T1 | Theorem::T2 => {
                for &p in &scalars {
                    jobs.push(if theorem == Theorem::T1 {
                        Box::new(move || theorem1_check(al, p))
                    } else {
                        Box::new(move || theorem2_check(al, p))
                    });
                }
            }
            Theorem::C11 => {
                for &eps in &grid.eps {
                    for &p in &scalars {
                        let r = grid.reading;
                        jobs.push(Box::new(move || corollary11_check(al, p, eps, r)));
                    }
                }
            }
            Theorem::T3 | Theorem::T4 => {
                for t in grid.weyl_points() {
                    let mode = grid.region_mode;
                    jobs.push(if theorem == Theorem::T3 {
                        Box::new(move || theorem3_check(al, t))
                    } else {
                        Box::new(move || theorem4_check(al, t, mode))
                    });
                }
            }
            Theorem::T5 => {
                for &d in &grid.iso_dims {
                    for &f in &scalars {
                        jobs.push(Box::new(move || theorem5_check(al, d, f)));
                    }
                }
            }
            Theorem::T6 => {
                for &d in &grid.werner_dims {
                    for x in [1.0, -1.0] {
                        if x == -1.0 && d % 2 == 1 {
                            continue;
                        }
                        jobs.push(Box::new(move || theorem6_check(al, d, x)));
                    }
                }
            }
            Theorem::P7 | Theorem::P8 => {
                let (d, k) = if theorem == Theorem::P7 { (2, 7) } else { (6, 2) };
                for &f in &scalars {
                    jobs.push(Box::new(move || proposition_check(al, d, k, f)));
                }
            }
        }
    }
    Ok(jobs)
}

/// Runs one check over the grid, in parallel, keeping grid order in the output.
pub fn certify(theorem: Theorem, grid: &Grid) -> Result<Certification> {
    let jobs = jobs_for(theorem, grid)?;
    let verdicts: Vec<BoundVerdict> = jobs.par_iter().map(|job| job()).collect::<Result<_>>()?;
    let mut notes: Vec<String> = verdicts
        .iter()
        .flat_map(|v| v.notes.iter())
        .filter(|n| n.starts_with(NOT_EVALUABLE) || n.starts_with("printed-convention undefined"))
        .map(|n| n.split(':').next().unwrap_or(n).to_string())
        .collect();
    notes.sort();
    notes.dedup();
    Ok(Certification {
        theorem,
        points: verdicts.len(),
        antecedent_true: verdicts.iter().filter(|v| v.antecedent_holds).count(),
        inapplicable: verdicts.iter().filter(|v| !v.applicable).count(),
        inconsistencies: verdicts.iter().filter(|v| !v.consistent).cloned().collect(),
        claim_contradictions: verdicts.iter().filter(|v| v.claim_contradicted()).cloned().collect(),
        notes,
    })
}

/// Helper shared with the region tests: endpoints of region 2 satisfy
/// `K̂(a) = K̂(θ)` and `K̂'(a) > 0` at the upper argument.
pub fn region2_endpoint_residual(alpha: Alpha, theta: f64, g: f64) -> (f64, f64) {
    let a = alpha.value();
    let residual = kernel(a, g) - kernel(a, theta);
    let slope = (1.0 - a) * g.powf(-a) - (1.0 + a) * g.powf(a);
    (residual, slope)
}

/// Levels `θ ∈ (f̂(α), 1)`, where the companion construction is non-trivial.
pub fn region2_level_window(alpha: Alpha) -> (f64, f64) {
    (fhat(alpha), 1.0)
}
