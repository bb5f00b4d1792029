//! The four state families, their analytic spectra and the two-qubit
//! Bloch-Fano decomposition.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, ComplexMatrix, DensityMatrix, C64};

/// Largest local dimension for which a family is materialized as a matrix.
pub const MAX_BUILD_DIM: usize = 16;

const SPECTRUM_NEG_TOL: f64 = 1e-12;
const SPECTRUM_SUM_TOL: f64 = 1e-10;

/// Multiset of eigenvalues stored as `(value, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    entries: Vec<(f64, usize)>,
}

impl Spectrum {
    /// Checks nonnegativity (to -1e-12) and unit sum (to 1e-10). Values in the
    /// tolerance band below zero are stored as exact zeros.
    pub fn new(entries: Vec<(f64, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("spectrum is empty".into()));
        }
        let mut clean = Vec::with_capacity(entries.len());
        for (value, mult) in entries {
            if mult == 0 {
                return Err(Error::Domain("zero multiplicity in spectrum".into()));
            }
            if !value.is_finite() || value < -SPECTRUM_NEG_TOL {
                return Err(Error::Domain(format!("negative eigenvalue {value} in spectrum")));
            }
            clean.push((value.max(0.0), mult));
        }
        let total: f64 = clean.iter().map(|&(v, m)| v * m as f64).sum();
        if (total - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::Domain(format!("spectrum sums to {total}, expected 1")));
        }
        Ok(Spectrum { entries: clean })
    }

    /// Uniform spectrum `{1/n × n}`.
    pub fn maximally_mixed(n: usize) -> Self {
        Spectrum {
            entries: vec![(1.0 / n as f64, n)],
        }
    }

    pub fn entries(&self) -> &[(f64, usize)] {
        &self.entries
    }

    /// Total multiplicity, i.e. the Hilbert-space dimension.
    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Every eigenvalue repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    /// Largest difference against a sorted eigenvalue list, or `None` on a size mismatch.
    pub fn max_deviation(&self, eigenvalues: &[f64]) -> Option<f64> {
        let mine = self.expanded();
        if mine.len() != eigenvalues.len() {
            return None;
        }
        let mut other = eigenvalues.to_vec();
        other.sort_by(|a, b| a.total_cmp(b));
        Some(mine.iter().zip(&other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// A parameterized bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum StateFamily {
    /// Two-qubit Werner state with visibility `p ∈ [0, 1]`.
    Werner2 { p: f64 },
    /// Two-qubit Bell-diagonal state with correlations `diag(t₁, t₂, t₃)`.
    Weyl2 { t: [f64; 3] },
    /// `d ⊗ d` isotropic state with singlet fraction `F`.
    Isotropic {
        d: usize,
        #[serde(rename = "F")]
        f: f64,
    },
    /// `d ⊗ d` Werner state with `x = Tr[ρV] ∈ [-1, 1]`.
    WernerD { d: usize, x: f64 },
}

impl StateFamily {
    pub fn werner2(p: f64) -> Result<Self> {
        let s = StateFamily::Werner2 { p };
        s.validate()?;
        Ok(s)
    }

    pub fn weyl2(t: [f64; 3]) -> Result<Self> {
        let s = StateFamily::Weyl2 { t };
        s.validate()?;
        Ok(s)
    }

    pub fn isotropic(d: usize, f: f64) -> Result<Self> {
        let s = StateFamily::Isotropic { d, f };
        s.validate()?;
        Ok(s)
    }

    pub fn werner_d(d: usize, x: f64) -> Result<Self> {
        let s = StateFamily::WernerD { d, x };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StateFamily::Werner2 { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::parameter("p", p, "Werner visibility must lie in [0, 1]"));
                }
            }
            StateFamily::Weyl2 { t } => {
                if t.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parameter {
                        name: "t",
                        value: f64::NAN,
                        reason: "correlations must be finite".into(),
                    });
                }
                for (i, &l) in weyl_eigenvalues(t).iter().enumerate() {
                    if l < -SPECTRUM_NEG_TOL {
                        return Err(Error::Parameter {
                            name: "t",
                            value: l,
                            reason: format!(
                                "Bell-diagonal eigenvalue {} is negative; t = {t:?} is outside the physical tetrahedron",
                                i + 1
                            ),
                        });
                    }
                }
            }
            StateFamily::Isotropic { d, f } => {
                check_dim(d)?;
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::parameter("F", f, "isotropic fidelity must lie in [0, 1]"));
                }
            }
            StateFamily::WernerD { d, x } => {
                check_dim(d)?;
                if !(-1.0..=1.0).contains(&x) {
                    return Err(Error::parameter("x", x, "Werner parameter must lie in [-1, 1]"));
                }
            }
        }
        Ok(())
    }

    /// Local dimension of each party.
    pub fn local_dim(&self) -> usize {
        match *self {
            StateFamily::Werner2 { .. } | StateFamily::Weyl2 { .. } => 2,
            StateFamily::Isotropic { d, .. } | StateFamily::WernerD { d, .. } => d,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        let d = self.local_dim();
        (d, d)
    }

    pub fn is_two_qubit(&self) -> bool {
        self.local_dim() == 2
    }

    /// The maximally mixed member of the same family and dimension.
    pub fn maximally_mixed_member(&self) -> StateFamily {
        match *self {
            StateFamily::Werner2 { .. } => StateFamily::Werner2 { p: 0.0 },
            StateFamily::Weyl2 { .. } => StateFamily::Weyl2 { t: [0.0; 3] },
            StateFamily::Isotropic { d, .. } => StateFamily::Isotropic {
                d,
                f: 1.0 / (d * d) as f64,
            },
            StateFamily::WernerD { d, .. } => StateFamily::WernerD { d, x: 1.0 / d as f64 },
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::parameter("d", d as f64, "local dimension must be at least 2"));
    }
    Ok(())
}

/// Normalized Bell-diagonal eigenvalues of `¼[I + Σ tᵢ σᵢ⊗σᵢ]`.
fn weyl_eigenvalues([t1, t2, t3]: [f64; 3]) -> [f64; 4] {
    [
        (1.0 - t1 - t2 - t3) / 4.0,
        (1.0 - t1 + t2 + t3) / 4.0,
        (1.0 + t1 - t2 + t3) / 4.0,
        (1.0 + t1 + t2 - t3) / 4.0,
    ]
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateFamily::Werner2 { p } => write!(f, "werner2:p={p}"),
            StateFamily::Weyl2 { t } => write!(f, "weyl2:t={},{},{}", t[0], t[1], t[2]),
            StateFamily::Isotropic { d, f: fid } => write!(f, "iso:d={d},F={fid}"),
            StateFamily::WernerD { d, x } => write!(f, "wernerd:d={d},x={x}"),
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    /// Parses `werner2:p=0.5`, `weyl2:t=0.1,0.2,0.3`, `iso:d=6,F=0.7` or `wernerd:d=4,x=-1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in state '{s}'")))?;
        let family = match tag.to_ascii_lowercase().as_str() {
            "werner2" => {
                let kv = key_values(rest)?;
                StateFamily::Werner2 {
                    p: lookup(&kv, "p", s)?,
                }
            }
            "weyl2" => {
                let body = rest
                    .strip_prefix("t=")
                    .ok_or_else(|| Error::Parse(format!("expected 't=t1,t2,t3' in '{s}'")))?;
                let vals: Vec<f64> = body
                    .split(',')
                    .map(|v| parse_f64(v, s))
                    .collect::<Result<_>>()?;
                let t: [f64; 3] = vals
                    .try_into()
                    .map_err(|_| Error::Parse(format!("weyl2 needs exactly three correlations in '{s}'")))?;
                StateFamily::Weyl2 { t }
            }
            "iso" | "isotropic" => {
                let kv = key_values(rest)?;
                StateFamily::Isotropic {
                    d: lookup_dim(&kv, s)?,
                    f: lookup(&kv, "F", s)?,
                }
            }
            "wernerd" => {
                let kv = key_values(rest)?;
                StateFamily::WernerD {
                    d: lookup_dim(&kv, s)?,
                    x: lookup(&kv, "x", s)?,
                }
            }
            other => return Err(Error::Parse(format!("unknown state family '{other}'"))),
        };
        family.validate()?;
        Ok(family)
    }
}

fn key_values(rest: &str) -> Result<Vec<(String, String)>> {
    rest.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))
        })
        .collect()
}

fn parse_f64(v: &str, whole: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("'{v}' is not a number in '{whole}'")))
}

fn lookup(kv: &[(String, String)], key: &str, whole: &str) -> Result<f64> {
    let (_, v) = kv
        .iter()
        .find(|(k, _)| k == key)
        .ok_or_else(|| Error::Parse(format!("missing '{key}=' in '{whole}'")))?;
    parse_f64(v, whole)
}

fn lookup_dim(kv: &[(String, String)], whole: &str) -> Result<usize> {
    let (_, v) = kv
        .iter()
        .find(|(k, _)| k == "d")
        .ok_or_else(|| Error::Parse(format!("missing 'd=' in '{whole}'")))?;
    v.parse()
        .map_err(|_| Error::Parse(format!("'{v}' is not a dimension in '{whole}'")))
}

/// Density matrix of the family member.
pub fn build(family: &StateFamily) -> Result<DensityMatrix> {
    family.validate()?;
    let dims = family.dims();
    let m = match *family {
        StateFamily::Werner2 { p } => bell_diagonal([-p, -p, -p]),
        StateFamily::Weyl2 { t } => bell_diagonal(t),
        StateFamily::Isotropic { d, f } => {
            check_build_dim(d)?;
            let n = d * d;
            let psi = max_entangled(d);
            let proj = ComplexMatrix::projector(&psi);
            let rest = &ComplexMatrix::identity(n) - &proj;
            &proj.scale(f) + &rest.scale((1.0 - f) / (n as f64 - 1.0))
        }
        StateFamily::WernerD { d, x } => {
            check_build_dim(d)?;
            let df = d as f64;
            let denom = df * df * df - df;
            let n = d * d;
            let mut m = ComplexMatrix::identity(n).scale((df - x) / denom);
            let c = (df * x - 1.0) / denom;
            for i in 0..d {
                for j in 0..d {
                    m[(i * d + j, j * d + i)] += C64::new(c, 0.0);
                }
            }
            m
        }
    };
    DensityMatrix::new(dims, m)
}

fn check_build_dim(d: usize) -> Result<()> {
    if d > MAX_BUILD_DIM {
        return Err(Error::parameter(
            "d",
            d as f64,
            "matrices are only materialized for d ≤ 16; use the analytic spectrum",
        ));
    }
    Ok(())
}

/// `(1/√d) Σ |ii⟩`.
fn max_entangled(d: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = C64::new(amp, 0.0);
    }
    v
}

/// `¼[I₄ + Σ tᵢ σᵢ⊗σᵢ]`.
fn bell_diagonal(t: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(4);
    for (i, &ti) in t.iter().enumerate() {
        m = &m + &kron(&pauli(i + 1), &pauli(i + 1)).scale(ti);
    }
    m.scale(0.25)
}

/// Closed-form eigenvalues of the family member.
pub fn spectrum_analytic(family: &StateFamily) -> Result<Spectrum> {
    family.validate()?;
    let entries = match *family {
        StateFamily::Werner2 { p } => vec![((1.0 - p) / 4.0, 3), ((1.0 + 3.0 * p) / 4.0, 1)],
        StateFamily::Weyl2 { t } => weyl_eigenvalues(t).iter().map(|&l| (l, 1)).collect(),
        StateFamily::Isotropic { d, f } => {
            let n = d * d;
            vec![(f, 1), ((1.0 - f) / (n as f64 - 1.0), n - 1)]
        }
        StateFamily::WernerD { d, x } => {
            let df = d as f64;
            vec![
                ((1.0 + x) / (df * df + df), (d * d + d) / 2),
                ((1.0 - x) / (df * df - df), (d * d - d) / 2),
            ]
        }
    };
    Spectrum::new(entries)
}

/// Spectrum of the B marginal: every family here is locally maximally mixed.
pub fn reduced_b(family: &StateFamily) -> Spectrum {
    Spectrum::maximally_mixed(family.local_dim())
}

/// Two-qubit Bloch-Fano coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochDecomposition {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochDecomposition {
    /// `¼[I + a·σ⊗I + I⊗b·σ + Σ t_xy σ_x⊗σ_y]`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let id = pauli(0);
        let mut m = ComplexMatrix::identity(4);
        for i in 0..3 {
            let s = pauli(i + 1);
            m = &m + &kron(&s, &id).scale(self.a[i]);
            m = &m + &kron(&id, &s).scale(self.b[i]);
            for j in 0..3 {
                m = &m + &kron(&s, &pauli(j + 1)).scale(self.t[i][j]);
            }
        }
        m.scale(0.25)
    }

    pub fn correlation_matrix(&self) -> ComplexMatrix {
        let flat: Vec<f64> = self.t.iter().flatten().copied().collect();
        ComplexMatrix::from_real(3, 3, &flat).expect("3×3")
    }
}

pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    if rho.dims() != (2, 2) {
        let (da, db) = rho.dims();
        return Err(Error::Dimension(format!(
            "Bloch decomposition needs a 2⊗2 state, got {da}⊗{db}"
        )));
    }
    let id = pauli(0);
    let mut out = BlochDecomposition {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        let s = pauli(i + 1);
        out.a[i] = rho.expectation(&kron(&s, &id))?.re;
        out.b[i] = rho.expectation(&kron(&id, &s))?.re;
        for j in 0..3 {
            out.t[i][j] = rho.expectation(&kron(&s, &pauli(j + 1)))?.re;
        }
    }
    Ok(out)
}

/// The Weyl eigenvalue expressions as printed, without the ¼ factor:
/// `t₁+t₂+t₃−1, t₁+t₂−t₃+1, t₁−t₂+t₃+1, −t₁+t₂+t₃+1`.
pub fn weyl_printed_eigenvalues([t1, t2, t3]: [f64; 3]) -> [f64; 4] {
    [
        t1 + t2 + t3 - 1.0,
        t1 + t2 - t3 + 1.0,
        t1 - t2 + t3 + 1.0,
        -t1 + t2 + t3 + 1.0,
    ]
}
