//! Small dense complex matrices.
//!
//! Only what the state families need: Kronecker products, partial traces,
//! Hermitian eigenvalues by cyclic Jacobi rotations and singular values via
//! `M†M`. Sizes are capped; every matrix in this crate is at most 256 × 256.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest side accepted by [`hermitian_eigenvalues`].
pub const MAX_EIGEN_SIDE: usize = 256;
/// Largest side accepted by [`singular_values`].
pub const MAX_SVD_SIDE: usize = 16;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_rows(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

/// Pauli matrices `σ₀ = I, σ₁, σ₂, σ₃`.
pub fn pauli(index: usize) -> ComplexMatrix {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let data = match index {
        0 => vec![o, z, z, o],
        1 => vec![z, o, o, z],
        2 => vec![z, -i, i, z],
        3 => vec![o, z, z, -o],
        _ => panic!("Pauli index must be 0..=3, got {index}"),
    };
    ComplexMatrix { rows: 2, cols: 2, data }
}

/// Tensor (Kronecker) product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Cyclic Jacobi: each rotation first removes the phase of the pivot and then
/// applies the real symmetric rotation, so the iteration is deterministic and
/// needs no complex square roots.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Contract(format!("{}×{} matrix is not square", m.rows, m.cols)));
    }
    if m.rows > MAX_EIGEN_SIDE {
        return Err(Error::Contract(format!(
            "side {} exceeds the eigen-solver cap of {MAX_EIGEN_SIDE}",
            m.rows
        )));
    }
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Contract("matrix is not Hermitian".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let scale = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

/// One Jacobi rotation `A ← R† A R` zeroing the `(p, q)` entry.
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g < 1e-300 {
        return;
    }
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // R = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let r_pp = C64::new(c, 0.0);
    let r_pq = C64::new(s, 0.0);
    let r_qp = -phase.conj() * s;
    let r_qq = phase.conj() * c;

    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * r_pp + akq * r_qp;
        a[(k, q)] = akp * r_pq + akq * r_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = r_pp.conj() * apk + r_qp.conj() * aqk;
        a[(q, k)] = r_pq.conj() * apk + r_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Singular values in descending order, from the eigenvalues of `M†M`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows > MAX_SVD_SIDE || m.cols > MAX_SVD_SIDE {
        return Err(Error::Contract(format!(
            "{}×{} exceeds the singular-value cap of {MAX_SVD_SIDE}",
            m.rows, m.cols
        )));
    }
    let gram = m.adjoint().matmul(m)?;
    let mut sv: Vec<f64> = hermitian_eigenvalues(&gram)?
        .into_iter()
        .map(|l| if (-1e-14..0.0).contains(&l) { 0.0 } else { l })
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A bipartite density matrix on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: (usize, usize),
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (λ_min ≥ -1e-10).
    pub fn new(dims: (usize, usize), matrix: ComplexMatrix) -> Result<Self> {
        let (da, db) = dims;
        if da == 0 || db == 0 || !matrix.is_square() || matrix.rows != da * db {
            return Err(Error::Dimension(format!(
                "dims {da}×{db} do not match a {}×{} matrix",
                matrix.rows, matrix.cols
            )));
        }
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::Contract("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Contract(format!("density matrix trace is {tr}, expected 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::Contract(format!(
                "density matrix has negative eigenvalue {min}"
            )));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    /// Skips the positivity check (which needs an eigen-decomposition).
    pub(crate) fn new_unchecked(dims: (usize, usize), matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows, dims.0 * dims.1);
        DensityMatrix { dims, matrix }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `Tr[ρ O]`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        Ok(self.matrix.matmul(op)?.trace())
    }
}

/// Reduced state on `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    let (da, db) = rho.dims;
    let m = &rho.matrix;
    if m.rows != da * db {
        return Err(Error::Contract("dims inconsistent with matrix size".into()));
    }
    let out = match keep {
        Subsystem::A => {
            let mut r = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    r[(i, j)] = (0..db).map(|k| m[(i * db + k, j * db + k)]).sum();
                }
            }
            DensityMatrix::new_unchecked((da, 1), r)
        }
        Subsystem::B => {
            let mut r = ComplexMatrix::zeros(db, db);
            for i in 0..db {
                for j in 0..db {
                    r[(i, j)] = (0..da).map(|k| m[(k * db + i, k * db + j)]).sum();
                }
            }
            DensityMatrix::new_unchecked((1, db), r)
        }
    };
    Ok(out)
}

/// Tensor product of two states as a bipartite state.
pub fn product_state(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new((a.rows, b.rows), kron(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn eigen_examples() {
        assert_close(&hermitian_eigenvalues(&ComplexMatrix::identity(2)).unwrap(), &[1.0, 1.0], 1e-15);
        assert_close(&hermitian_eigenvalues(&pauli(1)).unwrap(), &[-1.0, 1.0], 1e-15);
        assert_close(&hermitian_eigenvalues(&pauli(2)).unwrap(), &[-1.0, 1.0], 1e-15);
        let p = 0.5;
        let w = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0 - p, 0.0, 0.0, 0.0,
                0.0, 1.0 + p, -2.0 * p, 0.0,
                0.0, -2.0 * p, 1.0 + p, 0.0,
                0.0, 0.0, 0.0, 1.0 - p,
            ],
        )
        .unwrap()
        .scale(0.25);
        assert_close(&hermitian_eigenvalues(&w).unwrap(), &[0.125, 0.125, 0.125, 0.625], 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Contract(_))));
        let big = ComplexMatrix::identity(MAX_EIGEN_SIDE + 1);
        assert!(hermitian_eigenvalues(&big).is_err());
    }

    #[test]
    fn singular_value_examples() {
        let t = ComplexMatrix::diagonal(&[-0.4, -0.4, -0.4]);
        assert_close(&singular_values(&t).unwrap(), &[0.4, 0.4, 0.4], 1e-14);
        assert_close(&singular_values(&ComplexMatrix::zeros(3, 3)).unwrap(), &[0.0, 0.0, 0.0], 1e-300);
        let t = ComplexMatrix::diagonal(&[0.5, -0.3, 0.1]);
        assert_close(&singular_values(&t).unwrap(), &[0.5, 0.3, 0.1], 1e-14);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
        assert_eq!(kron(&pauli(3), &pauli(3)), ComplexMatrix::diagonal(&[1.0, -1.0, -1.0, 1.0]));
        // ¼[I − p Σ σᵢ⊗σᵢ] reproduces the printed Werner matrix
        let p = 0.3;
        let mut sum = ComplexMatrix::zeros(4, 4);
        for i in 1..=3 {
            sum = &sum + &kron(&pauli(i), &pauli(i));
        }
        let w = (&ComplexMatrix::identity(4) - &sum.scale(p)).scale(0.25);
        let printed = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0 - p, 0.0, 0.0, 0.0,
                0.0, 1.0 + p, -2.0 * p, 0.0,
                0.0, -2.0 * p, 1.0 + p, 0.0,
                0.0, 0.0, 0.0, 1.0 - p,
            ],
        )
        .unwrap()
        .scale(0.25);
        assert!(w.max_abs_diff(&printed) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = ComplexMatrix::from_rows(
            2,
            2,
            vec![C64::new(0.7, 0.0), C64::new(0.1, 0.2), C64::new(0.1, -0.2), C64::new(0.3, 0.0)],
        )
        .unwrap();
        let rb = ComplexMatrix::diagonal(&[0.2, 0.5, 0.3]);
        let rho = product_state(&ra, &rb).unwrap();
        assert!(partial_trace(&rho, Subsystem::A).unwrap().matrix().max_abs_diff(&ra) < 1e-15);
        assert!(partial_trace(&rho, Subsystem::B).unwrap().matrix().max_abs_diff(&rb) < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new((2, 2), ComplexMatrix::identity(4)).is_err());
        assert!(DensityMatrix::new((2, 3), ComplexMatrix::identity(4).scale(0.25)).is_err());
        assert!(DensityMatrix::new((2, 1), ComplexMatrix::diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new((2, 2), ComplexMatrix::identity(4).scale(0.25)).is_ok());
    }

    fn hermitian_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let (re, im) = v[i * n + j];
                    m[(i, j)] = C64::new(re, im);
                }
            }
            let h = &m + &m.adjoint();
            h.scale(0.5)
        })
    }

    proptest! {
        #[test]
        fn eigen_sum_is_trace(m in (1usize..7).prop_flat_map(hermitian_strategy)) {
            let eig = hermitian_eigenvalues(&m).unwrap();
            let sum: f64 = eig.iter().sum();
            prop_assert!((sum - m.trace().re).abs() < 1e-10 * m.rows() as f64);
            prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn singular_values_of_hermitian_are_abs_eigenvalues(m in (1usize..6).prop_flat_map(hermitian_strategy)) {
            let mut abs: Vec<f64> = hermitian_eigenvalues(&m).unwrap().iter().map(|x| x.abs()).collect();
            abs.sort_by(|a, b| b.total_cmp(a));
            let sv = singular_values(&m).unwrap();
            for (a, b) in abs.iter().zip(&sv) {
                prop_assert!((a - b).abs() < 1e-10, "{abs:?} vs {sv:?}");
            }
        }

        #[test]
        fn eigenvalues_invariant_under_conjugation(m in hermitian_strategy(4), seed in 0u64..1000) {
            // diagonal unitary conjugation keeps the spectrum
            let phases: Vec<C64> = (0..4).map(|k| C64::from_polar(1.0, (seed as f64 + 1.3 * k as f64).sin() * 3.0)).collect();
            let mut u = ComplexMatrix::zeros(4, 4);
            for (k, z) in phases.iter().enumerate() { u[(k, k)] = *z; }
            let conj = u.matmul(&m).unwrap().matmul(&u.adjoint()).unwrap();
            let a = hermitian_eigenvalues(&m).unwrap();
            let b = hermitian_eigenvalues(&conj).unwrap();
            for (x, y) in a.iter().zip(&b) { prop_assert!((x - y).abs() < 1e-12); }
        }
    }
}
