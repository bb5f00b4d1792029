//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use kaniadakis_core::bounds::{self, Grid, Theorem};
use kaniadakis_core::entropy::{conditional_k, k_entropy, mutual_k, von_neumann, EntropyReport};
use kaniadakis_core::error::Error;
use kaniadakis_core::fef::fef_analytic;
use kaniadakis_core::kdeform::{self, Alpha};
use kaniadakis_core::linalg::C64;
use kaniadakis_core::states::{build, spectrum_analytic, StateFamily};
use kaniadakis_core::steering::{self, KCopyRule};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Bracket { .. } | Error::Contract(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn alpha(a: f64) -> PyResult<Alpha> {
    Alpha::new(a).map_err(py_err)
}

fn rule(name: &str) -> PyResult<KCopyRule> {
    name.parse().map_err(py_err)
}

/// A member of one of the four state families.
#[pyclass(name = "State", frozen)]
struct PyState(StateFamily);

#[pymethods]
impl PyState {
    /// Parses `werner2:p=0.5`, `weyl2:t=0.1,0.2,0.3`, `iso:d=6,F=0.7` or `wernerd:d=4,x=-1`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyState).map_err(py_err)
    }

    #[staticmethod]
    fn werner2(p: f64) -> PyResult<Self> {
        StateFamily::werner2(p).map(PyState).map_err(py_err)
    }

    #[staticmethod]
    fn weyl2(t1: f64, t2: f64, t3: f64) -> PyResult<Self> {
        StateFamily::weyl2([t1, t2, t3]).map(PyState).map_err(py_err)
    }

    #[staticmethod]
    fn isotropic(d: usize, fidelity: f64) -> PyResult<Self> {
        StateFamily::isotropic(d, fidelity).map(PyState).map_err(py_err)
    }

    #[staticmethod]
    fn werner_d(d: usize, x: f64) -> PyResult<Self> {
        StateFamily::werner_d(d, x).map(PyState).map_err(py_err)
    }

    #[getter]
    fn local_dim(&self) -> usize {
        self.0.local_dim()
    }

    /// Eigenvalues with multiplicities.
    fn spectrum(&self) -> PyResult<Vec<(f64, usize)>> {
        Ok(spectrum_analytic(&self.0).map_err(py_err)?.entries().to_vec())
    }

    fn density_matrix(&self) -> PyResult<Vec<Vec<C64>>> {
        let rho = build(&self.0).map_err(py_err)?;
        let m = rho.matrix();
        Ok((0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect())
    }

    /// κ-entropy of the joint state in nats; `alpha = 0` gives von Neumann.
    fn entropy(&self, alpha_value: f64) -> PyResult<f64> {
        let s = spectrum_analytic(&self.0).map_err(py_err)?;
        Ok(k_entropy(alpha(alpha_value)?, &s))
    }

    /// Von Neumann entropy of the joint state in bits.
    fn von_neumann(&self) -> PyResult<f64> {
        Ok(von_neumann(&spectrum_analytic(&self.0).map_err(py_err)?))
    }

    fn conditional_entropy(&self, alpha_value: f64) -> PyResult<f64> {
        conditional_k(alpha(alpha_value)?, &self.0).map_err(py_err)
    }

    fn mutual_information(&self, alpha_value: f64) -> PyResult<f64> {
        mutual_k(alpha(alpha_value)?, &self.0).map_err(py_err)
    }

    fn entropy_report<'py>(&self, py: Python<'py>, alpha_value: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = EntropyReport::new(alpha(alpha_value)?, &self.0).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("alpha", r.alpha.value())?;
        d.set_item("joint", r.joint)?;
        d.set_item("marginal_b", r.marginal_b)?;
        d.set_item("conditional", r.conditional)?;
        d.set_item("mutual", r.mutual)?;
        Ok(d)
    }

    /// Fully entangled fraction.
    fn fef(&self) -> PyResult<f64> {
        Ok(fef_analytic(&self.0).map_err(py_err)?.value)
    }

    fn __repr__(&self) -> String {
        format!("State('{}')", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
fn khat(alpha_value: f64, x: f64) -> PyResult<f64> {
    kdeform::khat(alpha(alpha_value)?, x).map_err(py_err)
}

#[pyfunction]
fn fhat(alpha_value: f64) -> PyResult<f64> {
    Ok(kdeform::fhat(alpha(alpha_value)?))
}

#[pyfunction]
fn ghat(alpha_value: f64) -> PyResult<Option<f64>> {
    kdeform::ghat(alpha(alpha_value)?).map_err(py_err)
}

#[pyfunction]
fn kexp(alpha_value: f64, x: f64) -> PyResult<f64> {
    Ok(kdeform::kexp(alpha(alpha_value)?, x))
}

#[pyfunction]
fn klog(alpha_value: f64, x: f64) -> PyResult<f64> {
    kdeform::klog(alpha(alpha_value)?, x).map_err(py_err)
}

/// Isotropic fidelity where the conditional κ-entropy changes sign.
#[pyfunction]
fn critical_f(alpha_value: f64, d: usize) -> PyResult<f64> {
    Ok(steering::critical_f(alpha(alpha_value)?, d).map_err(py_err)?.f_star)
}

#[pyfunction]
fn lhs_threshold_projective(d: usize) -> PyResult<f64> {
    steering::lhs_threshold_projective(d).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (d, k, rule_name = "printed"))]
fn kcopy_onset(d: usize, k: u32, rule_name: &str) -> PyResult<f64> {
    steering::kcopy_onset(d, k, rule(rule_name)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (d, k_max = 30, rule_name = "projective"))]
fn min_k_superactivation(d: usize, k_max: u32, rule_name: &str) -> PyResult<Option<u32>> {
    steering::min_k_superactivation(d, k_max, rule(rule_name)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k, d_max = 100, rule_name = "projective"))]
fn min_d_superactivation(k: u32, d_max: usize, rule_name: &str) -> PyResult<Option<usize>> {
    steering::min_d_superactivation(k, d_max, rule(rule_name)?).map_err(py_err)
}

/// Region of Werner `p` excluded from Theorem 2, as text.
#[pyfunction]
fn exception_region1(alpha_value: f64) -> PyResult<String> {
    Ok(bounds::exception_region1(alpha(alpha_value)?).map_err(py_err)?.to_string())
}

/// Runs one certification sweep and returns its summary.
#[pyfunction]
#[pyo3(signature = (theorem, coarse = false))]
fn certify<'py>(py: Python<'py>, theorem: &str, coarse: bool) -> PyResult<Bound<'py, PyDict>> {
    let th: Theorem = theorem.parse().map_err(py_err)?;
    let grid = if coarse { Grid::coarse() } else { Grid::default() };
    let c = bounds::certify(th, &grid).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("theorem", th.label())?;
    d.set_item("points", c.points)?;
    d.set_item("antecedent_true", c.antecedent_true)?;
    d.set_item("inapplicable", c.inapplicable)?;
    d.set_item("inconsistencies", c.inconsistencies.len())?;
    d.set_item("claim_contradictions", c.claim_contradictions.len())?;
    d.set_item("notes", c.notes)?;
    Ok(d)
}

#[pymodule]
fn kaniadakis(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(khat, m)?)?;
    m.add_function(wrap_pyfunction!(fhat, m)?)?;
    m.add_function(wrap_pyfunction!(ghat, m)?)?;
    m.add_function(wrap_pyfunction!(kexp, m)?)?;
    m.add_function(wrap_pyfunction!(klog, m)?)?;
    m.add_function(wrap_pyfunction!(critical_f, m)?)?;
    m.add_function(wrap_pyfunction!(lhs_threshold_projective, m)?)?;
    m.add_function(wrap_pyfunction!(kcopy_onset, m)?)?;
    m.add_function(wrap_pyfunction!(min_k_superactivation, m)?)?;
    m.add_function(wrap_pyfunction!(min_d_superactivation, m)?)?;
    m.add_function(wrap_pyfunction!(exception_region1, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
