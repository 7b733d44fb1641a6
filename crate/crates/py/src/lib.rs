//! Python bindings for `phasegeo`.
//!
//! Matrices cross the boundary as lists of rows of Python `complex` (plain
//! floats are accepted on input). Reports come back as dicts.
//!
//! ```python
//! import pyphasegeo as pg
//! rho = pg.DensityOperator([[0.75, 0], [0, 0.25]])
//! sx = pg.Observable([[0, 0.5], [0.5, 0]])
//! sy = pg.Observable([[0, -0.5j], [0.5j, 0]])
//! pg.analyze_pair(sx, sy, rho)["geometric_bound"]   # 0.125
//! ```

use phasegeo::uncertainty::{analyze_pair_with, RELATION_TOL};
use phasegeo::{Complex64, ComplexMatrix, Error, UncertaintyReport};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pyphasegeo, RelationViolation, PyArithmeticError);

type Rows = Vec<Vec<Complex64>>;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::RelationViolated { .. } => RelationViolation::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

pub fn matrix_from_rows(rows: &Rows) -> Result<ComplexMatrix, Error> {
    ComplexMatrix::from_rows(rows)
}

pub fn rows_of(m: &ComplexMatrix) -> Rows {
    m.to_rows()
}

fn parse(rows: Rows) -> PyResult<ComplexMatrix> {
    matrix_from_rows(&rows).map_err(to_py_err)
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[pyclass(name = "DensityOperator", module = "pyphasegeo", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyDensity {
    inner: phasegeo::DensityOperator,
}

#[pymethods]
impl PyDensity {
    #[new]
    fn new(matrix: Rows) -> PyResult<Self> {
        let inner = phasegeo::DensityOperator::new(parse(matrix)?).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn diagonal(p: Vec<f64>) -> PyResult<Self> {
        let inner = phasegeo::DensityOperator::diagonal(&p).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn matrix(&self) -> Rows {
        rows_of(self.inner.matrix())
    }

    /// Distinct positive eigenvalues, descending, and their multiplicities.
    fn spectrum(&self) -> PyResult<(Vec<f64>, Vec<usize>)> {
        let s = phasegeo::spectrum_of(
            &self.inner,
            phasegeo::bundle::DEFAULT_RANK_TOL,
            phasegeo::bundle::DEFAULT_DEGENERACY_TOL,
        )
        .map_err(to_py_err)?;
        Ok((s.eigenvalues().to_vec(), s.multiplicities().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("DensityOperator(dimension={})", self.inner.dimension())
    }
}

/// Hermitian matrix.
#[pyclass(name = "Observable", module = "pyphasegeo", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyObservable {
    inner: phasegeo::Observable,
}

#[pymethods]
impl PyObservable {
    #[new]
    fn new(matrix: Rows) -> PyResult<Self> {
        let inner = phasegeo::Observable::new(parse(matrix)?).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn matrix(&self) -> Rows {
        rows_of(self.inner.matrix())
    }

    fn expected_value(&self, rho: &PyDensity) -> PyResult<f64> {
        phasegeo::expected_value(&self.inner, &rho.inner).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Observable(dimension={})", self.inner.dimension())
    }
}

/// A lift Ψ with Ψ†Ψ = P(σ) over a density operator.
#[pyclass(name = "Lift", module = "pyphasegeo", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyLift {
    inner: phasegeo::Lift,
}

#[pymethods]
impl PyLift {
    /// The standard lift of `rho`: eigenvector columns scaled by √p.
    #[staticmethod]
    #[pyo3(signature = (rho, hbar = 1.0))]
    fn standard(rho: &PyDensity, hbar: f64) -> PyResult<Self> {
        let inner = phasegeo::standard_lift(&rho.inner, hbar).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar()
    }

    fn psi(&self) -> Rows {
        rows_of(self.inner.psi())
    }

    fn project(&self) -> PyDensity {
        PyDensity {
            inner: self.inner.project(),
        }
    }

    /// Right action Ψ ↦ ΨU of a block-diagonal unitary.
    fn gauge_transform(&self, u: Rows) -> PyResult<Self> {
        let inner = self.inner.gauge_transform(&parse(u)?).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    /// The Hamiltonian field (Â/iħ)Ψ.
    fn ham_field(&self, a: &PyObservable) -> PyResult<Rows> {
        Ok(rows_of(&phasegeo::ham_field(&a.inner, &self.inner).map_err(to_py_err)?))
    }

    fn connection_form(&self, x: Rows) -> PyResult<Rows> {
        let xi = self.inner.connection_form(&parse(x)?).map_err(to_py_err)?;
        Ok(rows_of(xi.matrix()))
    }

    /// (vertical, horizontal, classification)
    #[pyo3(signature = (x, tol = 1e-10))]
    fn split(&self, x: Rows, tol: f64) -> PyResult<(Rows, Rows, &'static str)> {
        let s = self.inner.split(&parse(x)?).map_err(to_py_err)?;
        let class = s.classify(tol).as_str();
        Ok((rows_of(&s.vertical), rows_of(&s.horizontal), class))
    }

    fn __repr__(&self) -> String {
        format!(
            "Lift(dimension={}, rank={}, hbar={})",
            self.inner.dimension(),
            self.inner.rank(),
            self.inner.hbar()
        )
    }
}

fn report_dict<'py>(py: Python<'py>, r: &UncertaintyReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("deltaA", r.delta_a)?;
    d.set_item("deltaB", r.delta_b)?;
    d.set_item("product", r.product)?;
    d.set_item("riemann", r.riemann)?;
    d.set_item("poisson", r.poisson)?;
    d.set_item("geometric_bound", r.geometric_bound)?;
    d.set_item("rs_bound", r.rs_bound)?;
    d.set_item("slack_geometric", r.slack_geometric)?;
    d.set_item("slack_rs", r.slack_rs)?;
    d.set_item("bound_winner", r.bound_winner.as_str())?;
    Ok(d)
}

/// Full uncertainty report for a pair of observables.
#[pyfunction]
#[pyo3(signature = (a, b, rho, hbar = 1.0))]
fn analyze_pair<'py>(
    py: Python<'py>,
    a: &PyObservable,
    b: &PyObservable,
    rho: &PyDensity,
    hbar: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = analyze_pair_with(&a.inner, &b.inner, &rho.inner, hbar, RELATION_TOL).map_err(to_py_err)?;
    report_dict(py, &r)
}

/// (Riemannian, Poisson) brackets.
#[pyfunction]
#[pyo3(signature = (a, b, rho, hbar = 1.0))]
fn brackets(a: &PyObservable, b: &PyObservable, rho: &PyDensity, hbar: f64) -> PyResult<(f64, f64)> {
    let br = phasegeo::brackets(&a.inner, &b.inner, &rho.inner, hbar).map_err(to_py_err)?;
    Ok((br.riemann, br.poisson))
}

#[pyfunction]
#[pyo3(signature = (a, b, rho, hbar = 1.0))]
fn sym_covariance(a: &PyObservable, b: &PyObservable, rho: &PyDensity, hbar: f64) -> PyResult<f64> {
    phasegeo::sym_covariance(&a.inner, &b.inner, &rho.inner, hbar).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (a, b, rho, hbar = 1.0))]
fn geometric_bound(a: &PyObservable, b: &PyObservable, rho: &PyDensity, hbar: f64) -> PyResult<f64> {
    phasegeo::geometric_bound(&a.inner, &b.inner, &rho.inner, hbar).map_err(to_py_err)
}

#[pyfunction]
fn rs_bound(a: &PyObservable, b: &PyObservable, rho: &PyDensity) -> PyResult<f64> {
    phasegeo::rs_bound(&a.inner, &b.inner, &rho.inner).map_err(to_py_err)
}

#[pyfunction]
fn variance(a: &PyObservable, rho: &PyDensity) -> PyResult<f64> {
    phasegeo::variance(&a.inner, &rho.inner).map_err(to_py_err)
}

/// Eigenvalues (descending) and eigenvector columns of a Hermitian matrix.
#[pyfunction]
fn hermitian_eig(h: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let d = phasegeo::hermitian_eig(&parse(h)?).map_err(to_py_err)?;
    Ok((d.values, rows_of(&d.vectors)))
}

#[pyfunction]
#[pyo3(signature = (x, y, hbar = 1.0))]
fn metric_g(x: Rows, y: Rows, hbar: f64) -> PyResult<f64> {
    phasegeo::metric_g(&parse(x)?, &parse(y)?, hbar).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (x, y, hbar = 1.0))]
fn form_omega(x: Rows, y: Rows, hbar: f64) -> PyResult<f64> {
    phasegeo::form_omega(&parse(x)?, &parse(y)?, hbar).map_err(to_py_err)
}

/// The spin-1/2 example; returns a dict with the report and closed-form checks.
#[pyfunction]
#[pyo3(signature = (p1, hbar = 1.0, tol = 1e-10))]
fn spin_demo<'py>(py: Python<'py>, p1: f64, hbar: f64, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let demo = phasegeo::spin_demo(p1, hbar, tol).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("p1", demo.p1)?;
    d.set_item("p2", demo.p2)?;
    d.set_item("hbar", demo.hbar)?;
    d.set_item("riemann", demo.brackets.riemann)?;
    d.set_item("poisson", demo.brackets.poisson)?;
    d.set_item("direction_sx", demo.direction_x.as_str())?;
    d.set_item("direction_sy", demo.direction_y.as_str())?;
    d.set_item("report", report_dict(py, &demo.report)?)?;
    let checks = PyDict::new(py);
    for c in &demo.checks {
        checks.set_item(c.name, c.passed)?;
    }
    d.set_item("checks", checks)?;
    d.set_item("passed", demo.passed())?;
    Ok(d)
}

/// Runs the invariant battery; returns (name, passed, worst residual, tolerance) rows.
#[pyfunction]
#[pyo3(signature = (dim, samples, seed, tolerance_scale = 1.0))]
fn verify(dim: usize, samples: usize, seed: u64, tolerance_scale: f64) -> PyResult<Vec<(String, bool, f64, f64)>> {
    if dim < 2 || samples == 0 {
        return Err(PyValueError::new_err("need dim >= 2 and samples >= 1"));
    }
    let out = phasegeo::run_battery(&phasegeo::VerifyConfig {
        dim,
        samples,
        seed,
        tolerance_scale,
    });
    Ok(out
        .into_iter()
        .map(|o| (o.name.to_string(), o.passed, o.worst_residual, o.tolerance))
        .collect())
}

#[pymodule]
fn pyphasegeo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyObservable>()?;
    m.add_class::<PyLift>()?;
    m.add_function(wrap_pyfunction!(analyze_pair, m)?)?;
    m.add_function(wrap_pyfunction!(brackets, m)?)?;
    m.add_function(wrap_pyfunction!(sym_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_bound, m)?)?;
    m.add_function(wrap_pyfunction!(rs_bound, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eig, m)?)?;
    m.add_function(wrap_pyfunction!(metric_g, m)?)?;
    m.add_function(wrap_pyfunction!(form_omega, m)?)?;
    m.add_function(wrap_pyfunction!(spin_demo, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("RelationViolation", m.py().get_type::<RelationViolation>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
