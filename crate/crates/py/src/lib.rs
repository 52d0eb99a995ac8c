//! Python bindings: field elements, presets with axiom checks, gauge twists,
//! R-matrix solving, coproduct classification, fusion and the full pipeline.
//!
//! Structured results cross the boundary as JSON and come back as plain dicts.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quasihopf::classification::coproduct::classify_coproduct as classify;
use quasihopf::classification::rmatrix::{r_fe_block, solve_rmatrix_eps};
use quasihopf::classification::{braided_standard, standard_coproduct, CoalgebraParams, CoproductParams};
use quasihopf::pipeline::{run_pipeline, PipelineConfig};
use quasihopf::presets::build_cartan;
use quasihopf::quasi::{gauge_twist, verify_all};
use quasihopf::sampling::random_twist;
use quasihopf::{BetaChoice, CycNum, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn beta(k: u8) -> PyResult<BetaChoice> {
    BetaChoice::new(k).map_err(err)
}

/// Element of Q(ζ8). Accepts an int, a string such as "1/2 + zeta^3", or another Cyc.
#[pyclass(name = "Cyc", module = "quasihopf_py", eq, hash, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Cyc(CycNum);

fn cyc_of(v: &Bound<'_, PyAny>) -> PyResult<CycNum> {
    if let Ok(c) = v.cast::<Cyc>() {
        return Ok(c.get().0.clone());
    }
    if let Ok(n) = v.extract::<i64>() {
        return Ok(CycNum::from_int(n));
    }
    let s: String = v.extract()?;
    s.parse().map_err(err)
}

fn cyc_or(v: Option<&Bound<'_, PyAny>>, default: CycNum) -> PyResult<CycNum> {
    v.map_or(Ok(default), cyc_of)
}

#[pymethods]
impl Cyc {
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        cyc_of(value).map(Cyc)
    }

    #[staticmethod]
    fn zeta() -> Self {
        Cyc(CycNum::zeta())
    }

    /// Rational coordinates in the basis 1, ζ, ζ², ζ³.
    fn coeffs(&self) -> [String; 4] {
        self.0.to_strings()
    }

    fn to_complex(&self) -> (f64, f64) {
        self.0.embed_complex()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inv().map(Cyc).map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __add__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Cyc(&self.0 + &cyc_of(o)?))
    }

    fn __radd__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.__add__(o)
    }

    fn __sub__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Cyc(&self.0 - &cyc_of(o)?))
    }

    fn __rsub__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Cyc(&cyc_of(o)? - &self.0))
    }

    fn __mul__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Cyc(&self.0 * &cyc_of(o)?))
    }

    fn __rmul__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.__mul__(o)
    }

    fn __truediv__(&self, o: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0
            .checked_div(&cyc_of(o)?)
            .map(Cyc)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __pow__(&self, e: i64, _m: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        self.0.pow(e).map(Cyc).map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __neg__(&self) -> Self {
        Cyc(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cyc('{}')", self.0)
    }
}

/// Quasi-bialgebra preset with optional R-matrix.
#[pyclass(name = "QuasiBialgebra", module = "quasihopf_py", frozen)]
struct PyQuasi(quasihopf::QuasiBialgebra);

#[pymethods]
impl PyQuasi {
    /// Normal-form coproduct on u_i(sl2) with its R-matrix.
    #[staticmethod]
    #[pyo3(signature = (d = None, eps = None, beta_exponent = 1))]
    fn standard(d: Option<&Bound<'_, PyAny>>, eps: Option<&Bound<'_, PyAny>>, beta_exponent: u8) -> PyResult<Self> {
        braided_standard(&cyc_or(d, CycNum::i())?, &cyc_or(eps, CycNum::one())?, beta(beta_exponent)?).map(PyQuasi).map_err(err)
    }

    /// Normal-form coproduct without R.
    #[staticmethod]
    #[pyo3(signature = (d = None, eps = None, beta_exponent = 1))]
    fn unbraided(d: Option<&Bound<'_, PyAny>>, eps: Option<&Bound<'_, PyAny>>, beta_exponent: u8) -> PyResult<Self> {
        standard_coproduct(&cyc_or(d, CycNum::i())?, &cyc_or(eps, CycNum::one())?, beta(beta_exponent)?).map(PyQuasi).map_err(err)
    }

    /// Four-dimensional Cartan part.
    #[staticmethod]
    #[pyo3(signature = (beta_exponent = 1))]
    fn cartan(beta_exponent: u8) -> PyResult<Self> {
        Ok(PyQuasi(build_cartan(beta(beta_exponent)?).quasi_bialgebra()))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.labels().len()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn has_r(&self) -> bool {
        self.0.r().is_some()
    }

    /// One dict per axiom: name, status, residual count, witnesses.
    fn verify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let reports = py.detach(|| verify_all(&self.0));
        to_py(py, &reports)
    }

    fn all_pass(&self, py: Python<'_>) -> bool {
        py.detach(|| verify_all(&self.0).iter().all(|r| r.passed()))
    }

    /// Gauge transform by a seeded random twist.
    #[pyo3(signature = (seed, max_terms = 3))]
    fn twisted(&self, seed: u64, max_terms: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_twist(&mut rng, &self.0, max_terms);
        PyQuasi(gauge_twist(&self.0, &t))
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.0.to_json())
    }

    fn __repr__(&self) -> String {
        format!("QuasiBialgebra('{}')", self.0.name)
    }
}

/// Solve for R on the normal form; the dict includes the F⊗E block as strings.
#[pyfunction]
#[pyo3(signature = (d, eps = None, beta_exponent = 1))]
fn solve_rmatrix(py: Python<'_>, d: &Bound<'_, PyAny>, eps: Option<&Bound<'_, PyAny>>, beta_exponent: u8) -> PyResult<Py<PyAny>> {
    let (d, eps, b) = (cyc_of(d)?, cyc_or(eps, CycNum::one())?, beta(beta_exponent)?);
    let sol = py.detach(|| solve_rmatrix_eps(&d, &eps, b)).map_err(err)?;
    let block = sol.r.as_ref().map(r_fe_block);
    to_py(py, &serde_json::json!({ "solution": sol, "r_fe": block }))
}

/// Classify one coproduct tuple given as comma-separated parameter lists.
#[pyfunction]
#[pyo3(signature = (c, eps, cbar, eps_bar, beta_exponent = 1))]
fn classify_coproduct(py: Python<'_>, c: &str, eps: &str, cbar: &str, eps_bar: &str, beta_exponent: u8) -> PyResult<Py<PyAny>> {
    let p = CoproductParams {
        lower: CoalgebraParams::parse(c, eps).map_err(err)?,
        upper: CoalgebraParams::parse(cbar, eps_bar).map_err(err)?,
    };
    let b = beta(beta_exponent)?;
    let v = py.detach(|| classify(&p, b));
    to_py(py, &v)
}

/// Evaluate a fusion expression and return its normal form.
#[pyfunction]
#[pyo3(signature = (expr, p = 2))]
fn fuse(expr: &str, p: u32) -> PyResult<String> {
    quasihopf::fusion::evaluate(expr, p).map(|e| e.to_string()).map_err(err)
}

/// Summands of a fusion expression as dicts.
#[pyfunction]
#[pyo3(signature = (expr, p = 2))]
fn fuse_terms(py: Python<'_>, expr: &str, p: u32) -> PyResult<Py<PyAny>> {
    let e = quasihopf::fusion::evaluate(expr, p).map_err(err)?;
    to_py(py, &e)
}

/// Run the full pipeline; `config` is a JSON string or None for defaults.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn pipeline(py: Python<'_>, config: Option<&str>) -> PyResult<Py<PyAny>> {
    let cfg = match config {
        Some(s) => PipelineConfig::from_json(s).map_err(err)?,
        None => PipelineConfig::default(),
    };
    let rep = py.detach(|| run_pipeline(&cfg)).map_err(err)?;
    to_py(py, &rep)
}

#[pymodule]
fn quasihopf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Cyc>()?;
    m.add_class::<PyQuasi>()?;
    m.add_function(wrap_pyfunction!(solve_rmatrix, m)?)?;
    m.add_function(wrap_pyfunction!(classify_coproduct, m)?)?;
    m.add_function(wrap_pyfunction!(fuse, m)?)?;
    m.add_function(wrap_pyfunction!(fuse_terms, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline, m)?)?;
    Ok(())
}
