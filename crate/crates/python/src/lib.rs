//! Python bindings: scenarios, check runs, the numeric oracle and subframe
//! classification.

use std::path::PathBuf;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use contact_pair_lab::corpus::{self, build_metric_pair, CheckReport, RunOptions, Selection};
use contact_pair_lab::probe::{ProbeSet, DEFAULT_PROBES, DEFAULT_SEED};
use contact_pair_lab::submanifold::{classify, shape_data, Subframe};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated scenario: frame, forms, structure tensor, metric and subframes.
#[pyclass(name = "Scenario", frozen)]
struct PyScenario(corpus::Scenario);

#[pymethods]
impl PyScenario {
    /// Parse scenario JSON text.
    #[staticmethod]
    #[pyo3(signature = (text, name = "scenario"))]
    fn from_json(text: &str, name: &str) -> PyResult<Self> {
        corpus::parse_scenario(text, name).map(PyScenario).map_err(value_error)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn coordinates(&self) -> Vec<String> {
        self.0.coordinates().names().to_vec()
    }

    #[getter]
    fn submanifolds(&self) -> Vec<String> {
        self.0.submanifolds.iter().map(|(n, _)| n.clone()).collect()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Run the selected check groups; `checks` is a comma-separated list or `all`.
    #[pyo3(signature = (checks = "all", seed = DEFAULT_SEED, probes = DEFAULT_PROBES))]
    fn run_checks(&self, py: Python<'_>, checks: &str, seed: u64, probes: usize) -> PyResult<PyCheckReport> {
        let selection: Selection = checks.parse().map_err(value_error)?;
        let s = &self.0;
        Ok(PyCheckReport(py.detach(|| corpus::run_checks(s, &selection, RunOptions { seed, probes }))))
    }

    /// Floating-point residual of an identity, independent of the symbolic engine.
    #[pyo3(signature = (identity, probes = 16, seed = DEFAULT_SEED))]
    fn numeric_oracle(&self, py: Python<'_>, identity: &str, probes: usize, seed: u64) -> PyResult<f64> {
        let s = &self.0;
        py.detach(|| corpus::numeric_oracle(s, identity, probes, seed)).map_err(value_error)
    }

    /// Invariance profile and mean curvature of a named subframe.
    #[pyo3(signature = (name, seed = DEFAULT_SEED))]
    fn classify(&self, name: &str, seed: u64) -> PyResult<PyProfile> {
        let s = &self.0;
        let span = s.submanifold(name).ok_or_else(|| PyKeyError::new_err(name.to_string()))?;
        let probes = ProbeSet::new(s.frame.base_point().to_vec(), seed, DEFAULT_PROBES);
        let mcp = build_metric_pair(s, &probes).map_err(value_error)?;
        let sub = Subframe::new(s.frame.clone(), span.to_vec()).map_err(value_error)?;
        let p = classify(&sub, &mcp, &probes).map_err(value_error)?;
        let shape = shape_data(&sub, &mcp).map_err(value_error)?;
        let vars = s.coordinates().names();
        Ok(PyProfile {
            dim: p.dim,
            position: p.position.as_str().to_string(),
            phi_invariant: p.phi_invariant,
            j_invariant: p.j_invariant,
            t_invariant: p.t_invariant,
            rho_invariant: p.rho_invariant,
            tangential_norm_sq: p.tangential_norm_sq.iter().map(|e| e.to_text(vars)).collect(),
            mean_curvature: shape.mean_curvature.components().iter().map(|c| c.to_text(vars)).collect(),
            minimal: shape.minimal,
            warnings: p.warnings.clone(),
            summary: p.summary(),
        })
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?})", self.0.name)
    }
}

/// Verdicts of one run.
#[pyclass(name = "CheckReport", frozen)]
struct PyCheckReport(CheckReport);

#[pymethods]
impl PyCheckReport {
    #[getter]
    fn scenario(&self) -> String {
        self.0.scenario.clone()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    /// `(id, verdict, witness)` in report order.
    #[getter]
    fn checks(&self) -> Vec<(String, String, String)> {
        self.0.checks.iter().map(|e| (e.id.clone(), e.verdict.as_str().to_string(), e.witness.clone())).collect()
    }

    /// Verdict of one check id.
    fn verdict(&self, id: &str) -> PyResult<String> {
        self.0.get(id).map(|e| e.verdict.as_str().to_string()).ok_or_else(|| PyKeyError::new_err(id.to_string()))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

/// Invariance flags, Reeb position and mean curvature of a subframe.
#[pyclass(name = "Profile", frozen, get_all)]
struct PyProfile {
    dim: usize,
    position: String,
    phi_invariant: bool,
    j_invariant: bool,
    t_invariant: bool,
    rho_invariant: bool,
    tangential_norm_sq: Vec<String>,
    mean_curvature: Vec<String>,
    minimal: bool,
    warnings: Vec<String>,
    summary: String,
}

#[pymethods]
impl PyProfile {
    fn __repr__(&self) -> String {
        format!("Profile({})", self.summary)
    }
}

/// Names of the built-in scenarios.
#[pyfunction]
fn corpus_names() -> Vec<String> {
    corpus::corpus_names().into_iter().map(str::to_string).collect()
}

/// Build a corpus scenario; `params` is `(h, k)` for `darboux`.
#[pyfunction]
#[pyo3(signature = (name, params = None))]
fn corpus_build(name: &str, params: Option<(usize, usize)>) -> PyResult<PyScenario> {
    corpus::corpus_build(name, params).map(PyScenario).map_err(value_error)
}

/// Load and validate a scenario file.
#[pyfunction]
fn load_scenario(path: PathBuf) -> PyResult<PyScenario> {
    corpus::load_scenario(&path).map(PyScenario).map_err(value_error)
}

#[pymodule]
#[pyo3(name = "contact_pair_lab")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyCheckReport>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(corpus_names, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_build, m)?)?;
    m.add_function(wrap_pyfunction!(load_scenario, m)?)?;
    Ok(())
}
