//! Python bindings: instances, solutions and the main operations.

use std::sync::OnceLock;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use flipcenter::bounds::pairwise_distances;
use flipcenter::encoding::{emit_dimacs, encode, encode_radius1, xor_to_cnf, EncodeInput, Formulation, ReachTable};
use flipcenter::pipeline::{
    generate_instance, parse_instance, parse_solution, render_svg, run_strategy, validate_solution, write_instance,
    write_solution, Config,
};
use flipcenter::satbackend::{decide, Backend};
use flipcenter::{Edge, QuadCatalog};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pairs(edges: &[Edge]) -> Vec<(u32, u32)> {
    edges.iter().map(|e| (e.u, e.v)).collect()
}

#[pyclass(frozen, name = "Instance", module = "flipcenter_py")]
struct PyInstance {
    inner: flipcenter::Instance,
    catalog: OnceLock<QuadCatalog>,
}

impl PyInstance {
    fn wrap(inner: flipcenter::Instance) -> Self {
        PyInstance { inner, catalog: OnceLock::new() }
    }

    fn catalog(&self) -> &QuadCatalog {
        self.catalog.get_or_init(|| self.inner.catalog())
    }
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_instance(text).map(Self::wrap).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, seed = 0))]
    fn generate(n: usize, m: usize, seed: u64) -> PyResult<Self> {
        if n < 3 || m < 1 {
            return Err(PyValueError::new_err("need n >= 3 and m >= 1"));
        }
        Ok(Self::wrap(generate_instance(n, m, seed)))
    }

    fn to_json(&self) -> String {
        write_instance(&self.inner)
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn points(&self) -> Vec<(i64, i64)> {
        self.inner.points.points().iter().map(|p| (p.x, p.y)).collect()
    }

    #[getter]
    fn triangulations(&self) -> Vec<Vec<(u32, u32)>> {
        self.inner.inputs.iter().map(|t| pairs(t.edges())).collect()
    }

    /// Number of empty convex quadrilaterals.
    fn convex_quads(&self) -> usize {
        self.catalog().convex_count()
    }

    fn __repr__(&self) -> String {
        format!("Instance(name={:?}, n={}, m={})", self.inner.name, self.inner.n(), self.inner.m())
    }
}

#[pyclass(frozen, name = "Solution", module = "flipcenter_py")]
struct PySolution {
    inner: flipcenter::Solution,
    certificate: Option<String>,
}

#[pymethods]
impl PySolution {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_solution(text).map(|inner| PySolution { inner, certificate: None }).map_err(value_error)
    }

    fn to_json(&self) -> String {
        write_solution(&self.inner)
    }

    #[getter]
    fn objective(&self) -> usize {
        self.inner.objective
    }

    #[getter]
    fn center(&self) -> Vec<(u32, u32)> {
        pairs(&self.inner.center)
    }

    /// Per input, per round, the edges flipped.
    #[getter]
    fn flip_sequences(&self) -> Vec<Vec<Vec<(u32, u32)>>> {
        self.inner
            .flip_sequences
            .iter()
            .map(|s| s.rounds.iter().map(|r| r.iter().map(|e| (e.u, e.v)).collect()).collect())
            .collect()
    }

    #[getter]
    fn distances(&self) -> Vec<usize> {
        self.inner.distances()
    }

    /// Optimality certificate of an exact run, if any.
    #[getter]
    fn certificate(&self) -> Option<String> {
        self.certificate.clone()
    }

    fn __repr__(&self) -> String {
        format!("Solution(objective={})", self.inner.objective)
    }
}

fn config_from(options: Option<Vec<(String, String)>>) -> PyResult<Config> {
    let mut cfg = Config::default();
    for (k, v) in options.unwrap_or_default() {
        cfg.set(&k, &v).map_err(PyValueError::new_err)?;
    }
    Ok(cfg)
}

/// Solves with the given strategy; `options` are config keys and values.
#[pyfunction]
#[pyo3(signature = (instance, strategy = "exact", options = None))]
fn solve(py: Python<'_>, instance: &PyInstance, strategy: &str, options: Option<Vec<(String, String)>>) -> PyResult<PySolution> {
    let mut cfg = config_from(options)?;
    cfg.set("strategy", strategy).map_err(PyValueError::new_err)?;
    let cat = instance.catalog();
    let out = py.detach(|| run_strategy(&instance.inner, cat, &cfg)).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(PySolution { inner: out.solution, certificate: out.certificate.map(|c| format!("{c:?}")) })
}

/// Raises ValueError describing the first violation.
#[pyfunction]
fn validate(instance: &PyInstance, solution: &PySolution) -> PyResult<()> {
    validate_solution(&instance.inner, &solution.inner, instance.catalog()).map_err(value_error)
}

/// DIMACS text for one distance vector, or None when encoding alone
/// refutes it. The xor formulation yields XOR lines unless `lower`.
#[pyfunction]
#[pyo3(signature = (instance, distances, formulation = "cnf", lower = false))]
fn encode_dimacs(instance: &PyInstance, distances: Vec<u32>, formulation: &str, lower: bool) -> PyResult<Option<String>> {
    if distances.len() != instance.inner.m() {
        return Err(PyValueError::new_err("one distance per input"));
    }
    let formulation: Formulation = formulation.parse().map_err(PyValueError::new_err)?;
    let cat = instance.catalog();
    let reach = ReachTable::compute(&instance.inner, cat);
    let inp = EncodeInput { instance: &instance.inner, catalog: cat, reach: &reach, distances: &distances, fixed_center: None };
    let enc = encode(inp, formulation, true);
    if enc.infeasible {
        return Ok(None);
    }
    let text = if lower || enc.formula.xors.is_empty() {
        emit_dimacs(&xor_to_cnf(&enc.formula), false)
    } else {
        emit_dimacs(&enc.formula, true)
    };
    text.map(Some).map_err(value_error)
}

/// Exact pairwise parallel-flip distances.
#[pyfunction]
fn distance_matrix(py: Python<'_>, instance: &PyInstance) -> PyResult<Vec<Vec<u32>>> {
    let cat = instance.catalog();
    py.detach(|| pairwise_distances(&instance.inner, cat, &Backend::default(), Formulation::Cnf))
        .map(|d| d.rows())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Whether some triangulation is within one round of every input.
#[pyfunction]
fn radius_one(instance: &PyInstance) -> PyResult<bool> {
    let r1 = encode_radius1(&instance.inner, instance.catalog());
    if r1.infeasible {
        return Ok(false);
    }
    decide(&Backend::default(), &r1.formula).map(|m| m.is_some()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// SVG of the point set with the given edges (input 0 when omitted).
#[pyfunction]
#[pyo3(signature = (instance, edges = None))]
fn render(instance: &PyInstance, edges: Option<Vec<(u32, u32)>>) -> PyResult<String> {
    let edges: Vec<Edge> = match edges {
        Some(list) => list.into_iter().map(|(a, b)| Edge::try_from([a, b]).map_err(PyValueError::new_err)).collect::<PyResult<_>>()?,
        None => instance.inner.inputs[0].edges().to_vec(),
    };
    Ok(render_svg(&instance.inner, &edges, &[]))
}

#[pymodule]
fn flipcenter_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(encode_dimacs, m)?)?;
    m.add_function(wrap_pyfunction!(distance_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(radius_one, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    Ok(())
}
