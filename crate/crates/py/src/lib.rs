//! Python module `extdiam`.

use extdiam_core::builder::{self, BlockSource, ConstraintMode, ConstructionSpec};
use extdiam_core::search_chi::{self as chi, ChiSearchConfig};
use extdiam_core::search_omega::{self as omega, AssumptionProfile, OmegaSearchConfig};
use extdiam_core::{self as core, LayeredGraph};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::Parse(_) | core::Error::InvalidInput(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Graph of any order, kept as adjacency lists.
#[pyclass(name = "Graph", module = "extdiam", from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: core::Graph,
    layers: Option<Vec<usize>>,
}

impl PyGraph {
    fn from_layered(g: LayeredGraph) -> Self {
        let layers = Some(g.layer_of());
        PyGraph { inner: g.graph, layers }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: core::Graph::from_edges(n, edges).map_err(err)?, layers: None })
    }

    #[staticmethod]
    fn from_graph6(s: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: core::Graph::from_graph6(s.trim()).map_err(err)?, layers: None })
    }

    fn graph6(&self) -> String {
        self.inner.to_graph6()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    /// Layer index of each vertex, when the graph came from a construction or search.
    #[getter]
    fn layers(&self) -> Option<Vec<usize>> {
        self.layers.clone()
    }

    fn min_degree(&self) -> usize {
        self.inner.min_degree()
    }

    fn diameter(&self) -> PyResult<usize> {
        core::diameter(&self.inner).map_err(err)
    }

    fn is_k4_free(&self) -> bool {
        self.inner.is_k4_free()
    }

    fn clique_number(&self) -> PyResult<usize> {
        let g = self.inner.to_small().ok_or_else(|| PyValueError::new_err("clique number needs at most 32 vertices"))?;
        Ok(g.clique_number())
    }

    fn chromatic_at_most(&self, k: usize) -> bool {
        self.inner.coloring(k).is_some()
    }

    fn __repr__(&self) -> String {
        format!("Graph(order={}, edges={})", self.inner.order(), self.inner.edge_count())
    }
}

/// Color-count matrix: one row per color, one column per layer.
#[pyclass(name = "ClumpMatrix", module = "extdiam", from_py_object)]
#[derive(Clone)]
struct PyClumpMatrix {
    inner: core::ClumpMatrix,
}

#[pymethods]
impl PyClumpMatrix {
    /// `mode` is `"block"` (columns wrap around) or `"repeatable"`.
    #[new]
    #[pyo3(signature = (rows, mode = "block"))]
    fn new(rows: Vec<Vec<u32>>, mode: &str) -> PyResult<Self> {
        let mode = match mode {
            "block" => core::MatrixMode::Block,
            "repeatable" => core::MatrixMode::Repeatable,
            _ => return Err(PyValueError::new_err("mode must be 'block' or 'repeatable'")),
        };
        Ok(PyClumpMatrix { inner: core::ClumpMatrix::from_rows(&rows, mode).map_err(err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyClumpMatrix { inner: text.parse().map_err(err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.inner.rows()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn interior_degree(&self, column: usize, color: usize) -> PyResult<u32> {
        self.inner.interior_degree(column, color).map_err(err)
    }

    fn is_feasible_block(&self, delta: u32) -> bool {
        self.inner.is_feasible_block(delta)
    }

    /// Ratio as a `"p/q"` string.
    fn block_ratio(&self, delta: u32) -> PyResult<String> {
        Ok(self.inner.block_ratio(delta).map_err(err)?.to_string())
    }

    /// Color permutation closing a repeatable matrix, if any.
    fn repeatable_permutation(&self) -> Option<Vec<usize>> {
        self.inner.repeatable_permutation().map(|p| p.0)
    }

    #[pyo3(signature = (repetitions = 1))]
    fn expand(&self, repetitions: usize) -> PyResult<PyGraph> {
        Ok(PyGraph::from_layered(self.inner.expand_to_graph(repetitions).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("ClumpMatrix({:?}, mode='{}')", self.inner.rows(), self.inner.mode())
    }
}

/// Best repeatable 3-colorable clump graph; returns a dict with `best_ratio`
/// (`"p/q"` or `None`), the witness block rows and the period.
#[pyfunction]
#[pyo3(signature = (delta, max_period = 40, max_column_sum = None, assume_missing_color = false, require_singleton_layer = false))]
fn search_chi<'py>(
    py: Python<'py>,
    delta: u32,
    max_period: usize,
    max_column_sum: Option<u32>,
    assume_missing_color: bool,
    require_singleton_layer: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = ChiSearchConfig::new(delta, max_period);
    if let Some(s) = max_column_sum {
        cfg = cfg.with_column_sum(s);
    }
    cfg.assume_missing_color = assume_missing_color;
    cfg.require_singleton_layer = require_singleton_layer;
    let r = py.detach(|| chi::search(&cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("best_ratio", r.best_ratio().map(|x| x.to_string()))?;
    d.set_item("states_expanded", r.states_expanded)?;
    d.set_item("conditional", cfg.conditional_flags())?;
    if let Some(w) = &r.witness {
        d.set_item("period", w.period)?;
        d.set_item("block", PyClumpMatrix { inner: w.block.clone() })?;
        d.set_item("seam", w.seam.0.clone())?;
    }
    Ok(d)
}

/// Best repeatable K4-free layered graph. `profile` is `"none"`, `"delta5"` or `"delta6"`.
#[pyfunction]
#[pyo3(signature = (delta, max_period = 18, profile = "none", max_layer_size = None))]
fn search_omega<'py>(
    py: Python<'py>,
    delta: u32,
    max_period: usize,
    profile: &str,
    max_layer_size: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let profile: AssumptionProfile = profile.parse().map_err(err)?;
    let mut cfg = OmegaSearchConfig::new(delta, max_period).with_profile(profile);
    if let Some(s) = max_layer_size {
        cfg.max_layer_size = s;
    }
    let r = py.detach(|| omega::search(&cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("best_ratio", r.best_ratio().map(|x| x.to_string()))?;
    d.set_item("states_expanded", r.states_expanded)?;
    d.set_item("conditional", cfg.conditional_flags())?;
    if let Some(w) = &r.witness {
        d.set_item("period", w.period)?;
        d.set_item("block_layer_sizes", w.block_sizes())?;
        d.set_item("graph", PyGraph::from_layered(w.graph.clone()))?;
    }
    Ok(d)
}

/// Repeats a block `repetitions` times and optionally caps both ends with `K_{δ,δ}`.
#[pyfunction]
#[pyo3(signature = (block, repetitions, delta, cap_ends = false))]
fn concatenate(block: &PyClumpMatrix, repetitions: usize, delta: u32, cap_ends: bool) -> PyResult<PyGraph> {
    let spec = ConstructionSpec { block: BlockSource::Matrix(block.inner.clone()), repetitions, delta, cap_ends };
    Ok(PyGraph::from_layered(builder::concatenate(&spec).map_err(err)?))
}

/// Order, diameter, minimum degree and constraint check; `mode` is `"omega"` or `"chi"`.
#[pyfunction]
#[pyo3(signature = (graph, delta, mode = "omega"))]
fn verify_construction<'py>(py: Python<'py>, graph: &PyGraph, delta: u32, mode: &str) -> PyResult<Bound<'py, PyDict>> {
    let mode: ConstraintMode = mode.parse().map_err(err)?;
    let r = builder::verify_construction(&graph.inner, None, delta, mode).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("diameter", r.diameter)?;
    d.set_item("min_degree", r.min_degree)?;
    d.set_item("constraint_ok", r.constraint_ok)?;
    d.set_item("achieved_ratio", r.achieved_ratio.to_string())?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

#[pymodule]
fn extdiam(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyClumpMatrix>()?;
    m.add_function(wrap_pyfunction!(search_chi, m)?)?;
    m.add_function(wrap_pyfunction!(search_omega, m)?)?;
    m.add_function(wrap_pyfunction!(concatenate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_construction, m)?)?;
    Ok(())
}
