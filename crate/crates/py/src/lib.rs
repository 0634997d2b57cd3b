//! Python bindings for `graphcode`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use graphcode::code::{minimum_distance, GraphCode};
use graphcode::composite::{crt_split, product_code, theorem2_check};
use graphcode::families::{build_family, CATALOG};
use graphcode::format::{parse_code, parse_graph, write_graph, write_graph_code};
use graphcode::oracle::{kl_verify, KlEngine, KlMode, KlReport};
use graphcode::search::{is_coding_clique, search_cliques, SearchOptions};
use graphcode::{Error, Limits, Modulus, WeightedGraph, ZpVec};

create_exception!(pygraphcode, GraphcodeError, PyException);
create_exception!(pygraphcode, BoundExceededError, GraphcodeError);
create_exception!(pygraphcode, NotCodingCliqueError, GraphcodeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BoundExceeded { .. } | Error::Cancelled => BoundExceededError::new_err(e.to_string()),
        Error::NotCodingClique(_) => NotCodingCliqueError::new_err(e.to_string()),
        _ => GraphcodeError::new_err(e.to_string()),
    }
}

fn limits(oracle_bound: Option<u128>) -> Limits {
    let l = Limits::from_env();
    match oracle_bound {
        Some(b) => l.with_oracle_amplitudes(b),
        None => l,
    }
}

fn vectors(p: Modulus, n: usize, rows: Vec<Vec<i64>>) -> PyResult<Vec<ZpVec>> {
    rows.into_iter()
        .map(|r| {
            if r.len() != n {
                return Err(PyValueError::new_err(format!("vector of length {} on {n} qupits", r.len())));
            }
            Ok(ZpVec::from_signed(p, &r))
        })
        .collect()
}

/// Weighted graph over `Z_p`. Vertices are 0-based here; files stay 1-based.
#[pyclass(name = "Graph", module = "pygraphcode", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (p, n, edges=Vec::new()))]
    fn new(p: u32, n: usize, edges: Vec<(usize, usize, i64)>) -> PyResult<Self> {
        let m = Modulus::new(p).map_err(to_py)?;
        Ok(PyGraph { inner: WeightedGraph::from_edges(m, n, &edges).map_err(to_py)? })
    }

    /// Parses the `graph <p> <n>` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: parse_graph(text).map_err(to_py)? })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.modulus().get()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn weight(&self, a: usize, b: usize) -> PyResult<u32> {
        if a >= self.inner.n() || b >= self.inner.n() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.weight(a, b))
    }

    fn edges(&self) -> Vec<(usize, usize, u32)> {
        self.inner.edges()
    }

    fn to_text(&self) -> String {
        write_graph(&self.inner)
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph(p={}, n={}, edges={:?})", self.p(), self.n(), self.inner.edges())
    }
}

/// A validated graph code: graph, coding clique and distance.
#[pyclass(name = "Code", module = "pygraphcode", frozen)]
struct PyCode {
    inner: GraphCode,
}

fn report_dict<'py>(py: Python<'py>, r: &KlReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("pass", r.pass)?;
    d.set_item("mode", if r.seed().is_some() { "sampled" } else { "exhaustive" })?;
    d.set_item("seed", r.seed())?;
    d.set_item("errors_checked", r.errors_checked)?;
    d.set_item("max_deviation", r.max_deviation)?;
    d.set_item("tolerance", r.tolerance)?;
    let counterexample = match &r.counterexample {
        Some(c) => {
            let cx = PyDict::new(py);
            cx.set_item("x", c.x.clone())?;
            cx.set_item("z", c.z.clone())?;
            cx.set_item("row", c.row)?;
            cx.set_item("col", c.col)?;
            cx.set_item("deviation", c.deviation)?;
            Some(cx)
        }
        None => None,
    };
    d.set_item("counterexample", counterexample)?;
    Ok(d)
}

#[pymethods]
impl PyCode {
    /// Builds a code, raising `NotCodingCliqueError` when the clique fails.
    #[new]
    #[pyo3(signature = (graph, clique, d))]
    fn new(graph: &PyGraph, clique: Vec<Vec<i64>>, d: usize) -> PyResult<Self> {
        let g = graph.inner.clone();
        let c = vectors(g.modulus(), g.n(), clique)?;
        Ok(PyCode { inner: GraphCode::new(g, c, d, &limits(None)).map_err(to_py)? })
    }

    /// Parses the `code <p> <n> <d>` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let f = parse_code(text).map_err(to_py)?;
        Ok(PyCode { inner: GraphCode::new(f.graph, f.clique, f.d, &limits(None)).map_err(to_py)? })
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph().clone() }
    }

    #[getter]
    fn clique(&self) -> Vec<Vec<u32>> {
        self.inner.clique().iter().map(|c| c.entries().to_vec()).collect()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Number of codewords `K`.
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    #[getter]
    fn summary(&self) -> String {
        self.inner.summary()
    }

    #[getter]
    fn classification(&self) -> String {
        self.inner.classification().to_string()
    }

    #[getter]
    fn stabilizer_size(&self) -> u128 {
        self.inner.stabilizer_size()
    }

    #[getter]
    fn degrees(&self) -> Option<Vec<u32>> {
        self.inner.degrees().map(<[u32]>::to_vec)
    }

    #[getter]
    fn singleton(&self) -> String {
        self.inner.singleton_check().to_string()
    }

    /// `(phase, x, z)` per generator; the phase is in units of `π/p`.
    fn stabilizer_generators(&self) -> Vec<(u32, Vec<u32>, Vec<u32>)> {
        self.inner
            .stabilizer_generators()
            .iter()
            .map(|g| (g.phase(), g.x().entries().to_vec(), g.z().entries().to_vec()))
            .collect()
    }

    fn rendered_generators(&self) -> Vec<String> {
        self.inner.stabilizer_generators().iter().map(|g| g.render()).collect()
    }

    fn minimum_distance(&self) -> PyResult<usize> {
        minimum_distance(self.inner.graph(), self.inner.clique(), &limits(None)).map_err(to_py)
    }

    /// Runs the Knill-Laflamme oracle. `sampled` switches to that many seeded errors.
    #[pyo3(signature = (sampled=None, seed=0, engine="spectral", oracle_bound=None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        sampled: Option<usize>,
        seed: u64,
        engine: &str,
        oracle_bound: Option<u128>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let engine = match engine {
            "spectral" => KlEngine::Spectral,
            "direct" => KlEngine::Direct,
            other => return Err(PyValueError::new_err(format!("unknown engine {other:?}"))),
        };
        let mode = match sampled {
            Some(count) => KlMode::Sampled { count, seed },
            None => KlMode::Exhaustive,
        };
        let code = &self.inner;
        let lim = limits(oracle_bound);
        let r = py.detach(|| kl_verify(code.graph(), code.clique(), code.d(), mode, engine, &lim)).map_err(to_py)?;
        report_dict(py, &r)
    }

    fn to_text(&self) -> String {
        write_graph_code(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.k()
    }

    fn __repr__(&self) -> String {
        format!("Code({})", self.inner.summary())
    }
}

/// Builds a catalog family.
#[pyfunction]
#[pyo3(signature = (name, p=None, n=None))]
fn family(name: &str, p: Option<u32>, n: Option<usize>) -> PyResult<PyCode> {
    Ok(PyCode { inner: build_family(name, p, n, &limits(None)).map_err(to_py)? })
}

/// Catalog entries as `(name, takes_n, description)`.
#[pyfunction]
fn families() -> Vec<(&'static str, bool, &'static str)> {
    CATALOG.iter().map(|f| (f.name, f.takes_n, f.description)).collect()
}

/// `None` when the vectors form a coding clique, otherwise the violated condition.
#[pyfunction]
fn check_clique(graph: &PyGraph, d: usize, clique: Vec<Vec<i64>>) -> PyResult<Option<String>> {
    let g = &graph.inner;
    let c = vectors(g.modulus(), g.n(), clique)?;
    let check = is_coding_clique(g, d, &c, &limits(None)).map_err(to_py)?;
    Ok(check.violation.map(|v| v.to_string()))
}

/// Coding cliques through the zero vector.
#[pyfunction]
#[pyo3(signature = (graph, d, max_k=None, all_of_size=None))]
fn search(
    py: Python<'_>,
    graph: &PyGraph,
    d: usize,
    max_k: Option<usize>,
    all_of_size: Option<usize>,
) -> PyResult<Vec<Vec<Vec<u32>>>> {
    let g = &graph.inner;
    let options = SearchOptions { max_k, all_of_size, ..SearchOptions::default() };
    let result = py.detach(|| search_cliques(g, d, &options, &limits(None))).map_err(to_py)?;
    Ok(result.cliques.iter().map(|c| c.iter().map(|v| v.entries().to_vec()).collect()).collect())
}

/// Product code over `Z_{pq}` from codes over coprime `Z_p` and `Z_q`.
#[pyfunction]
fn compose(first: &PyCode, second: &PyCode) -> PyResult<PyCode> {
    Ok(PyCode { inner: product_code(&first.inner, &second.inner, &limits(None)).map_err(to_py)? })
}

#[pyfunction]
fn split(graph: &PyGraph, p: u32, q: u32) -> PyResult<(PyGraph, PyGraph)> {
    let (gp, gq) = crt_split(&graph.inner, p, q).map_err(to_py)?;
    Ok((PyGraph { inner: gp }, PyGraph { inner: gq }))
}

/// Largest amplitude gap between the combined-graph state and the relabeled tensor product.
#[pyfunction]
fn tensor_deviation(gp: &PyGraph, gq: &PyGraph) -> PyResult<f64> {
    Ok(theorem2_check(&gp.inner, &gq.inner, &limits(None)).map_err(to_py)?.max_deviation)
}

#[pymodule]
pub fn pygraphcode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCode>()?;
    m.add("GraphcodeError", py.get_type::<GraphcodeError>())?;
    m.add("BoundExceededError", py.get_type::<BoundExceededError>())?;
    m.add("NotCodingCliqueError", py.get_type::<NotCodingCliqueError>())?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(check_clique, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_deviation, m)?)?;
    Ok(())
}
