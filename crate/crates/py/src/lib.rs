//! Python bindings for `freeset-core`.
//!
//! Functions, block systems and measured blocks are Python classes. Structured
//! results come back as plain dicts and lists with the same layout as the
//! command line's JSON, rationals as `"p/q"` strings and block codes as ints.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::de::DeserializeOwned;
use serde::Serialize;

use freeset_core::boundedfam::{self, GrowthFunction};
use freeset_core::freesets::{self, SearchMode};
use freeset_core::ratio::parse_ratio;
use freeset_core::rosenthal::{self, RosenthalMatrix};
use freeset_core::{funcgraph, involutions, partitions, SubsetOfWindow};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts a JSON string or any object `json.dumps` can handle.
fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text = match obj.cast::<PyString>() {
        Ok(s) => s.to_string(),
        Err(_) => obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?,
    };
    serde_json::from_str(&text).map_err(err)
}

fn subset(elements: Vec<usize>) -> PyResult<SubsetOfWindow> {
    let mut elements = elements;
    elements.sort_unstable();
    elements.dedup();
    SubsetOfWindow::new(elements).map_err(err)
}

fn mode(name: &str) -> PyResult<SearchMode> {
    match name {
        "exact" => Ok(SearchMode::Exact),
        "greedy" => Ok(SearchMode::Greedy),
        other => Err(PyValueError::new_err(format!("unknown mode {other:?}, expected \"exact\" or \"greedy\""))),
    }
}

fn growth(g: &Bound<'_, PyAny>) -> PyResult<GrowthFunction> {
    match g.extract::<u64>() {
        Ok(c) => GrowthFunction::constant(c).map_err(err),
        Err(_) => GrowthFunction::new(g.extract()?).map_err(err),
    }
}

/// A function on the window `[0, n)`; values may leave the window.
#[pyclass(name = "FiniteFunction", module = "freeset_lab", frozen, from_py_object)]
#[derive(Clone)]
struct PyFunction(funcgraph::FiniteFunction);

#[pymethods]
impl PyFunction {
    #[new]
    fn new(values: Vec<usize>) -> PyResult<Self> {
        funcgraph::FiniteFunction::new(values).map(Self).map_err(err)
    }

    #[staticmethod]
    fn successor(n: usize) -> Self {
        Self(funcgraph::FiniteFunction::successor(n))
    }

    #[staticmethod]
    #[pyo3(signature = (seed, n, injective = true))]
    fn random(seed: u64, n: usize, injective: bool) -> PyResult<Self> {
        funcgraph::random_fpf_function(seed, n, injective).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }

    #[getter]
    fn window(&self) -> usize {
        self.0.window()
    }

    #[getter]
    fn values(&self) -> Vec<usize> {
        self.0.values().to_vec()
    }

    fn is_fixed_point_free(&self) -> bool {
        self.0.is_fixed_point_free()
    }

    fn is_injective(&self) -> bool {
        self.0.is_injective_on_window()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn __call__(&self, x: usize) -> PyResult<usize> {
        if x < self.0.window() {
            Ok(self.0.apply(x))
        } else {
            Err(PyValueError::new_err(format!("{x} is outside the window [0, {})", self.0.window())))
        }
    }

    fn __len__(&self) -> usize {
        self.0.window()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("FiniteFunction({:?})", self.0.values())
    }
}

fn functions(funcs: Vec<PyFunction>) -> Vec<funcgraph::FiniteFunction> {
    funcs.into_iter().map(|f| f.0).collect()
}

#[pyfunction]
fn orbits<'py>(py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &funcgraph::orbit_decomposition(&f.0).map_err(err)?)
}

/// Colour of each point in a three-colouring with no monochromatic edge.
#[pyfunction]
fn katetov(f: &PyFunction) -> PyResult<Vec<usize>> {
    let coloring = freesets::katetov_partition(&f.0).map_err(err)?;
    Ok(coloring.colors().iter().map(|&c| c as usize).collect())
}

#[pyfunction]
#[pyo3(signature = (funcs, n = None, mode = "exact"))]
fn max_free_subset(funcs: Vec<PyFunction>, n: Option<usize>, mode: &str) -> PyResult<Vec<usize>> {
    let family = functions(funcs);
    let n = n.or_else(|| family.iter().map(|f| f.window()).min()).unwrap_or(0);
    let set = freesets::max_free_subset(&family, n, self::mode(mode)?).map_err(err)?;
    Ok(set.elements().to_vec())
}

/// `|f[A] ∩ A|` for each function of the family.
#[pyfunction]
fn free_report(funcs: Vec<PyFunction>, set: Vec<usize>) -> PyResult<Vec<usize>> {
    let report = freesets::free_report(&subset(set)?, &functions(funcs));
    Ok(report.per_function)
}

#[pyfunction]
#[pyo3(signature = (colorings, n, min_size = 1))]
fn find_unsplit_set<'py>(
    py: Python<'py>,
    colorings: Vec<Vec<u8>>,
    n: usize,
    min_size: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let colorings: Vec<freesets::Coloring> =
        colorings.into_iter().map(freesets::Coloring::new).collect::<Result<_, _>>().map_err(err)?;
    to_py(py, &freesets::find_unsplit_set(&colorings, n, min_size).map_err(err)?)
}

#[pyfunction]
fn decompose<'py>(py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &involutions::decompose_into_involutions(&f.0).map_err(err)?)
}

/// The matrix of an injection, as a dict.
#[pyfunction]
fn function_matrix<'py>(py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &rosenthal::function_to_matrix(&f.0).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (matrix, set, eps = "1/1"))]
fn fragments<'py>(
    py: Python<'py>,
    matrix: &Bound<'py, PyAny>,
    set: Vec<usize>,
    eps: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let m: RosenthalMatrix = from_py(matrix)?;
    let eps = parse_ratio(eps).map_err(err)?;
    to_py(py, &rosenthal::fragments(&m, &subset(set)?, &eps).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (matrix, eps = "1/1", min_size = 0, mode = "exact"))]
fn find_fragmenting_set(
    matrix: &Bound<'_, PyAny>,
    eps: &str,
    min_size: usize,
    mode: &str,
) -> PyResult<Option<Vec<usize>>> {
    let m: RosenthalMatrix = from_py(matrix)?;
    let eps = parse_ratio(eps).map_err(err)?;
    let found = rosenthal::find_fragmenting_set(&m, &eps, min_size, self::mode(mode)?).map_err(err)?;
    Ok(found.map(|s| s.elements().to_vec()))
}

/// Endpoints of the escape intervals, ending at the window size.
#[pyfunction]
fn escape_intervals(f: &PyFunction) -> Vec<usize> {
    partitions::escape_intervals(&f.0).endpoints().to_vec()
}

#[pyfunction]
fn localized_function(g: &PyFunction, set: Vec<usize>) -> PyResult<PyFunction> {
    partitions::localized_function(&g.0, &subset(set)?).map(PyFunction).map_err(err)
}

#[pyfunction]
fn partition_function(part_of: Vec<usize>) -> PyResult<PyFunction> {
    let p = partitions::PartitionIntoParts::new(part_of).map_err(err)?;
    Ok(PyFunction(partitions::partition_function(&p)))
}

/// Number of blocks of `outer` below `n` that hold no complete block of `inner`.
#[pyfunction]
fn dominates<'py>(py: Python<'py>, outer: Vec<usize>, inner: Vec<usize>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let outer = partitions::IntervalPartition::new(outer).map_err(err)?;
    let inner = partitions::IntervalPartition::new(inner).map_err(err)?;
    to_py(py, &partitions::dominates(&outer, &inner, n))
}

/// Coded blocks of a growth function up to a fixed depth.
#[pyclass(name = "BlockSystem", module = "freeset_lab", frozen)]
struct PyBlockSystem(boundedfam::BlockSystem);

#[pymethods]
impl PyBlockSystem {
    /// `g` is either a constant or a list whose last value repeats.
    #[new]
    fn new(g: &Bound<'_, PyAny>, depth: usize) -> PyResult<Self> {
        boundedfam::build_block_system(&growth(g)?, depth).map(Self).map_err(err)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    #[getter]
    fn i_endpoints(&self) -> Vec<usize> {
        self.0.i_endpoints().to_vec()
    }

    /// Sizes of the coded blocks.
    #[getter]
    fn sizes(&self) -> Vec<BigUint> {
        (0..self.0.depth()).map(|n| self.0.size(n).clone()).collect()
    }

    /// Length of the longest prefix of whole blocks not exceeding `budget`.
    #[pyo3(signature = (budget = 1 << 20))]
    fn materialized_prefix(&self, budget: usize) -> usize {
        self.0.materialized_prefix(budget)
    }

    fn encode(&self, n: usize, digits: Vec<u64>) -> PyResult<BigUint> {
        self.0.encode(n, &digits).map_err(err)
    }

    fn decode(&self, n: usize, code: BigUint) -> PyResult<Vec<u64>> {
        self.0.decode(n, &code).map_err(err)
    }

    fn coded_set<'py>(&self, py: Python<'py>, h: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.coded_set(&h).map_err(err)?)
    }

    fn shadows<'py>(&self, py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.shadows(&f.0).map_err(err)?)
    }

    fn verify_freeness_claim<'py>(&self, py: Python<'py>, f: &PyFunction, h: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.verify_freeness_claim(&f.0, &h).map_err(err)?)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }
}

/// Consecutive blocks with a measure on each.
#[pyclass(name = "MeasuredBlocks", module = "freeset_lab", frozen)]
struct PyMeasuredBlocks(boundedfam::MeasuredBlocks);

#[pymethods]
impl PyMeasuredBlocks {
    /// `|J_0| = 1` and `|J_{n+1}| = 2(n+1)·Σ_{k≤n}|J_k|` with singleton measure
    /// `1/Σ_{k<n}|J_k|`; `fin=True` gives blocks of size `n` with counting measure.
    #[new]
    #[pyo3(signature = (depth, fin = false))]
    fn new(depth: usize, fin: bool) -> PyResult<Self> {
        if fin {
            Ok(Self(boundedfam::build_ed_fin_blocks(depth)))
        } else {
            boundedfam::build_ed_blocks(depth).map(Self).map_err(err)
        }
    }

    #[getter]
    fn sizes(&self) -> Vec<u64> {
        self.0.sizes().to_vec()
    }

    #[getter]
    fn prefix_len(&self) -> usize {
        self.0.prefix_len()
    }

    fn block(&self, n: usize) -> PyResult<(usize, usize)> {
        if n < self.0.block_count() {
            Ok(self.0.block(n))
        } else {
            Err(PyValueError::new_err(format!("block {n} out of range")))
        }
    }

    fn bad_sets<'py>(&self, py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.bad_sets(&f.0).map_err(err)?)
    }

    #[pyo3(signature = (set, threshold = "1"))]
    fn membership<'py>(&self, py: Python<'py>, set: Vec<usize>, threshold: &str) -> PyResult<Bound<'py, PyAny>> {
        let k = parse_ratio(threshold).map_err(err)?;
        to_py(py, &self.0.ed_membership(&subset(set)?, &k).map_err(err)?)
    }

    fn selector_check<'py>(&self, py: Python<'py>, f: &PyFunction, selector: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.selector_free_check(&f.0, &subset(selector)?).map_err(err)?)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }
}

#[pymodule]
fn freeset_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunction>()?;
    m.add_class::<PyBlockSystem>()?;
    m.add_class::<PyMeasuredBlocks>()?;
    m.add_function(wrap_pyfunction!(orbits, m)?)?;
    m.add_function(wrap_pyfunction!(katetov, m)?)?;
    m.add_function(wrap_pyfunction!(max_free_subset, m)?)?;
    m.add_function(wrap_pyfunction!(free_report, m)?)?;
    m.add_function(wrap_pyfunction!(find_unsplit_set, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(function_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(fragments, m)?)?;
    m.add_function(wrap_pyfunction!(find_fragmenting_set, m)?)?;
    m.add_function(wrap_pyfunction!(escape_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(localized_function, m)?)?;
    m.add_function(wrap_pyfunction!(partition_function, m)?)?;
    m.add_function(wrap_pyfunction!(dominates, m)?)?;
    Ok(())
}
