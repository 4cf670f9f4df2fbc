//! Python bindings. Structured results (vectors, reports, tables) are handed
//! over as plain Python lists and dicts decoded from their JSON form.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use qflag::flagbasis::{e_vector as core_e_vector, format_relation, format_sl2_relation, quadratic_relations, FlagCache};
use qflag::geometry::{component_ratios as core_ratios, pluecker as core_pluecker, segre_pair as core_segre, CellPoint, QValue};
use qflag::orthocell::{self as oc, Orthocell};
use qflag::scalars::parse_rational;
use qflag::suite::{self, Options, Suite};
use qflag::weyl::{Permutation, PositiveRoot};

fn err(e: qflag::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// An orthocell `C(α_1, …, α_d; w)` in canonical form.
#[pyclass(name = "Orthocell", frozen, eq, hash, ord, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PyOrthocell(Orthocell);

#[pymethods]
impl PyOrthocell {
    #[new]
    fn new(n: usize, roots: Vec<(u8, u8)>, w: Vec<u8>) -> PyResult<Self> {
        let roots = roots
            .into_iter()
            .map(|(a, b)| PositiveRoot::from_pair(a, b))
            .collect::<qflag::Result<Vec<_>>>()
            .map_err(err)?;
        let w = Permutation::new(w).map_err(err)?;
        oc::make_cell(n, &roots, &w).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn roots(&self) -> Vec<(u8, u8)> {
        self.0.roots().iter().map(|r| (r.a(), r.b())).collect()
    }

    #[getter]
    fn w(&self) -> Vec<usize> {
        self.0.w().entries().iter().map(|&x| x as usize).collect()
    }

    fn is_monogressive(&self) -> bool {
        self.0.is_monogressive()
    }

    fn is_effective(&self, i: usize) -> bool {
        self.0.is_effective(i)
    }

    fn is_ij_effective(&self, i: usize, j: usize) -> bool {
        self.0.is_ij_effective(i, j)
    }

    fn ij_normalize(&self, i: usize, j: usize) -> PyResult<Self> {
        self.0.ij_normalize(i, j).map(Self).map_err(err)
    }

    fn subcells(&self) -> Vec<Self> {
        oc::subcells(&self.0).into_iter().map(Self).collect()
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// A pass/fail report from one of the verification suites.
#[pyclass(name = "Report", frozen)]
struct PyReport(qflag::report::RunReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }

    fn check_names(&self) -> Vec<String> {
        self.0.checks.iter().map(|c| c.name.clone()).collect()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    fn __repr__(&self) -> String {
        let failed = self.0.checks.iter().filter(|c| c.status != qflag::report::Status::Pass).count();
        format!("Report({}, {} checks, {} failed)", self.0.command, self.0.checks.len(), failed)
    }
}

fn wrap(cells: Vec<Orthocell>) -> Vec<PyOrthocell> {
    cells.into_iter().map(PyOrthocell).collect()
}

#[pyfunction]
#[pyo3(signature = (n, rank=None))]
fn enumerate_monogressive(n: usize, rank: Option<usize>) -> Vec<PyOrthocell> {
    wrap(oc::enumerate_monogressive(n, rank))
}

/// One `ij`-normal representative per class of monogressive `ij`-effective cells.
#[pyfunction]
fn enumerate_effective(n: usize, i: usize, j: usize) -> Vec<PyOrthocell> {
    wrap(oc::enumerate_effective(n, i, j))
}

#[pyfunction]
fn dim_formula(n: usize, i: usize, j: usize) -> u64 {
    oc::dim_formula(n, i, j)
}

/// `e_C^{ij}` as a list of `{"basis": [[…], […]], "coeff": "…"}` terms.
#[pyfunction]
fn e_vector<'py>(py: Python<'py>, cell: &PyOrthocell, i: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
    let v = core_e_vector(&cell.0, i, j).map_err(err)?;
    to_py(py, &v.vector)
}

/// Type (I) relations in degree `ω_i + ω_j`, written out as strings.
#[pyfunction]
fn relations(n: usize, i: usize, j: usize) -> PyResult<Vec<String>> {
    let cache = FlagCache::new(n).map_err(err)?;
    let set = quadratic_relations(&cache, i, j).map_err(err)?;
    Ok(set
        .type_i
        .iter()
        .map(|x| if n == 2 { format_sl2_relation(x) } else { format_relation(x) })
        .collect())
}

#[pyfunction]
fn dims<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &suite::dims(n).map_err(err)?)
}

fn options(samples: usize, seed: u64, q: &str) -> PyResult<Options> {
    Ok(Options {
        samples,
        seed,
        q: QValue::parse(q).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, suite="all", samples=100, seed=42, q="2"))]
fn verify(n: usize, suite: &str, samples: usize, seed: u64, q: &str) -> PyResult<PyReport> {
    let s: Suite = suite.parse().map_err(err)?;
    let opts = options(samples, seed, q)?;
    suite::verify(n, s, &opts).map(PyReport).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, samples=100, seed=42, q="2"))]
fn report(n: usize, samples: usize, seed: u64, q: &str) -> PyResult<PyReport> {
    let opts = options(samples, seed, q)?;
    suite::full_report(n, &opts).map(PyReport).map_err(err)
}

fn point(cell: &PyOrthocell, coords: Vec<(String, String)>) -> PyResult<CellPoint> {
    let coords = coords
        .iter()
        .map(|(x, y)| Ok((parse_rational(x)?, parse_rational(y)?)))
        .collect::<qflag::Result<Vec<_>>>()
        .map_err(err)?;
    CellPoint::new(cell.0.clone(), coords).map_err(err)
}

/// Plücker image of a point of `E(C)`; coordinates are pairs of rational strings.
#[pyfunction]
fn pluecker<'py>(py: Python<'py>, cell: &PyOrthocell, coords: Vec<(String, String)>, i: usize) -> PyResult<Bound<'py, PyAny>> {
    let p = point(cell, coords)?;
    let v = core_pluecker(&p, i).map_err(err)?;
    to_py(py, &v.to_tensor())
}

#[pyfunction]
#[pyo3(signature = (cell, coords, i, j, q="2"))]
fn segre_pair<'py>(
    py: Python<'py>,
    cell: &PyOrthocell,
    coords: Vec<(String, String)>,
    i: usize,
    j: usize,
    q: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let p = point(cell, coords)?;
    let q = QValue::parse(q).map_err(err)?;
    to_py(py, &core_segre(&p, i, j, &q).map_err(err)?)
}

/// The `(σ_1, σ_2)` scaling factors on the eight rank-one components for `n = 3`.
#[pyfunction]
#[pyo3(signature = (q="2"))]
fn component_ratios(q: &str) -> PyResult<Vec<(String, String)>> {
    let q = QValue::parse(q).map_err(err)?;
    Ok(core_ratios(&q).into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
}

#[pymodule]
#[pyo3(name = "qflag")]
fn qflag_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrthocell>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(enumerate_monogressive, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_effective, m)?)?;
    m.add_function(wrap_pyfunction!(dim_formula, m)?)?;
    m.add_function(wrap_pyfunction!(e_vector, m)?)?;
    m.add_function(wrap_pyfunction!(relations, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(pluecker, m)?)?;
    m.add_function(wrap_pyfunction!(segre_pair, m)?)?;
    m.add_function(wrap_pyfunction!(component_ratios, m)?)?;
    Ok(())
}
