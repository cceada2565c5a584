//! Python bindings. Structured results come back as plain dicts and lists.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use fourfold::config::AnalysisRequest;
use fourfold::cover::{CoverGroup, RamificationProfile, Symbol};
use fourfold::decomposition::{self, kernel_main, Flags};
use fourfold::genus::genus_table;
use fourfold::monodromy::{self, SearchMode, SearchOptions, WitnessFile, DEFAULT_BUDGET};
use fourfold::perm::Perm;
use fourfold::report;
use fourfold::suite;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A permutation of {1, 2, 3, 4}, written in cycle notation.
#[pyclass(name = "Perm", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPerm(Perm);

#[pymethods]
impl PyPerm {
    #[new]
    fn new(cycles: &str) -> PyResult<Self> {
        cycles.parse().map(PyPerm).map_err(value_error)
    }

    /// Apply `other` first, then `self`.
    fn compose(&self, other: &PyPerm) -> PyPerm {
        PyPerm(self.0.compose(&other.0))
    }

    fn __mul__(&self, other: &PyPerm) -> PyPerm {
        self.compose(other)
    }

    fn inverse(&self) -> PyPerm {
        PyPerm(self.0.inverse())
    }

    fn order(&self) -> u32 {
        self.0.order()
    }

    fn cycle_type(&self) -> String {
        format!("{:?}", self.0.cycle_type())
    }

    /// Images of 1..4 in order.
    fn images(&self) -> Vec<u8> {
        self.0.images().to_vec()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm('{}')", self.0)
    }
}

/// Branch data of a Galois cover: group, base genus and per-symbol counts.
#[pyclass(name = "Profile", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProfile(RamificationProfile);

#[pymethods]
impl PyProfile {
    #[new]
    #[pyo3(signature = (group, g, counts=None))]
    fn new(group: &str, g: u32, counts: Option<BTreeMap<String, u32>>) -> PyResult<Self> {
        let group: CoverGroup = group.parse().map_err(value_error)?;
        let mut pairs = Vec::new();
        for (k, n) in counts.unwrap_or_default() {
            let sym = Symbol::from_key(&k).ok_or_else(|| value_error(format!("unknown symbol {k:?}")))?;
            pairs.push((sym, n));
        }
        RamificationProfile::new(group, g, &pairs).map(PyProfile).map_err(value_error)
    }

    #[getter]
    fn group(&self) -> &'static str {
        self.0.group.name()
    }

    #[getter]
    fn g(&self) -> u32 {
        self.0.g
    }

    #[getter]
    fn counts(&self) -> BTreeMap<&'static str, u32> {
        self.0.symbol_counts().into_iter().map(|(s, n)| (s.key(), n)).collect()
    }

    fn signature(&self) -> String {
        self.0.signature().to_string()
    }

    /// Broken parity and connectivity rules, as messages.
    fn violations(&self) -> Vec<String> {
        self.0.validate().iter().map(|v| v.to_string()).collect()
    }

    fn genus_table<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let t = genus_table(&self.0).map_err(value_error)?;
        to_py(py, &t)
    }

    /// Genus of the named quotient curve.
    fn genus(&self, curve: &str) -> PyResult<u32> {
        let t = genus_table(&self.0).map_err(value_error)?;
        t.genus(curve).ok_or_else(|| value_error(format!("no curve {curve:?} for {}", self.0.group)))
    }

    /// Main isogeny kernel as `(exp2, exp3)`.
    fn kernel(&self) -> PyResult<(u64, u64)> {
        let k = kernel_main(&self.0).map_err(value_error)?;
        Ok((k.exp2, k.exp3))
    }

    #[pyo3(signature = (g_isotropic=None, p2_in_perp=None, zeta=None))]
    fn decompose<'py>(
        &self,
        py: Python<'py>,
        g_isotropic: Option<bool>,
        p2_in_perp: Option<bool>,
        zeta: Option<u8>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let flags = Flags { g_isotropic, p2_in_perp, zeta };
        let r = decomposition::report(&self.0, &flags).map_err(value_error)?;
        to_py(py, &r)
    }

    /// Searches for a monodromy tuple; the result carries a witness file when one is found.
    #[pyo3(signature = (budget=DEFAULT_BUDGET, transitive=false, parallel=false))]
    fn search<'py>(&self, py: Python<'py>, budget: u64, transitive: bool, parallel: bool) -> PyResult<Bound<'py, PyAny>> {
        let mode = if transitive { SearchMode::TransitiveImage } else { SearchMode::GaloisImage };
        let profile = self.0.clone();
        let o = py.detach(move || monodromy::search(&profile, &SearchOptions { mode, budget, parallel }));
        let witness = o.witness.as_ref().map(|t| WitnessFile::new(&self.0, mode, t));
        #[derive(Serialize)]
        struct Out {
            status: monodromy::SearchStatus,
            nodes_explored: u64,
            witness: Option<WitnessFile>,
        }
        to_py(py, &Out { status: o.status, nodes_explored: o.nodes_explored, witness })
    }

    fn moduli(&self) -> Option<u32> {
        monodromy::moduli_dim(&self.0).ok()
    }

    fn __repr__(&self) -> String {
        format!("Profile({})", self.0)
    }
}

/// Full report for a TOML config string.
#[pyfunction]
fn analyze<'py>(py: Python<'py>, config: &str) -> PyResult<Bound<'py, PyAny>> {
    let req = AnalysisRequest::from_toml(config).map_err(value_error)?;
    let r = py.detach(|| report::analyze(&req)).map_err(value_error)?;
    to_py(py, &r)
}

/// Checks a witness file given as JSON text.
#[pyfunction]
fn verify_witness<'py>(py: Python<'py>, witness_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let w: WitnessFile = serde_json::from_str(witness_json).map_err(value_error)?;
    let check = w.verify().map_err(value_error)?;
    to_py(py, &check)
}

#[pyfunction]
#[pyo3(signature = (table_id, budget=DEFAULT_BUDGET))]
fn reproduce_table<'py>(py: Python<'py>, table_id: &str, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let t = py.detach(|| report::reproduce_table(table_id, budget)).map_err(value_error)?;
    to_py(py, &t)
}

#[pyfunction]
fn table_ids() -> Vec<&'static str> {
    report::TABLE_IDS.to_vec()
}

#[pyfunction]
#[pyo3(signature = (scope="fast"))]
fn verify_suite<'py>(py: Python<'py>, scope: &str) -> PyResult<Bound<'py, PyAny>> {
    let scope = match scope {
        "fast" => suite::Scope::Fast,
        "exhaustive" => suite::Scope::Exhaustive,
        other => return Err(value_error(format!("unknown scope {other:?}"))),
    };
    let s = py.detach(|| suite::verify_suite(scope));
    to_py(py, &s)
}

#[pyfunction]
fn groups() -> Vec<&'static str> {
    CoverGroup::ALL.iter().map(|g| g.name()).collect()
}

#[pymodule]
fn fourfold_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerm>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table, m)?)?;
    m.add_function(wrap_pyfunction!(table_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(groups, m)?)?;
    Ok(())
}
