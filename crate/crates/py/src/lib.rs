//! Python bindings. Results cross the boundary as JSON and arrive in
//! Python as plain dicts and lists.

use num_rational::Ratio;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde_json::{json, Value};
use spackle::analysis::{analyze as analyze_code, verify_fault_tolerance, FtMode};
use spackle::circuit::parse_circuit;
use spackle::codemap::{build_code_with, Orientation};
use spackle::gadgets::{gadget_accounting, make_graph, sparsify as sparsify_code, synth_gadget, Graph, GraphPolicy};
use spackle::pauli::PauliGroup;
use spackle::scaling;

create_exception!(pyspackle, SpackleError, PyException);

type Res<T> = Result<T, spackle::Error>;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn group(stabilizers: &[String]) -> Res<PauliGroup> {
    let lines: Vec<&str> = stabilizers.iter().map(String::as_str).collect();
    PauliGroup::parse_hermitian(&lines)
}

pub fn analyze_json(gauge: &[String], max_distance: Option<usize>) -> Res<Value> {
    let lines: Vec<&str> = gauge.iter().map(String::as_str).collect();
    let g = PauliGroup::parse(&lines)?;
    let r = analyze_code(&g, max_distance, None)?;
    let mut v = to_value(&r);
    v["distance"] = json!(r.distance_display());
    Ok(v)
}

pub fn sparsify_json(stabilizers: &[String], policy: &str, seed: u64, max_distance: Option<usize>) -> Res<Value> {
    let (code, report) = sparsify_code(&group(stabilizers)?, policy.parse()?, seed, max_distance, None)?;
    let mut v = to_value(&report);
    v["circuit"] = json!(code.circuit().to_text());
    Ok(v)
}

pub fn gadget_json(pauli: &str, graph: &str, seed: u64) -> Res<Value> {
    let target = PauliGroup::parse_hermitian(&[pauli])?.generators()[0].clone();
    let w = target.weight();
    let g = match graph {
        "complete" => Graph::complete(w),
        "path" => Graph::path(w),
        other => make_graph(w, other.parse::<GraphPolicy>()?, seed)?.graph,
    };
    let spec = synth_gadget(&target, &g)?;
    let code = build_code_with(&spec.circuit, Orientation::Balanced)?;
    let (s_g, s_q) = spackle::analysis::sparsity(code.gauge());
    Ok(json!({
        "circuit": spec.circuit.to_text(),
        "edges": g.edges(),
        "accounting": to_value(&gadget_accounting(&spec)),
        "s_g": s_g,
        "s_q": s_q,
    }))
}

pub fn verify_ft_json(circuit: &str, max_weight: usize, mode: &str) -> Res<Value> {
    let c = parse_circuit(circuit)?;
    let c = if c.is_canonical() { c } else { c.pad_and_canonicalize() };
    let mode = match mode {
        "symbolic" => FtMode::Symbolic,
        "exact" => FtMode::Exact,
        m => return Err(spackle::Error::InvalidArgument(format!("unknown mode `{m}`"))),
    };
    Ok(to_value(&verify_fault_tolerance(&c, max_weight, mode, false)?))
}

pub fn concatenate_json(stabilizers: &[String], levels: usize) -> Res<Value> {
    let c = scaling::concatenate(&group(stabilizers)?, levels)?;
    Ok(json!({
        "n": c.n,
        "generators": c.generators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "levels": c.levels,
        "rank": c.rank,
        "inventory": to_value(&c.inventory),
        "structurally_valid": c.structurally_valid(),
    }))
}

pub fn epsilon_json(n0: u64, delta_num: u64, delta_den: u64, m: u64, b: u64) -> Res<Value> {
    if delta_den == 0 {
        return Err(spackle::Error::InvalidArgument("delta denominator is zero".into()));
    }
    let e = scaling::epsilon_bound(n0, Ratio::new(delta_num, delta_den), m, b)?;
    Ok(json!({
        "n": e.n.to_string(),
        "d": e.d.to_string(),
        "eps_actual": e.eps_actual,
        "eps_formula": e.eps_formula,
        "holds": e.holds,
    }))
}

pub fn embed_json(stabilizers: &[String], dimension: usize, policy: &str, seed: u64) -> Res<Value> {
    let (c, code, spec) = scaling::embed_local(&group(stabilizers)?, dimension, policy.parse()?, seed)?;
    let mut v = to_value(&spec);
    v["num_qubits"] = json!(code.num_qubits());
    v["circuit"] = json!(c.to_text());
    Ok(v)
}

fn to_py(py: Python<'_>, r: Res<Value>) -> PyResult<Py<PyAny>> {
    let v = r.map_err(|e| SpackleError::new_err(e.to_string()))?;
    let loads = py.import("json")?.getattr("loads")?;
    Ok(loads.call1((v.to_string(),))?.unbind())
}

/// Code parameters of a gauge group given as Pauli strings.
#[pyfunction]
#[pyo3(signature = (gauge, max_distance=None))]
fn analyze(py: Python<'_>, gauge: Vec<String>, max_distance: Option<usize>) -> PyResult<Py<PyAny>> {
    to_py(py, analyze_json(&gauge, max_distance))
}

/// Sparsify a stabilizer code; `Y` is the Hermitian Pauli Y.
#[pyfunction]
#[pyo3(signature = (stabilizers, policy="auto", seed=0, max_distance=None))]
fn sparsify(
    py: Python<'_>,
    stabilizers: Vec<String>,
    policy: &str,
    seed: u64,
    max_distance: Option<usize>,
) -> PyResult<Py<PyAny>> {
    to_py(py, sparsify_json(&stabilizers, policy, seed, max_distance))
}

#[pyfunction]
#[pyo3(signature = (pauli, graph="complete", seed=0))]
fn gadget(py: Python<'_>, pauli: &str, graph: &str, seed: u64) -> PyResult<Py<PyAny>> {
    to_py(py, gadget_json(pauli, graph, seed))
}

#[pyfunction]
#[pyo3(signature = (circuit, max_weight=1, mode="symbolic"))]
fn verify_fault_tolerance_text(py: Python<'_>, circuit: &str, max_weight: usize, mode: &str) -> PyResult<Py<PyAny>> {
    to_py(py, verify_ft_json(circuit, max_weight, mode))
}

#[pyfunction]
fn concatenate(py: Python<'_>, stabilizers: Vec<String>, levels: usize) -> PyResult<Py<PyAny>> {
    to_py(py, concatenate_json(&stabilizers, levels))
}

#[pyfunction]
fn gv_exists(n: u64, k: u64, d: u64) -> PyResult<bool> {
    scaling::gv_exists(n, k, d).map_err(|e| SpackleError::new_err(e.to_string()))
}

#[pyfunction]
fn epsilon_bound(py: Python<'_>, n0: u64, delta: (u64, u64), m: u64, b: u64) -> PyResult<Py<PyAny>> {
    to_py(py, epsilon_json(n0, delta.0, delta.1, m, b))
}

/// SWAP layers moving the token at cell i to cell perm[i].
#[pyfunction]
fn route_permutation(sides: Vec<usize>, perm: Vec<usize>) -> PyResult<Vec<Vec<(usize, usize)>>> {
    scaling::route_permutation(&sides, &perm).map(|n| n.layers).map_err(|e| SpackleError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (stabilizers, dimension, policy="auto", seed=0))]
fn embed_local(py: Python<'_>, stabilizers: Vec<String>, dimension: usize, policy: &str, seed: u64) -> PyResult<Py<PyAny>> {
    to_py(py, embed_json(&stabilizers, dimension, policy, seed))
}

#[pymodule]
fn pyspackle(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("SpackleError", m.py().get_type::<SpackleError>())?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(sparsify, m)?)?;
    m.add_function(wrap_pyfunction!(gadget, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fault_tolerance_text, m)?)?;
    m.add_function(wrap_pyfunction!(concatenate, m)?)?;
    m.add_function(wrap_pyfunction!(gv_exists, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_bound, m)?)?;
    m.add_function(wrap_pyfunction!(route_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(embed_local, m)?)?;
    Ok(())
}
