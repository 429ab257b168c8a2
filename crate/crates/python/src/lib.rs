//! Python module `mahlerlab`.

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mahlerlab::compute::compute as compute_quantity;
use mahlerlab::config::RunConfig;
use mahlerlab::finite_field::count_points;
use mahlerlab::modular::NewformSpec;
use mahlerlab::registry::{registry, run_all, run_check, CheckResult};
use mahlerlab::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotFound { .. } => PyKeyError::new_err(e.to_string()),
        Error::InvalidArgument(_) | Error::Parse(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn config(precision: Option<u32>, seed: Option<u64>, samples: Option<u64>, digits: Option<usize>) -> PyResult<RunConfig> {
    let d = RunConfig::default();
    let cfg = RunConfig {
        precision: precision.unwrap_or(d.precision),
        seed: seed.unwrap_or(d.seed),
        samples: samples.unwrap_or(d.samples),
        digits,
        cache: std::env::var_os(mahlerlab::config::CACHE_ENV).map(Into::into),
        ..d
    };
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

fn result_dict<'py>(py: Python<'py>, r: &CheckResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("schema", r.schema)?;
    d.set_item("id", &r.id)?;
    d.set_item("kind", r.kind.tag())?;
    d.set_item("lhs", &r.lhs)?;
    d.set_item("rhs", &r.rhs)?;
    d.set_item("deviation", r.deviation)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("pass", r.pass)?;
    d.set_item("wall_ms", r.wall_ms)?;
    d.set_item("evals", r.evals)?;
    d.set_item("seed", r.seed)?;
    d.set_item("precision", r.precision)?;
    d.set_item("note", &r.note)?;
    Ok(d)
}

/// Runs one registered check and returns its result as a dict.
#[pyfunction]
#[pyo3(signature = (id, precision=None, seed=None, samples=None))]
fn verify<'py>(
    py: Python<'py>,
    id: &str,
    precision: Option<u32>,
    seed: Option<u64>,
    samples: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(precision, seed, samples, None)?;
    let r = py.allow_threads(|| run_check(id, &cfg)).map_err(to_py)?;
    result_dict(py, &r)
}

/// Runs every check matching any of the `filter` tags.
#[pyfunction]
#[pyo3(signature = (filter=Vec::new(), precision=None, seed=None, samples=None))]
fn verify_all<'py>(
    py: Python<'py>,
    filter: Vec<String>,
    precision: Option<u32>,
    seed: Option<u64>,
    samples: Option<u64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = RunConfig { filter, ..config(precision, seed, samples, None)? };
    let results = py.allow_threads(|| run_all(&cfg)).map_err(to_py)?;
    results.iter().map(|r| result_dict(py, r)).collect()
}

/// Ids of every registered check.
#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

/// `compute("zeta", ["3"], digits=30)` returns the value as a decimal
/// string along with the route and an error estimate.
#[pyfunction]
#[pyo3(signature = (quantity, args=Vec::new(), digits=None, precision=None, seed=None, samples=None))]
fn compute<'py>(
    py: Python<'py>,
    quantity: &str,
    args: Vec<String>,
    digits: Option<usize>,
    precision: Option<u32>,
    seed: Option<u64>,
    samples: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(precision, seed, samples, digits)?;
    let c = py.allow_threads(|| compute_quantity(quantity, &args, &cfg)).map_err(to_py)?;
    let d = PyDict::new_bound(py);
    d.set_item("quantity", c.quantity)?;
    d.set_item("value", c.value)?;
    d.set_item("route", c.route)?;
    d.set_item("error_estimate", c.error_estimate)?;
    Ok(d)
}

/// `[a_1, …, a_n]` for the newform `"f"` or `"h"`.
#[pyfunction]
fn coefficients(form: &str, n: usize) -> PyResult<Vec<i64>> {
    let spec = NewformSpec::by_name(form).map_err(to_py)?;
    spec.coefficients(n)
        .map_err(to_py)?
        .iter()
        .map(|a| a.to_i64().ok_or_else(|| PyValueError::new_err(format!("coefficient {a} exceeds 64 bits"))))
        .collect()
}

/// Affine points of `H_t` over `F_p`.
#[pyfunction]
fn point_count(p: u64, t: i64) -> PyResult<u64> {
    Ok(count_points(p, t).map_err(to_py)?.count)
}

#[pymodule]
#[pyo3(name = "mahlerlab")]
fn mahlerlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", mahlerlab::registry::SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(point_count, m)?)?;
    Ok(())
}
