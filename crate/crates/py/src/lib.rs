//! Python bindings: the command-line front end on JSON strings, plus thin
//! wrappers for the common commands.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(donaldson, DonaldsonError, PyValueError);

fn invoke(args: &[String], input: &str) -> (i32, String, String) {
    let argv = std::iter::once("donaldson".to_string()).chain(args.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = donaldson::cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn checked(py: Python<'_>, args: Vec<String>, input: &str) -> PyResult<String> {
    let (code, out, err) = py.detach(|| invoke(&args, input));
    if code == 0 {
        Ok(out)
    } else {
        Err(DonaldsonError::new_err((code, err.trim_end().to_string())))
    }
}

/// Runs a CLI command; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
#[pyo3(signature = (args, input = ""))]
fn run(py: Python<'_>, args: Vec<String>, input: &str) -> (i32, String, String) {
    py.detach(|| invoke(&args, input))
}

/// Runs a CLI command and returns its JSON output, raising
/// `DonaldsonError(exit_code, error_json)` on failure.
#[pyfunction]
#[pyo3(signature = (args, input = ""))]
fn call(py: Python<'_>, args: Vec<String>, input: &str) -> PyResult<String> {
    checked(py, args, input)
}

/// Fixture listing, or one fixture as a series document.
#[pyfunction]
#[pyo3(signature = (name = None))]
fn catalog(py: Python<'_>, name: Option<String>) -> PyResult<String> {
    let mut args = vec!["catalog".to_string()];
    args.extend(name);
    checked(py, args, "")
}

#[pyfunction]
#[pyo3(signature = (series, cutoff, lambda_cutoff = 4))]
fn expand(py: Python<'_>, series: &str, cutoff: u32, lambda_cutoff: u32) -> PyResult<String> {
    let args = ["expand", "--cutoff", &cutoff.to_string(), "--lambda-cutoff", &lambda_cutoff.to_string()];
    checked(py, args.iter().map(|s| s.to_string()).collect(), series)
}

#[pyfunction]
#[pyo3(signature = (truncated, bound = 3))]
fn fit(py: Python<'_>, truncated: &str, bound: i64) -> PyResult<String> {
    checked(py, vec!["fit".into(), "--bound".into(), bound.to_string()], truncated)
}

#[pyfunction]
fn basic_classes(py: Python<'_>, series: &str) -> PyResult<String> {
    checked(py, vec!["basic-classes".into()], series)
}

#[pymodule]
#[pyo3(name = "donaldson")]
fn donaldson_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DonaldsonError", m.py().get_type::<DonaldsonError>())?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(call, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(basic_classes, m)?)?;
    Ok(())
}
