//! Python bindings: the three verifier commands (returning JSON reports) and
//! a few of the underlying primitives.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ab_homotopy::freemodule::format_scalar;
use ab_homotopy::instances::BUILTIN_NAMES;
use ab_homotopy::signs::{koszul_sign as koszul, Degree, Permutation};
use ab_homotopy::tensor_coalgebra::{shuffle as shuffle_words, LetterDegrees, TensorWord};
use ab_homotopy::verify::{self, AlgebraSource, Bounds, Report, SuiteConfig};
use ab_homotopy::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Contract(_) => PyValueError::new_err(e.to_string()),
        Error::Truncation(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    command: fn(&ab_homotopy::instances::Instance, &SuiteConfig) -> ab_homotopy::Result<Report>,
    algebra: &str,
    params: Vec<String>,
    max_degree: Option<i64>,
    max_word_len: usize,
    max_sym_factors: usize,
    max_letters: usize,
    seed: u64,
    mutants: usize,
    jobs: usize,
) -> PyResult<String> {
    let cfg = SuiteConfig {
        bounds: Bounds { max_word_len, max_sym_factors, max_letters },
        seed,
        jobs,
        mutants,
        ..SuiteConfig::default()
    };
    let inst = AlgebraSource::parse(algebra, &params, max_degree)
        .and_then(|s| s.load())
        .map_err(py_err)?;
    Ok(command(&inst, &cfg).map_err(py_err)?.to_json())
}

/// Names of the builtin instances.
#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    BUILTIN_NAMES.to_vec()
}

/// Axioms of an instance; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (algebra, params=Vec::new(), max_degree=None, jobs=0))]
fn check_algebra(algebra: &str, params: Vec<String>, max_degree: Option<i64>, jobs: usize) -> PyResult<String> {
    run(verify::check_algebra, algebra, params, max_degree, 3, 2, 4, 0, 0, jobs)
}

/// The identity ladder; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (algebra, params=Vec::new(), max_degree=None, max_word_len=3, max_sym_factors=2, max_letters=4, jobs=0))]
fn verify_envelope(
    algebra: &str,
    params: Vec<String>,
    max_degree: Option<i64>,
    max_word_len: usize,
    max_sym_factors: usize,
    max_letters: usize,
    jobs: usize,
) -> PyResult<String> {
    run(verify::verify_envelope, algebra, params, max_degree, max_word_len, max_sym_factors, max_letters, 0, 0, jobs)
}

/// Seeded single-constant perturbations; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (algebra, params=Vec::new(), max_degree=None, seed=0, mutants=10, jobs=0))]
fn mutation(
    algebra: &str,
    params: Vec<String>,
    max_degree: Option<i64>,
    seed: u64,
    mutants: usize,
    jobs: usize,
) -> PyResult<String> {
    run(verify::mutation, algebra, params, max_degree, 3, 2, 4, seed, mutants, jobs)
}

/// Koszul sign of moving the item at index `i` to `images[i]`.
#[pyfunction]
fn koszul_sign(degrees: Vec<i64>, images: Vec<usize>) -> PyResult<i32> {
    let sigma = Permutation::from_images(images).map_err(py_err)?;
    let d: Vec<Degree> = degrees.into_iter().map(Degree).collect();
    koszul(&d, &sigma).map_err(py_err)
}

/// Signed shuffle product of two words over letters `0..len(degrees)`, as
/// `(word, coefficient)` pairs with coefficients in text form.
#[pyfunction]
fn shuffle(degrees: Vec<i64>, x: Vec<u32>, y: Vec<u32>) -> PyResult<Vec<(Vec<u32>, String)>> {
    let n = degrees.len() as u32;
    if x.iter().chain(&y).any(|&l| l >= n) {
        return Err(PyValueError::new_err("letter without a degree"));
    }
    let d = LetterDegrees(degrees);
    let x = TensorWord::new(&x).map_err(py_err)?;
    let y = TensorWord::new(&y).map_err(py_err)?;
    Ok(shuffle_words(&d, &x, &y)
        .iter()
        .map(|(w, c)| (w.letters().to_vec(), format_scalar(c)))
        .collect())
}

#[pymodule]
#[pyo3(name = "ab_homotopy")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    m.add_function(wrap_pyfunction!(check_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(verify_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(mutation, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_sign, m)?)?;
    m.add_function(wrap_pyfunction!(shuffle, m)?)?;
    Ok(())
}
