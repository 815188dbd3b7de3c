//! Python bindings for the Cohen-Ramanujan sum library.
//!
//! Integers cross the boundary as arbitrary-precision Python ints, exact
//! rationals as `fractions.Fraction`, and coefficient sequences as lists of
//! `(index, Fraction)` pairs. High-precision reals are rendered as decimal
//! strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use crsum::arith::{self, PosInt};
use crsum::cr::{self, CrQuery};
use crsum::expansion::{self, CoeffSeq, ExpansionSpec, SupportRule, XiSemantics};
use crsum::klee;
use crsum::oracles::{self, OracleConfig};
use crsum::verify::{self, IdentityId};

fn convert_err(err: crsum::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn pos(value: BigUint) -> PyResult<PosInt> {
    PosInt::new(value).map_err(convert_err)
}

fn query(k: BigUint, n: BigUint, s: u32) -> PyResult<CrQuery> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    Ok(CrQuery::new(pos(k)?, pos(n)?, s))
}

fn seq_from_py(entries: Vec<(u64, BigRational)>) -> PyResult<CoeffSeq> {
    CoeffSeq::new(entries, SupportRule::Any).map_err(convert_err)
}

fn seq_to_py(seq: &CoeffSeq) -> Vec<(u64, BigRational)> {
    seq.iter().map(|(k, v)| (k, v.clone())).collect()
}

/// Prime factorization as a list of (prime, exponent) pairs.
#[pyfunction]
fn factorize(n: BigUint) -> PyResult<Vec<(BigUint, u32)>> {
    Ok(arith::factorize(&pos(n)?)
        .pairs()
        .iter()
        .map(|(p, e)| (p.as_biguint().clone(), *e))
        .collect())
}

#[pyfunction]
fn mobius(n: BigUint) -> PyResult<i8> {
    Ok(arith::mobius(&pos(n)?))
}

#[pyfunction]
fn is_squarefree(n: BigUint) -> PyResult<bool> {
    Ok(arith::is_squarefree(&pos(n)?))
}

#[pyfunction]
fn is_prime(n: BigUint) -> PyResult<bool> {
    Ok(arith::is_prime(&pos(n)?))
}

#[pyfunction]
fn omega(n: BigUint) -> PyResult<u32> {
    Ok(arith::omega(&pos(n)?))
}

#[pyfunction]
fn jordan_totient(s: u32, n: BigUint) -> PyResult<BigUint> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    Ok(arith::jordan_totient(s, &pos(n)?).into_biguint())
}

#[pyfunction]
fn klee_phi(s: u32, n: BigUint) -> PyResult<BigUint> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    Ok(arith::klee_phi(s, &pos(n)?).into_biguint())
}

/// Largest s-th power dividing both arguments (the value d^s itself).
#[pyfunction]
fn generalized_gcd(a: BigUint, b: BigUint, s: u32) -> PyResult<BigUint> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    Ok(arith::generalized_gcd(&pos(a)?, &pos(b)?, s).into_biguint())
}

#[pyfunction]
#[pyo3(name = "core")]
fn core_of(n: BigUint) -> PyResult<BigUint> {
    Ok(arith::core(&pos(n)?).into_biguint())
}

#[pyfunction]
fn star(n: BigUint) -> PyResult<BigUint> {
    Ok(arith::star(&pos(n)?).into_biguint())
}

#[pyfunction]
fn divisors(n: BigUint) -> PyResult<Vec<BigUint>> {
    Ok(arith::divisors(&pos(n)?)
        .into_iter()
        .map(PosInt::into_biguint)
        .collect())
}

#[pyfunction]
fn xi(d: BigUint, k: BigUint) -> PyResult<BigUint> {
    Ok(arith::xi(&pos(d)?, &pos(k)?))
}

#[pyfunction]
fn xi_s(d: BigUint, n: BigUint, s: u32) -> PyResult<BigUint> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    Ok(arith::xi_s(&pos(d)?, &pos(n)?, s))
}

/// Cohen-Ramanujan sum c_k^(s)(n) by the chosen route:
/// "mobius", "multiplicative", "hoelder", or "hoelder-literal".
#[pyfunction]
#[pyo3(signature = (k, n, s, method = "mobius"))]
fn cr_sum(k: BigUint, n: BigUint, s: u32, method: &str) -> PyResult<BigInt> {
    let q = query(k, n, s)?;
    match method {
        "mobius" => Ok(cr::cr_mobius(&q)),
        "multiplicative" => Ok(cr::cr_multiplicative(&q)),
        "hoelder" => cr::cr_hoelder(&q, false).map_err(convert_err),
        "hoelder-literal" => cr::cr_hoelder(&q, true).map_err(convert_err),
        other => Err(PyValueError::new_err(format!(
            "unknown method {other:?}; expected mobius, multiplicative, hoelder, or hoelder-literal"
        ))),
    }
}

/// Direct high-precision exponential sum; returns (value, residual).
#[pyfunction]
#[pyo3(signature = (k, n, s, precision = 128, tolerance = 1e-6))]
fn cr_direct(k: BigUint, n: BigUint, s: u32, precision: u32, tolerance: f64) -> PyResult<(BigInt, f64)> {
    let cfg = OracleConfig {
        precision,
        rounding_tolerance: tolerance,
    };
    oracles::cr_direct(&query(k, n, s)?, &cfg).map_err(convert_err)
}

/// Independent classical Ramanujan sum c_k(n) (trigonometric, rounded).
#[pyfunction]
fn classical_ramanujan(k: BigUint, n: BigUint) -> PyResult<BigInt> {
    oracles::classical_ramanujan_naive(&pos(k)?, &pos(n)?).map_err(convert_err)
}

/// mu(k) * c_k^(s)(n).
#[pyfunction]
fn twisted(k: BigUint, n: BigUint, s: u32) -> PyResult<BigInt> {
    Ok(cr::twisted(&query(k, n, s)?))
}

/// Both sides of the reciprocity identity as exact Fractions.
#[pyfunction]
fn reciprocity_sides(k: BigUint, n: BigUint, s: u32) -> PyResult<(BigRational, BigRational)> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    Ok(cr::reciprocity_sides(&pos(k)?, &pos(n)?, s))
}

/// Sweeps one identity and returns the verification report as a JSON string.
#[pyfunction]
#[pyo3(signature = (identity, kmax = None, nmax = None, s = None, jobs = 0))]
fn verify_identity(
    identity: &str,
    kmax: Option<u64>,
    nmax: Option<u64>,
    s: Option<Vec<u32>>,
    jobs: usize,
) -> PyResult<String> {
    let id: IdentityId = identity.parse().map_err(convert_err)?;
    let mut grid = id.default_grid();
    if let Some(kmax) = kmax {
        grid.k_max = kmax;
    }
    if let Some(nmax) = nmax {
        grid.n_max = nmax;
    }
    if let Some(s_set) = s {
        if s_set.is_empty() || s_set.iter().any(|v| *v < 1) {
            return Err(PyValueError::new_err("s must be a non-empty list of values >= 1"));
        }
        grid.s_set = s_set;
    }
    Ok(verify::sweep(id, &grid, jobs).to_json(false))
}

/// Names of the identities available to `verify_identity`.
#[pyfunction]
fn identity_names() -> Vec<&'static str> {
    IdentityId::ALL.iter().map(|id| id.name()).collect()
}

/// b(m) = mu(m) a(m) on squarefree-supported sequences.
#[pyfunction]
fn transform_first_to_second(a: Vec<(u64, BigRational)>) -> PyResult<Vec<(u64, BigRational)>> {
    let a = seq_from_py(a)?;
    expansion::transform_first_to_second(&a)
        .map(|b| seq_to_py(&b))
        .map_err(convert_err)
}

/// a(k) = mu(k) * sum of b over the core class of k.
#[pyfunction]
fn transform_second_to_first(b: Vec<(u64, BigRational)>, s: u32) -> PyResult<Vec<(u64, BigRational)>> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    let b = seq_from_py(b)?;
    Ok(seq_to_py(&expansion::transform_second_to_first(&b, s)))
}

/// Hardy-Wright forward step b(k^s) = sum mu(n) a(n^s k^s).
#[pyfunction]
fn b_from_a(a: Vec<(u64, BigRational)>, s: u32) -> PyResult<Vec<(u64, BigRational)>> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    let a = seq_from_py(a)?;
    Ok(seq_to_py(&expansion::b_from_a(&a, s)))
}

/// Hardy-Wright inverse step a(k^s) = sum b(n^s k^s).
#[pyfunction]
fn a_from_b(b: Vec<(u64, BigRational)>, s: u32) -> PyResult<Vec<(u64, BigRational)>> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    let b = seq_from_py(b)?;
    Ok(seq_to_py(&expansion::a_from_b(&b, s)))
}

/// First-variable series sum a(k) c_k^(s)(n^s) over the full support.
#[pyfunction]
fn eval_first(a: Vec<(u64, BigRational)>, s: u32, n: u64) -> PyResult<BigRational> {
    if s < 1 || n < 1 {
        return Err(PyValueError::new_err("s and n must be >= 1"));
    }
    let a = seq_from_py(a)?;
    let cover = a.max_support().unwrap_or(1);
    Ok(expansion::eval_first(&ExpansionSpec::first(a, s), n, cover))
}

/// Second-variable series under the chosen xi reading ("indicator" default).
#[pyfunction]
#[pyo3(signature = (b, s, n, xi = "indicator"))]
fn eval_second(b: Vec<(u64, BigRational)>, s: u32, n: u64, xi: &str) -> PyResult<BigRational> {
    if s < 1 || n < 1 {
        return Err(PyValueError::new_err("s and n must be >= 1"));
    }
    let semantics = match xi {
        "indicator" => XiSemantics::Indicator,
        "weighted" => XiSemantics::Weighted,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown xi semantics {other:?}; expected indicator or weighted"
            )))
        }
    };
    let b = seq_from_py(b)?;
    let n_star = arith::star(&PosInt::from_u64(n))
        .to_u64()
        .expect("star of a u64");
    let cover = n_star * b.max_support().unwrap_or(1);
    Ok(expansion::eval_second(
        &ExpansionSpec::second(b, s, semantics),
        n,
        cover,
    ))
}

/// zeta(2s) as a decimal string at the requested precision.
#[pyfunction]
#[pyo3(signature = (s, precision = 128, digits = 38))]
fn zeta_even(s: u32, precision: u32, digits: u32) -> PyResult<String> {
    if s < 1 {
        return Err(PyValueError::new_err("s must be >= 1"));
    }
    if precision < 64 {
        return Err(PyValueError::new_err("precision must be >= 64 bits"));
    }
    Ok(klee::zeta_even_arg(s, precision).to_decimal_string(digits))
}

fn series_report_to_dict<'py>(
    py: Python<'py>,
    report: &klee::SeriesReport,
) -> PyResult<Bound<'py, PyDict>> {
    let digits = report.display_digits();
    let dict = PyDict::new(py);
    dict.set_item("n", report.n)?;
    dict.set_item("s", report.s)?;
    dict.set_item("K", report.k_max)?;
    dict.set_item("precision", report.precision)?;
    dict.set_item("target", report.target.to_decimal_string(digits))?;
    let checkpoints: Vec<(u64, String, String)> = report
        .checkpoints
        .iter()
        .map(|(k, partial, err)| {
            (
                *k,
                partial.to_decimal_string(digits),
                err.to_decimal_string(digits),
            )
        })
        .collect();
    dict.set_item("checkpoints", checkpoints)?;
    dict.set_item(
        "final_abs_error",
        report.final_abs_error.to_decimal_string(digits),
    )?;
    Ok(dict)
}

/// Truncated Klee series report (first-variable form) as a dict.
#[pyfunction]
#[pyo3(signature = (n, s, k_max, precision = 128))]
fn klee_series(py: Python<'_>, n: u64, s: u32, k_max: u64, precision: u32) -> PyResult<Py<PyDict>> {
    if n < 1 || s < 1 || k_max < 1 {
        return Err(PyValueError::new_err("n, s, and K must be >= 1"));
    }
    if precision < 64 {
        return Err(PyValueError::new_err("precision must be >= 64 bits"));
    }
    let report = klee::klee_series_eval(n, s, k_max, precision);
    Ok(series_report_to_dict(py, &report)?.into())
}

/// Second-variable (CR-prime) Klee series report as a dict.
#[pyfunction]
#[pyo3(signature = (n, s, k_max, precision = 128))]
fn klee_cr_prime(py: Python<'_>, n: u64, s: u32, k_max: u64, precision: u32) -> PyResult<Py<PyDict>> {
    if n < 1 || s < 1 || k_max < 1 {
        return Err(PyValueError::new_err("n, s, and K must be >= 1"));
    }
    if precision < 64 {
        return Err(PyValueError::new_err("precision must be >= 64 bits"));
    }
    let report = klee::klee_cr_prime_eval(n, s, k_max, precision);
    Ok(series_report_to_dict(py, &report)?.into())
}

/// (lhs, rhs) decimal strings of the truncated coefficient identity.
#[pyfunction]
#[pyo3(signature = (k, s, d_max, precision = 128, digits = 38))]
fn coefficient_identity(
    k: u64,
    s: u32,
    d_max: u64,
    precision: u32,
    digits: u32,
) -> PyResult<(String, String)> {
    if k < 1 || s < 1 || d_max < 1 {
        return Err(PyValueError::new_err("k, s, and D must be >= 1"));
    }
    if precision < 64 {
        return Err(PyValueError::new_err("precision must be >= 64 bits"));
    }
    let (lhs, rhs) = klee::coefficient_identity_check(k, s, d_max, precision);
    Ok((
        lhs.to_decimal_string(digits),
        rhs.to_decimal_string(digits),
    ))
}

#[pymodule]
fn crsum_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(mobius, m)?)?;
    m.add_function(wrap_pyfunction!(is_squarefree, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(jordan_totient, m)?)?;
    m.add_function(wrap_pyfunction!(klee_phi, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_gcd, m)?)?;
    m.add_function(wrap_pyfunction!(core_of, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(divisors, m)?)?;
    m.add_function(wrap_pyfunction!(xi, m)?)?;
    m.add_function(wrap_pyfunction!(xi_s, m)?)?;
    m.add_function(wrap_pyfunction!(cr_sum, m)?)?;
    m.add_function(wrap_pyfunction!(cr_direct, m)?)?;
    m.add_function(wrap_pyfunction!(classical_ramanujan, m)?)?;
    m.add_function(wrap_pyfunction!(twisted, m)?)?;
    m.add_function(wrap_pyfunction!(reciprocity_sides, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(identity_names, m)?)?;
    m.add_function(wrap_pyfunction!(transform_first_to_second, m)?)?;
    m.add_function(wrap_pyfunction!(transform_second_to_first, m)?)?;
    m.add_function(wrap_pyfunction!(b_from_a, m)?)?;
    m.add_function(wrap_pyfunction!(a_from_b, m)?)?;
    m.add_function(wrap_pyfunction!(eval_first, m)?)?;
    m.add_function(wrap_pyfunction!(eval_second, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_even, m)?)?;
    m.add_function(wrap_pyfunction!(klee_series, m)?)?;
    m.add_function(wrap_pyfunction!(klee_cr_prime, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_identity, m)?)?;
    Ok(())
}
