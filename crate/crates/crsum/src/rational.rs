//! Exact rational plumbing shared by the transforms, reports, and CLI.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision rational in lowest terms with positive denominator.
/// `num_rational::BigRational` maintains both invariants through every
/// operation.
pub type ExactRational = num_rational::BigRational;

/// Builds a rational from integer parts, rejecting a zero denominator.
pub fn rational(numerator: BigInt, denominator: BigInt) -> Result<ExactRational, Error> {
    if denominator.is_zero() {
        return Err(Error::Malformed("zero denominator".into()));
    }
    Ok(ExactRational::new(numerator, denominator))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn rational_to_string(r: &ExactRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the format produced by [`rational_to_string`].
pub fn rational_from_string(s: &str) -> Result<ExactRational, Error> {
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(ExactRational::from(parse_int(s)?)),
        Some((n, d)) => rational(parse_int(n)?, parse_int(d)?),
    }
}

/// Absolute value as a fresh rational.
pub fn rational_abs(r: &ExactRational) -> ExactRational {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}
