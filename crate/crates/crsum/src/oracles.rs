//! Slow, independent reference implementations used to adjudicate the fast
//! routes and the textual ambiguities they implement.
//!
//! Nothing in this module calls the evaluators it exists to check: the
//! exponential sums are literal term-by-term summations in high-precision
//! fixed point, the generalized gcd is a linear scan, and the totients are
//! counted by enumeration.

use num_bigint::BigInt;

use crate::arith::{self, PosInt};
use crate::cr::CrQuery;
use crate::rational::ExactRational;
use crate::real::{self, HighPrecReal};
use crate::Error;

/// Summand budget for the direct exponential sums.
pub const MAX_SUMMANDS: u64 = 20_000_000;

/// Precision and rounding policy for the trigonometric oracles.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Bits of working precision for the exponential sums.
    pub precision: u32,
    /// The rounded result is rejected unless the residual (imaginary part and
    /// distance to the nearest integer) stays below this. Must be < 0.5 so
    /// rounding is unambiguous.
    pub rounding_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            precision: 128,
            rounding_tolerance: 1e-6,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.precision < real::MIN_PRECISION {
            return Err(Error::OutOfRange(format!(
                "oracle precision must be >= {} bits",
                real::MIN_PRECISION
            )));
        }
        if !(self.rounding_tolerance > 0.0 && self.rounding_tolerance < 0.5) {
            return Err(Error::OutOfRange(
                "rounding tolerance must lie in (0, 0.5)".into(),
            ));
        }
        Ok(())
    }
}

struct Complex {
    re: HighPrecReal,
    im: HighPrecReal,
}

impl Complex {
    fn one(precision: u32) -> Self {
        Complex {
            re: HighPrecReal::one(precision),
            im: HighPrecReal::zero(precision),
        }
    }

    fn zero(precision: u32) -> Self {
        Complex {
            re: HighPrecReal::zero(precision),
            im: HighPrecReal::zero(precision),
        }
    }

    fn mul(&self, other: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    fn add_assign(&mut self, other: &Complex) {
        self.re = self.re.add(&other.re);
        self.im = self.im.add(&other.im);
    }
}

/// Sums `e^(2*pi*i*n*h/modulus)` over the `h` in `[1, modulus]` accepted by
/// `keep`, rounds the real part to the nearest integer, and checks that the
/// rounding residual and the imaginary part vanish within tolerance.
fn exponential_sum(
    modulus: u64,
    n: &PosInt,
    keep: impl Fn(u64) -> bool,
    cfg: &OracleConfig,
) -> Result<(BigInt, f64), Error> {
    cfg.validate()?;
    let n_mod = n.as_biguint() % modulus;
    let base = ExactRational::new(BigInt::from(n_mod), BigInt::from(modulus));
    let (sin, cos) = real::sin_cos_2pi(&base, cfg.precision);
    let w = Complex { re: cos, im: sin };
    let mut z = Complex::one(cfg.precision);
    let mut acc = Complex::zero(cfg.precision);
    for h in 1..=modulus {
        z = z.mul(&w);
        if keep(h) {
            acc.add_assign(&z);
        }
    }
    let (value, rounding) = acc.re.round_to_nearest();
    let residual = rounding.max(acc.im.abs());
    if !residual.abs_lt_f64(cfg.rounding_tolerance) {
        return Err(Error::ToleranceExceeded {
            residual: residual.to_f64(),
            tolerance: cfg.rounding_tolerance,
            precision: cfg.precision,
        });
    }
    Ok((value, residual.to_f64()))
}

/// Direct evaluation of `c_k^(s)(n)` as the literal exponential sum over
/// `h <= k^s` with `(h, k^s)_s = 1`.
///
/// Returns the nearest integer and the residual; fails with
/// [`Error::ToleranceExceeded`] when the precision is too low for this `k^s`.
pub fn cr_direct(q: &CrQuery, cfg: &OracleConfig) -> Result<(BigInt, f64), Error> {
    let k = q
        .k()
        .to_u64()
        .ok_or_else(|| Error::OutOfRange(format!("k = {} too large for the oracle", q.k())))?;
    let modulus = k
        .checked_pow(q.s())
        .filter(|m| *m <= MAX_SUMMANDS)
        .ok_or_else(|| {
            Error::OutOfRange(format!(
                "k^s = {k}^{} exceeds the {MAX_SUMMANDS}-summand budget",
                q.s()
            ))
        })?;
    // (h, k^s)_s = 1 iff no prime p | k has p^s | h.
    let prime_powers: Vec<u64> = arith::factorize(q.k())
        .pairs()
        .iter()
        .map(|(p, _)| p.to_u64().expect("prime of a u64").pow(q.s()))
        .collect();
    exponential_sum(
        modulus,
        q.n(),
        |h| prime_powers.iter().all(|ps| h % ps != 0),
        cfg,
    )
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Independent classical Ramanujan sum `c_k(n)`: the exponential sum over
/// `m <= k` coprime to `k`, with the default oracle precision.
pub fn classical_ramanujan_naive(k: &PosInt, n: &PosInt) -> Result<BigInt, Error> {
    classical_ramanujan_naive_with(k, n, &OracleConfig::default())
}

pub fn classical_ramanujan_naive_with(
    k: &PosInt,
    n: &PosInt,
    cfg: &OracleConfig,
) -> Result<BigInt, Error> {
    let modulus = k
        .to_u64()
        .filter(|m| *m <= MAX_SUMMANDS)
        .ok_or_else(|| Error::OutOfRange(format!("k = {k} too large for the naive oracle")))?;
    exponential_sum(modulus, n, |m| gcd_u64(m, modulus) == 1, cfg).map(|(v, _)| v)
}

/// Exhaustive-search generalized gcd: scans `d = 1, 2, ...` and returns the
/// largest `d^s` dividing both arguments.
pub fn ggcd_exhaustive(a: &PosInt, b: &PosInt, s: u32) -> PosInt {
    assert!(s >= 1, "s must be >= 1");
    let a = a.to_u64().expect("exhaustive oracle works on u64 inputs");
    let b = b.to_u64().expect("exhaustive oracle works on u64 inputs");
    let bound = a.min(b);
    let mut best = 1u64;
    let mut d = 1u64;
    loop {
        let ds = match d.checked_pow(s) {
            Some(ds) if ds <= bound => ds,
            _ => break,
        };
        if a.is_multiple_of(ds) && b.is_multiple_of(ds) {
            best = ds;
        }
        d += 1;
    }
    PosInt::from_u64(best)
}

/// Which totient the counting oracle should enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotientKind {
    /// `J_s(n)`: s-tuples mod `n` jointly coprime to `n`.
    Jordan,
    /// `Phi_s(n)`: integers `m <= n` with `(m, n)_s = 1`.
    Klee,
}

/// Counting-based totient oracle.
pub fn totient_counting(s: u32, n: &PosInt, which: TotientKind) -> PosInt {
    assert!(s >= 1, "s must be >= 1");
    let n = n.to_u64().expect("counting oracle works on u64 inputs");
    let count = match which {
        TotientKind::Jordan => {
            let mut count = 0u64;
            let mut tuple = vec![1u64; s as usize];
            loop {
                let mut g = n;
                for a in &tuple {
                    g = gcd_u64(g, *a);
                }
                if g == 1 {
                    count += 1;
                }
                let mut i = 0;
                while i < tuple.len() {
                    tuple[i] += 1;
                    if tuple[i] <= n {
                        break;
                    }
                    tuple[i] = 1;
                    i += 1;
                }
                if i == tuple.len() {
                    break;
                }
            }
            count
        }
        TotientKind::Klee => (1..=n).filter(|m| sth_power_coprime(*m, n, s)).count() as u64,
    };
    PosInt::from_u64(count)
}

/// `(m, n)_s = 1`, decided without factorization: for `s = 1` by the
/// Euclidean algorithm, otherwise by scanning candidate bases.
fn sth_power_coprime(m: u64, n: u64, s: u32) -> bool {
    if s == 1 {
        return gcd_u64(m, n) == 1;
    }
    let mut d = 2u64;
    loop {
        let ds = match d.checked_pow(s) {
            Some(ds) if ds <= m.min(n) => ds,
            _ => return true,
        };
        if m.is_multiple_of(ds) && n.is_multiple_of(ds) {
            return false;
        }
        d += 1;
    }
}
