//! Arbitrary-precision real arithmetic on a binary fixed-point carrier.
//!
//! A [`HighPrecReal`] stores `mantissa * 2^(-precision)` with an unbounded
//! integer mantissa. Addition and subtraction are exact; multiplication,
//! division, and rational conversion round to the nearest representable
//! value (ties away from zero), so every computation is deterministic down
//! to the last bit regardless of evaluation order or thread count.
//!
//! The module also provides the two transcendental building blocks the
//! oracles need: `pi` (Machin's formula) and `sin_cos_2pi` (exact quadrant
//! reduction of a rational angle followed by a Taylor expansion on
//! `[0, pi/2)`).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::ExactRational;

/// Minimum precision accepted by the public constructors.
pub const MIN_PRECISION: u32 = 64;

/// A real number carried as `mantissa / 2^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighPrecReal {
    mantissa: BigInt,
    precision: u32,
}

/// `x / 2^bits`, rounded to nearest with ties away from zero.
fn shr_round(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (bits - 1);
    match x.sign() {
        Sign::Minus => -((-x + half) >> bits),
        _ => (x + half) >> bits,
    }
}

impl HighPrecReal {
    fn raw(mantissa: BigInt, precision: u32) -> Self {
        HighPrecReal {
            mantissa,
            precision,
        }
    }

    pub fn zero(precision: u32) -> Self {
        assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
        Self::raw(BigInt::zero(), precision)
    }

    pub fn one(precision: u32) -> Self {
        assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
        Self::raw(BigInt::one() << precision, precision)
    }

    pub fn from_bigint(value: &BigInt, precision: u32) -> Self {
        assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
        Self::raw(value << precision, precision)
    }

    pub fn from_u64(value: u64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(value), precision)
    }

    /// Nearest representable value of `r` at the given precision.
    pub fn from_rational(r: &ExactRational, precision: u32) -> Self {
        assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
        let scaled = r.numer() << precision;
        Self::raw(div_round(&scaled, r.denom()), precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::raw(self.mantissa.abs(), self.precision)
    }

    /// Re-rounds to a different precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
        if precision >= self.precision {
            Self::raw(&self.mantissa << (precision - self.precision), precision)
        } else {
            Self::raw(
                shr_round(&self.mantissa, self.precision - precision),
                precision,
            )
        }
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(
            self.precision, other.precision,
            "precision mismatch: {} vs {}",
            self.precision, other.precision
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        Self::raw(&self.mantissa + &other.mantissa, self.precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same(other);
        Self::raw(&self.mantissa - &other.mantissa, self.precision)
    }

    pub fn neg(&self) -> Self {
        Self::raw(-&self.mantissa, self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same(other);
        Self::raw(
            shr_round(&(&self.mantissa * &other.mantissa), self.precision),
            self.precision,
        )
    }

    pub fn div(&self, other: &Self) -> Self {
        self.assert_same(other);
        assert!(!other.is_zero(), "division by zero");
        let scaled = &self.mantissa << self.precision;
        Self::raw(div_round(&scaled, &other.mantissa), self.precision)
    }

    /// Multiplies by an exact rational with a single rounding step.
    pub fn mul_rational(&self, r: &ExactRational) -> Self {
        let num = &self.mantissa * r.numer();
        Self::raw(div_round(&num, r.denom()), self.precision)
    }

    pub fn div_u64(&self, d: u64) -> Self {
        Self::raw(div_round(&self.mantissa, &BigInt::from(d)), self.precision)
    }

    /// Nearest integer together with the absolute rounding residual.
    pub fn round_to_nearest(&self) -> (BigInt, HighPrecReal) {
        let nearest = shr_round(&self.mantissa, self.precision);
        let residual = (&self.mantissa - (&nearest << self.precision)).abs();
        (nearest, Self::raw(residual, self.precision))
    }

    /// Exact comparison against an `f64` bound.
    pub fn abs_lt_f64(&self, bound: f64) -> bool {
        let b = match ExactRational::from_float(bound) {
            Some(b) => b,
            None => return false,
        };
        let lhs = self.mantissa.abs() * b.denom();
        let rhs = b.numer() * (BigInt::one() << self.precision);
        lhs < rhs
    }

    /// Approximate `f64` value (used only for human-facing residual display).
    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::INFINITY);
        m * 2f64.powi(-(self.precision as i32))
    }

    /// Deterministic decimal rendering with exactly `frac_digits` fractional
    /// digits, rounded to nearest (ties away from zero).
    pub fn to_decimal_string(&self, frac_digits: u32) -> String {
        let pow10 = BigUint::from(10u32).pow(frac_digits);
        let scaled = shr_round(
            &(&self.mantissa * BigInt::from(pow10.clone())),
            self.precision,
        );
        let sign = if scaled.is_negative() { "-" } else { "" };
        let mag = scaled.magnitude();
        let (int_part, frac_part) = mag.div_rem(&pow10);
        if frac_digits == 0 {
            return format!("{sign}{int_part}");
        }
        let frac_str = frac_part.to_string();
        let padding = frac_digits as usize - frac_str.len();
        format!("{sign}{int_part}.{}{frac_str}", "0".repeat(padding))
    }
}

impl PartialOrd for HighPrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HighPrecReal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.assert_same(other);
        self.mantissa.cmp(&other.mantissa)
    }
}

/// `num / den`, rounded to nearest with ties away from zero.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        return q;
    }
    // |r| < |den|; bump q when 2|r| >= |den|.
    let twice = r.abs() << 1;
    if twice >= den.abs() {
        if (num.is_negative()) == (den.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

const GUARD_BITS: u32 = 32;

/// `atan(1/x)` as a fixed-point mantissa at `prec` bits.
fn atan_inv(x: u64, prec: u32) -> BigInt {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << prec) / BigInt::from(x);
    let mut acc = BigInt::zero();
    let mut j = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * j + 1);
        if term.is_zero() && j > 0 {
            break;
        }
        if j.is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power /= &x2;
        j += 1;
    }
    acc
}

/// `pi` at the requested precision (Machin: `pi = 16 atan(1/5) - 4 atan(1/239)`).
pub fn pi(precision: u32) -> HighPrecReal {
    assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
    let wprec = precision + GUARD_BITS;
    let m = atan_inv(5, wprec) * 16 - atan_inv(239, wprec) * 4;
    HighPrecReal::raw(shr_round(&m, GUARD_BITS), precision)
}

/// `(sin(2*pi*frac), cos(2*pi*frac))` for a rational `frac`.
///
/// The angle is reduced exactly modulo 1 and into the first quadrant before
/// any rounding happens, so quadrant boundaries (multiples of 1/4) come out
/// exact.
pub fn sin_cos_2pi(frac: &ExactRational, precision: u32) -> (HighPrecReal, HighPrecReal) {
    assert!(precision >= MIN_PRECISION, "precision must be >= 64 bits");
    let wprec = precision + GUARD_BITS;
    let den = frac.denom();
    let num = frac.numer().mod_floor(den);

    // Quadrant index and in-quadrant remainder: frac mod 1 = (q + 4t) / 4
    // with t in [0, 1/4).
    let four_num: BigInt = &num * 4;
    let (q, t_num) = four_num.div_rem(den);
    let q = q.to_u8().expect("quadrant in 0..4");

    // x = 2*pi*t = pi * t_num / (2*den), 0 <= x < pi/2.
    let pi_m = atan_inv(5, wprec) * 16 - atan_inv(239, wprec) * 4;
    let x = div_round(&(&pi_m * &t_num), &(den * 2));

    let (sin_t, cos_t) = sin_cos_taylor(&x, wprec);
    let (s, c) = match q {
        0 => (sin_t, cos_t),
        1 => (cos_t, -sin_t),
        2 => (-sin_t, -cos_t),
        3 => (-cos_t, sin_t),
        _ => unreachable!(),
    };
    (
        HighPrecReal::raw(shr_round(&s, GUARD_BITS), precision),
        HighPrecReal::raw(shr_round(&c, GUARD_BITS), precision),
    )
}

/// Taylor expansion of sin and cos for a fixed-point `x` in `[0, pi/2)`.
fn sin_cos_taylor(x: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let x2 = shr_round(&(x * x), prec);
    let mut sin = x.clone();
    let mut cos = BigInt::one() << prec;
    let mut term_s = x.clone();
    let mut term_c = BigInt::one() << prec;
    let mut k = 0u64;
    loop {
        // cos term: x^(2k) / (2k)!  ->  next is * x^2 / ((2k+1)(2k+2))
        term_c = shr_round(&(&term_c * &x2), prec);
        term_c = div_round(&term_c, &BigInt::from((2 * k + 1) * (2 * k + 2)));
        // sin term: x^(2k+1) / (2k+1)!  ->  next is * x^2 / ((2k+2)(2k+3))
        term_s = shr_round(&(&term_s * &x2), prec);
        term_s = div_round(&term_s, &BigInt::from((2 * k + 2) * (2 * k + 3)));
        if term_c.is_zero() && term_s.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            cos -= &term_c;
            sin -= &term_s;
        } else {
            cos += &term_c;
            sin += &term_s;
        }
        k += 1;
    }
    (sin, cos)
}
