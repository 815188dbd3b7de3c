//! Elementary arithmetic functions over unbounded positive integers.
//!
//! Everything downstream (sum evaluation, identity sweeps, series transforms)
//! is built on the decompositions here: prime factorization, the Mobius
//! function, Jordan and Klee totients, the generalized gcd, and the
//! core/star splitting of an integer.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::Error;

/// An unbounded positive integer (`>= 1`).
///
/// All integer variables of the domain (`k`, `n`, `d`, `m`, `h`) live here;
/// zero is rejected at construction because none of the arithmetic functions
/// is ever evaluated at zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosInt(BigUint);

impl PosInt {
    pub fn new(value: BigUint) -> Result<Self, Error> {
        if value.is_zero() {
            Err(Error::ZeroValue)
        } else {
            Ok(PosInt(value))
        }
    }

    /// Panics on zero; intended for literal desk-scale values.
    pub fn from_u64(value: u64) -> Self {
        assert!(value >= 1, "PosInt requires a positive value");
        PosInt(BigUint::from(value))
    }

    pub fn one() -> Self {
        PosInt(BigUint::one())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `self^exp` (never zero, so stays in `PosInt`).
    pub fn pow(&self, exp: u32) -> Self {
        PosInt(self.0.pow(exp))
    }

    pub fn checked_mul(&self, other: &Self) -> Self {
        PosInt(&self.0 * &other.0)
    }

    pub fn divides(&self, other: &BigUint) -> bool {
        (other % &self.0).is_zero()
    }
}

impl std::fmt::Display for PosInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for PosInt {
    type Error = Error;
    fn try_from(value: u64) -> Result<Self, Error> {
        PosInt::new(BigUint::from(value))
    }
}

impl TryFrom<BigUint> for PosInt {
    type Error = Error;
    fn try_from(value: BigUint) -> Result<Self, Error> {
        PosInt::new(value)
    }
}

impl std::str::FromStr for PosInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let v: BigUint = s
            .parse()
            .map_err(|_| Error::Malformed(format!("not a positive integer: {s:?}")))?;
        PosInt::new(v)
    }
}

/// Canonical prime factorization: strictly increasing primes with exponents
/// `>= 1`. The empty list represents 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(PosInt, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(PosInt, u32)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> PosInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.pairs {
            acc *= p.as_biguint().pow(*e);
        }
        PosInt(acc)
    }
}

// Trial-division wheel mod 30 (after 2, 3, 5).
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 7u64;
    let mut wheel_idx = 0usize;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += WHEEL[wheel_idx];
        wheel_idx = (wheel_idx + 1) % WHEEL.len();
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization by trial division with a small-prime wheel.
///
/// Deterministic; `factorize(1)` is the empty factorization. Values that fit
/// in a machine word take a fast path.
pub fn factorize(n: &PosInt) -> Factorization {
    if let Some(small) = n.to_u64() {
        let pairs = factor_u64(small)
            .into_iter()
            .map(|(p, e)| (PosInt::from_u64(p), e))
            .collect();
        return Factorization { pairs };
    }
    let mut rem = n.as_biguint().clone();
    let mut pairs: Vec<(PosInt, u32)> = Vec::new();
    let divide_out = |rem: &mut BigUint, p: u64, pairs: &mut Vec<(PosInt, u32)>| {
        let pb = BigUint::from(p);
        if (&*rem % &pb).is_zero() {
            let mut e = 0;
            while (&*rem % &pb).is_zero() {
                *rem /= &pb;
                e += 1;
            }
            pairs.push((PosInt::from_u64(p), e));
        }
    };
    for p in [2u64, 3, 5] {
        divide_out(&mut rem, p, &mut pairs);
    }
    let mut p = 7u64;
    let mut wheel_idx = 0usize;
    while !rem.is_one() {
        let p_sq = BigUint::from(p) * BigUint::from(p);
        if p_sq > rem {
            break;
        }
        divide_out(&mut rem, p, &mut pairs);
        match p.checked_add(WHEEL[wheel_idx]) {
            Some(next) => p = next,
            // Cofactor has no divisor below 2^64; it is prime for every input
            // this artifact can reach.
            None => break,
        }
        wheel_idx = (wheel_idx + 1) % WHEEL.len();
    }
    if !rem.is_one() {
        pairs.push((PosInt(rem), 1));
    }
    Factorization { pairs }
}

/// True when `n` has exactly one divisor pair, i.e. `n` is prime.
pub fn is_prime(n: &PosInt) -> bool {
    let f = factorize(n);
    f.pairs.len() == 1 && f.pairs[0].1 == 1
}

/// Mobius function: `0` when a squared prime divides `n`, else `(-1)^omega(n)`.
pub fn mobius(n: &PosInt) -> i8 {
    let f = factorize(n);
    if f.pairs.iter().any(|(_, e)| *e > 1) {
        0
    } else if f.pairs.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: &PosInt) -> bool {
    factorize(n).pairs.iter().all(|(_, e)| *e == 1)
}

/// Number of distinct prime divisors.
pub fn omega(n: &PosInt) -> u32 {
    factorize(n).pairs.len() as u32
}

/// Jordan totient `J_s(n) = n^s * prod over p|n of (1 - p^-s)`, evaluated as
/// the exact integer `prod p^(s(e-1)) * (p^s - 1)`. `J_1` is the Euler
/// totient.
pub fn jordan_totient(s: u32, n: &PosInt) -> PosInt {
    assert!(s >= 1, "s must be >= 1");
    jordan_totient_of(s, &factorize(n))
}

pub(crate) fn jordan_totient_of(s: u32, f: &Factorization) -> PosInt {
    let mut acc = BigUint::one();
    for (p, e) in f.pairs() {
        let ps = p.as_biguint().pow(s);
        acc *= &ps - 1u32;
        if *e > 1 {
            acc *= ps.pow(e - 1);
        }
    }
    PosInt(acc)
}

/// Klee's function `Phi_s(n) = n * prod over p^s|n of (1 - p^-s)`.
///
/// Satisfies `Phi_s(n^s) = J_s(n)` and `Phi_1 = phi`.
pub fn klee_phi(s: u32, n: &PosInt) -> PosInt {
    assert!(s >= 1, "s must be >= 1");
    let f = factorize(n);
    let mut acc = n.as_biguint().clone();
    for (p, e) in f.pairs() {
        if *e >= s {
            let ps = p.as_biguint().pow(s);
            // p^s | n for each retained prime and the p^s are pairwise
            // coprime, so the divisions stay exact.
            acc /= &ps;
            acc *= &ps - 1u32;
        }
    }
    PosInt(acc)
}

/// Generalized gcd `(a, b)_s`: the largest `d^s` dividing both `a` and `b`.
/// Returns the value `d^s` itself (an s-th power); `(a, b)_1` is the usual
/// gcd.
pub fn generalized_gcd(a: &PosInt, b: &PosInt, s: u32) -> PosInt {
    assert!(s >= 1, "s must be >= 1");
    let fa = factorize(a);
    let mut acc = BigUint::one();
    for (p, ea) in fa.pairs() {
        let eb = exponent_of(b.as_biguint(), p);
        let d_exp = (*ea / s).min(eb / s);
        if d_exp > 0 {
            acc *= p.as_biguint().pow(d_exp * s);
        }
    }
    PosInt(acc)
}

/// Largest squarefree divisor of `n` (the product of its distinct primes).
pub fn core(n: &PosInt) -> PosInt {
    let mut acc = BigUint::one();
    for (p, _) in factorize(n).pairs() {
        acc *= p.as_biguint();
    }
    PosInt(acc)
}

/// `n* = n / core(n)`.
pub fn star(n: &PosInt) -> PosInt {
    PosInt(n.as_biguint() / core(n).as_biguint())
}

fn exponent_of(n: &BigUint, p: &PosInt) -> u32 {
    let mut rem = n.clone();
    let pb = p.as_biguint();
    let mut e = 0;
    loop {
        let (q, r) = rem.div_rem(pb);
        if !r.is_zero() {
            return e;
        }
        rem = q;
        e += 1;
    }
}

/// Exponent of `p` in the prime factorization of `n`.
pub fn e_p(n: &PosInt, p: &PosInt) -> u32 {
    assert!(!p.is_one(), "p must be a prime (>= 2)");
    exponent_of(n.as_biguint(), p)
}

/// The `a` with `p^(a*s) | n` and `p^((a+1)*s)` not dividing `n`;
/// equals `floor(e_p(n) / s)`.
pub fn e_p_s(n: &PosInt, p: &PosInt, s: u32) -> u32 {
    assert!(s >= 1, "s must be >= 1");
    e_p(n, p) / s
}

/// All divisors of `n` in increasing order.
pub fn divisors(n: &PosInt) -> Vec<PosInt> {
    let f = factorize(n);
    let mut out = vec![BigUint::one()];
    for (p, e) in f.pairs() {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        let mut power = BigUint::one();
        for _ in 0..=*e {
            for d in &out {
                next.push(d * &power);
            }
            power *= p.as_biguint();
        }
        out = next;
    }
    out.sort();
    out.into_iter().map(PosInt).collect()
}

/// `xi_d(k)`: the weight `d` when `d | k`, else 0.
pub fn xi(d: &PosInt, k: &PosInt) -> BigUint {
    if d.divides(k.as_biguint()) {
        d.as_biguint().clone()
    } else {
        BigUint::zero()
    }
}

/// Indicator variant of [`xi`]: 1 when `d | k`, else 0.
pub fn xi_indicator(d: &PosInt, k: &PosInt) -> BigUint {
    if d.divides(k.as_biguint()) {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

/// `xi^(s)_d(n)`: the weight `d^s` when `d^s | n`, else 0.
pub fn xi_s(d: &PosInt, n: &PosInt, s: u32) -> BigUint {
    assert!(s >= 1, "s must be >= 1");
    let ds = d.as_biguint().pow(s);
    if (n.as_biguint() % &ds).is_zero() {
        ds
    } else {
        BigUint::zero()
    }
}
