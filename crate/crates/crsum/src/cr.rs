//! Evaluation routes for the Cohen-Ramanujan sum `c_k^(s)(n)` and the
//! structural identities built on it.
//!
//! [`cr_mobius`] is the canonical evaluator (the Mobius divisor sum);
//! [`cr_multiplicative`] (prime-power product) and [`cr_hoelder`]
//! (totient-quotient form) are independent cross-checks. The literal
//! Hoelder-type quotient `J_s(n) mu(m) / J_s(m)` with `m = n/(k,n)` is kept
//! available behind `literal = true` because it disagrees with the divisor
//! sum (first at `k=2, n=4, s=2`); the corrected form uses `J_s(k)` and
//! `m = k/d` with `d` the largest divisor of `k` whose s-th power divides
//! `n`, and agrees with [`cr_mobius`] everywhere.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, Factorization, PosInt};
use crate::rational::ExactRational;
use crate::Error;

/// The argument triple of `c_k^(s)(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrQuery {
    k: PosInt,
    n: PosInt,
    s: u32,
}

impl CrQuery {
    pub fn new(k: PosInt, n: PosInt, s: u32) -> Self {
        assert!(s >= 1, "s must be >= 1");
        CrQuery { k, n, s }
    }

    pub fn from_u64(k: u64, n: u64, s: u32) -> Self {
        Self::new(PosInt::from_u64(k), PosInt::from_u64(n), s)
    }

    pub fn k(&self) -> &PosInt {
        &self.k
    }

    pub fn n(&self) -> &PosInt {
        &self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }
}

/// Walks all divisors `d | k` through exponent vectors, yielding
/// `(d, mu(k/d))` for the divisors where `mu(k/d) != 0`.
fn mobius_weighted_divisors(f: &Factorization) -> Vec<(BigUint, i8)> {
    let pairs = f.pairs();
    let mut out = Vec::new();
    let mut exps: Vec<u32> = vec![0; pairs.len()];
    loop {
        // mu(k/d) vanishes unless every co-exponent is 0 or 1.
        let mut sign = 1i8;
        let mut nonzero = true;
        for (i, (_, fi)) in pairs.iter().enumerate() {
            match fi - exps[i] {
                0 => {}
                1 => sign = -sign,
                _ => {
                    nonzero = false;
                    break;
                }
            }
        }
        if nonzero {
            let mut d = BigUint::one();
            for (i, (p, _)) in pairs.iter().enumerate() {
                if exps[i] > 0 {
                    d *= p.as_biguint().pow(exps[i]);
                }
            }
            out.push((d, sign));
        }
        // odometer
        let mut i = 0;
        while i < pairs.len() {
            exps[i] += 1;
            if exps[i] <= pairs[i].1 {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == pairs.len() {
            break;
        }
    }
    out
}

/// Canonical route: `c_k^(s)(n) = sum over d|k with d^s|n of mu(k/d) d^s`.
pub fn cr_mobius(q: &CrQuery) -> BigInt {
    let f = arith::factorize(q.k());
    let n = q.n().as_biguint();
    let mut acc = BigInt::zero();
    for (d, sign) in mobius_weighted_divisors(&f) {
        let ds = d.pow(q.s());
        if (n % &ds).is_zero() {
            let term = BigInt::from(ds);
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

/// Prime-power route: the product over `p^j || k` of
/// `p^(s*j) - p^(s*(j-1))` when `p^(s*j) | n`, `-p^(s*(j-1))` when
/// `p^(s*(j-1)) | n` but `p^(s*j)` does not divide `n`, and 0 otherwise.
pub fn cr_multiplicative(q: &CrQuery) -> BigInt {
    let f = arith::factorize(q.k());
    let n = q.n().as_biguint();
    let s = q.s();
    let mut acc = BigInt::one();
    for (p, j) in f.pairs() {
        let lower = p.as_biguint().pow(s * (j - 1));
        let upper = &lower * p.as_biguint().pow(s);
        if (n % &upper).is_zero() {
            acc *= BigInt::from(upper) - BigInt::from(lower);
        } else if (n % &lower).is_zero() {
            acc *= -BigInt::from(lower);
        } else {
            return BigInt::zero();
        }
    }
    acc
}

/// Hoelder-type quotient route.
///
/// `literal = true` evaluates the form `J_s(n) mu(m) / J_s(m)` with
/// `m = n/(k,n)` exactly as a quotient (reporting non-integrality if the
/// division ever failed to be exact); this form disagrees with the divisor
/// sum and exists for auditing. `literal = false` evaluates the corrected
/// form `J_s(k) mu(m) / J_s(m)` with `m = k/d`, `d` the largest divisor of
/// `k` with `d^s | n`; it agrees with [`cr_mobius`] everywhere.
pub fn cr_hoelder(q: &CrQuery, literal: bool) -> Result<BigInt, Error> {
    let s = q.s();
    let (top, m) = if literal {
        let g = q.k().as_biguint().gcd(q.n().as_biguint());
        let m = PosInt::new(q.n().as_biguint() / g).expect("n/(k,n) >= 1");
        (arith::jordan_totient(s, q.n()), m)
    } else {
        // d = prod over common primes of p^min(e_p(k), floor(e_p(n)/s))
        let fk = arith::factorize(q.k());
        let mut d = BigUint::one();
        for (p, ek) in fk.pairs() {
            let en_s = arith::e_p_s(q.n(), p, s);
            d *= p.as_biguint().pow((*ek).min(en_s));
        }
        let m = PosInt::new(q.k().as_biguint() / d).expect("k/d >= 1");
        (arith::jordan_totient(s, q.k()), m)
    };
    let mu_m = arith::mobius(&m);
    if mu_m == 0 {
        return Ok(BigInt::zero());
    }
    let num = BigInt::from(top.into_biguint()) * BigInt::from(mu_m);
    let den = BigInt::from(arith::jordan_totient(s, &m).into_biguint());
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::NonIntegralResult {
            k: q.k().to_string(),
            n: q.n().to_string(),
            s,
        });
    }
    Ok(quot)
}

/// The twisted function `mu(k) * c_k^(s)(n)`; multiplicative in `n` for
/// squarefree `k`.
pub fn twisted(q: &CrQuery) -> BigInt {
    BigInt::from(arith::mobius(q.k())) * cr_mobius(q)
}

/// Both sides of the reciprocity identity
/// `mu(core k)/(k*)^s * c_k^(s)(n^s (k*)^s)  =  mu(core n)/(n*)^s * c_n^(s)(k^s (n*)^s)`
/// as exact rationals, evaluated through [`cr_mobius`].
pub fn reciprocity_sides(k: &PosInt, n: &PosInt, s: u32) -> (ExactRational, ExactRational) {
    let side = |a: &PosInt, b: &PosInt| -> ExactRational {
        let a_star = arith::star(a);
        let star_s = a_star.as_biguint().pow(s);
        let arg = PosInt::new(b.as_biguint().pow(s) * &star_s).expect(">= 1");
        let c = cr_mobius(&CrQuery::new(a.clone(), arg, s));
        let mu_core = BigInt::from(arith::mobius(&arith::core(a)));
        ExactRational::new(mu_core * c, BigInt::from(star_s))
    };
    (side(k, n), side(n, k))
}
