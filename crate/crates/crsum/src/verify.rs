//! Data-driven verification sweeps: every structural identity is registered
//! as a hypothesis filter plus two side-evaluators, and a sweep walks a
//! rectangular grid, counting hypothesis-violating points as skipped and
//! recording any disagreement as a counterexample.
//!
//! Reports are deterministic: grid points are enumerated in lexicographic
//! `(k, m, n, s)` order, both sides are exact rationals, and parallel sweeps
//! merge per-`k` slices in order, so the serialized report is byte-identical
//! across runs and thread counts.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, PosInt};
use crate::cr::{self, CrQuery};
use crate::rational::{rational_to_string, ExactRational};
use crate::Error;

/// The closed registry of verifiable identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// Twisted multiplicativity in the second variable:
    /// `mu(k) c_k^(s)(mn) = mu(k) c_k^(s)(m) * mu(k) c_k^(s)(n)` for
    /// squarefree `k` and coprime `m, n`.
    MultInN,
    /// `mu(k) c_k^(s)(n) = sum over d^s | (k^s, n)_s of d^s mu(d)` for
    /// squarefree `k`.
    TwistedSum,
    /// `c_k^(s)(n) = 0` whenever `(k*)^s` does not divide `n`.
    Vanishing,
    /// `c_k^(s)(n (k*)^s) = (k*)^s c_core(k)^(s)(n)`.
    CoreShift,
    /// `mu(k) c_k^(s)(n^s) = mu(n) c_n^(s)(k^s)` for squarefree `k, n`.
    Symmetry,
    /// `mu(core k)/(k*)^s c_k^(s)(n^s (k*)^s) = mu(core n)/(n*)^s c_n^(s)(k^s (n*)^s)`.
    Reciprocity,
    /// `xi^(s)_k(n) = sum over d|k of c_d^(s)(n)`.
    XiDivisorSum,
    /// The Mobius divisor sum equals the prime-power product formula.
    RouteAgreement,
    /// Audit of the literal quotient `J_s(n) mu(m)/J_s(m)`, `m = n/(k,n)`,
    /// against the divisor sum. Finding counterexamples is this identity's
    /// purpose; it is expected to fail.
    HoelderLiteralAudit,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::MultInN,
        IdentityId::TwistedSum,
        IdentityId::Vanishing,
        IdentityId::CoreShift,
        IdentityId::Symmetry,
        IdentityId::Reciprocity,
        IdentityId::XiDivisorSum,
        IdentityId::RouteAgreement,
        IdentityId::HoelderLiteralAudit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::MultInN => "mult-in-n",
            IdentityId::TwistedSum => "twisted-sum",
            IdentityId::Vanishing => "vanishing",
            IdentityId::CoreShift => "core-shift",
            IdentityId::Symmetry => "symmetry",
            IdentityId::Reciprocity => "reciprocity",
            IdentityId::XiDivisorSum => "xi-divisor-sum",
            IdentityId::RouteAgreement => "route-agreement",
            IdentityId::HoelderLiteralAudit => "hoelder-literal-audit",
        }
    }

    /// True for the one registry entry whose job is to find failures.
    pub fn expects_failures(&self) -> bool {
        matches!(self, IdentityId::HoelderLiteralAudit)
    }

    /// Whether grid points carry the extra coordinate `m`.
    pub fn uses_m(&self) -> bool {
        matches!(self, IdentityId::MultInN)
    }

    /// The grid each identity is verified on by default.
    pub fn default_grid(&self) -> GridSpec {
        let (k_max, n_max, s_set) = match self {
            IdentityId::MultInN => (60, 60, vec![1, 2, 3]),
            IdentityId::TwistedSum => (100, 200, vec![1, 2, 3]),
            IdentityId::Vanishing => (100, 200, vec![1, 2]),
            IdentityId::CoreShift => (100, 100, vec![1, 2]),
            IdentityId::Symmetry => (100, 100, vec![1, 2]),
            IdentityId::Reciprocity => (100, 100, vec![1, 2]),
            IdentityId::XiDivisorSum => (100, 100, vec![1, 2]),
            IdentityId::RouteAgreement => (200, 200, vec![1, 2, 3]),
            IdentityId::HoelderLiteralAudit => (20, 20, vec![2]),
        };
        GridSpec {
            k_max,
            n_max,
            s_set,
            filters: Filters::default(),
        }
    }
}

impl std::str::FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        IdentityId::ALL
            .iter()
            .find(|id| id.name() == s)
            .copied()
            .ok_or_else(|| {
                Error::Malformed(format!(
                    "unknown identity {s:?}; expected one of: {}",
                    IdentityId::ALL
                        .iter()
                        .map(|id| id.name())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }
}

/// Optional predicate flags restricting which grid points belong to a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filters {
    #[serde(rename = "squarefree-k")]
    pub squarefree_k: bool,
    #[serde(rename = "squarefree-n")]
    pub squarefree_n: bool,
    #[serde(rename = "coprime-pairs")]
    pub coprime_pairs: bool,
}

/// Rectangular sweep domain: `k` in `[1, k_max]`, `n` (and `m`, for the
/// identities that use it) in `[1, n_max]`, `s` over `s_set`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub k_max: u64,
    pub n_max: u64,
    pub s_set: Vec<u32>,
    pub filters: Filters,
}

/// A concrete grid point. `m` is populated only for identities over
/// coprime pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Point {
    pub k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub n: u64,
    pub s: u32,
}

impl Point {
    pub fn new(k: u64, n: u64, s: u32) -> Self {
        Point {
            k,
            m: None,
            n,
            s,
        }
    }

    pub fn with_m(k: u64, m: u64, n: u64, s: u32) -> Self {
        Point {
            k,
            m: Some(m),
            n,
            s,
        }
    }
}

/// One disagreement: the point plus both evaluated sides.
#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub point: Point,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of sweeping one identity over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub grid: GridSpec,
    pub cases_checked: u64,
    pub skipped: u64,
    pub failures: Vec<FailureRecord>,
    /// Populated by [`sweep`] but excluded from serialization unless
    /// explicitly requested, so report files stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Canonical JSON form. Timing is stripped unless `include_timing`.
    pub fn to_json(&self, include_timing: bool) -> String {
        let mut clone = self.clone();
        if !include_timing {
            clone.wall_time_s = None;
        }
        serde_json::to_string_pretty(&clone).expect("report serialization cannot fail")
    }
}

fn rat_int(v: BigInt) -> ExactRational {
    ExactRational::from(v)
}

fn hypothesis(id: IdentityId, point: &Point) -> Result<(), String> {
    let k = PosInt::from_u64(point.k);
    match id {
        IdentityId::MultInN => {
            let m = point.m.ok_or("mult-in-n points need the coordinate m")?;
            if !arith::is_squarefree(&k) {
                return Err(format!("k = {} is not squarefree", point.k));
            }
            if gcd_u64(m, point.n) != 1 {
                return Err(format!("(m, n) = ({m}, {}) are not coprime", point.n));
            }
            Ok(())
        }
        IdentityId::TwistedSum => {
            if !arith::is_squarefree(&k) {
                return Err(format!("k = {} is not squarefree", point.k));
            }
            Ok(())
        }
        IdentityId::Vanishing => {
            let star_pow = arith::star(&k).pow(point.s);
            if star_pow.divides(PosInt::from_u64(point.n).as_biguint()) {
                return Err(format!(
                    "(k*)^s = {star_pow} divides n = {}; the vanishing hypothesis needs the opposite",
                    point.n
                ));
            }
            Ok(())
        }
        IdentityId::Symmetry => {
            if !arith::is_squarefree(&k) {
                return Err(format!("k = {} is not squarefree", point.k));
            }
            if !arith::is_squarefree(&PosInt::from_u64(point.n)) {
                return Err(format!("n = {} is not squarefree", point.n));
            }
            Ok(())
        }
        IdentityId::CoreShift
        | IdentityId::Reciprocity
        | IdentityId::XiDivisorSum
        | IdentityId::RouteAgreement
        | IdentityId::HoelderLiteralAudit => Ok(()),
    }
}

fn sides(id: IdentityId, point: &Point) -> (ExactRational, ExactRational) {
    let k = PosInt::from_u64(point.k);
    let n = PosInt::from_u64(point.n);
    let s = point.s;
    match id {
        IdentityId::MultInN => {
            let m = point.m.expect("hypothesis guarantees m");
            let mu_k = BigInt::from(arith::mobius(&k));
            let lhs = &mu_k
                * cr::cr_mobius(&CrQuery::new(
                    k.clone(),
                    PosInt::from_u64(m * point.n),
                    s,
                ));
            let rhs = (&mu_k * cr::cr_mobius(&CrQuery::new(k.clone(), PosInt::from_u64(m), s)))
                * (&mu_k * cr::cr_mobius(&CrQuery::new(k.clone(), n, s)));
            (rat_int(lhs), rat_int(rhs))
        }
        IdentityId::TwistedSum => {
            let lhs = cr::twisted(&CrQuery::new(k.clone(), n.clone(), s));
            // g with g^s = (k^s, n)_s; the summation range d^s | (k^s, n)_s
            // is exactly d | g.
            let mut g = BigUint::from(1u32);
            for (p, ek) in arith::factorize(&k).pairs() {
                let en_s = arith::e_p_s(&n, p, s);
                g *= p.as_biguint().pow((*ek).min(en_s));
            }
            let mut rhs = BigInt::zero();
            for d in arith::divisors(&PosInt::new(g).expect("g >= 1")) {
                let mu = arith::mobius(&d);
                if mu != 0 {
                    rhs += BigInt::from(mu) * BigInt::from(d.as_biguint().pow(s));
                }
            }
            (rat_int(lhs), rat_int(rhs))
        }
        IdentityId::Vanishing => {
            let lhs = cr::cr_mobius(&CrQuery::new(k, n, s));
            (rat_int(lhs), rat_int(BigInt::zero()))
        }
        IdentityId::CoreShift => {
            let star_pow = arith::star(&k).pow(s);
            let shifted = PosInt::new(n.as_biguint() * star_pow.as_biguint()).expect(">= 1");
            let lhs = cr::cr_mobius(&CrQuery::new(k.clone(), shifted, s));
            let rhs = BigInt::from(star_pow.into_biguint())
                * cr::cr_mobius(&CrQuery::new(arith::core(&k), n, s));
            (rat_int(lhs), rat_int(rhs))
        }
        IdentityId::Symmetry => {
            let lhs = BigInt::from(arith::mobius(&k))
                * cr::cr_mobius(&CrQuery::new(k.clone(), n.pow(s), s));
            let rhs = BigInt::from(arith::mobius(&n))
                * cr::cr_mobius(&CrQuery::new(n.clone(), k.pow(s), s));
            (rat_int(lhs), rat_int(rhs))
        }
        IdentityId::Reciprocity => cr::reciprocity_sides(&k, &n, s),
        IdentityId::XiDivisorSum => {
            let lhs = BigInt::from(arith::xi_s(&k, &n, s));
            let mut rhs = BigInt::zero();
            for d in arith::divisors(&k) {
                rhs += cr::cr_mobius(&CrQuery::new(d, n.clone(), s));
            }
            (rat_int(lhs), rat_int(rhs))
        }
        IdentityId::RouteAgreement => {
            let q = CrQuery::new(k, n, s);
            (rat_int(cr::cr_mobius(&q)), rat_int(cr::cr_multiplicative(&q)))
        }
        IdentityId::HoelderLiteralAudit => {
            // literal quotient J_s(n) mu(m) / J_s(m), m = n/(k, n), kept as
            // an exact rational so nothing is hidden by integer division
            let g = num_integer::Integer::gcd(k.as_biguint(), n.as_biguint());
            let m = PosInt::new(n.as_biguint() / g).expect("n/(k,n) >= 1");
            let lhs = ExactRational::new(
                BigInt::from(arith::jordan_totient(s, &n).into_biguint())
                    * BigInt::from(arith::mobius(&m)),
                BigInt::from(arith::jordan_totient(s, &m).into_biguint()),
            );
            let rhs = rat_int(cr::cr_mobius(&CrQuery::new(k, n, s)));
            (lhs, rhs)
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Evaluates one identity at one point: hypothesis check, then both sides.
pub fn check_one(id: IdentityId, point: &Point) -> Result<(bool, ExactRational, ExactRational), Error> {
    hypothesis(id, point).map_err(Error::HypothesisViolated)?;
    let (lhs, rhs) = sides(id, point);
    Ok((lhs == rhs, lhs, rhs))
}

fn passes_filters(id: IdentityId, filters: &Filters, point: &Point) -> bool {
    if filters.squarefree_k && !arith::is_squarefree(&PosInt::from_u64(point.k)) {
        return false;
    }
    if filters.squarefree_n && !arith::is_squarefree(&PosInt::from_u64(point.n)) {
        return false;
    }
    if filters.coprime_pairs && id.uses_m() {
        if let Some(m) = point.m {
            if gcd_u64(m, point.n) != 1 {
                return false;
            }
        }
    }
    true
}

/// Sweeps the identity over every point of the (filtered) grid.
///
/// `jobs = 0` uses the global thread pool; any other value pins the worker
/// count. Output is independent of `jobs`: each `k`-slice is evaluated in
/// deterministic inner order and slices are concatenated in `k` order.
pub fn sweep(id: IdentityId, grid: &GridSpec, jobs: usize) -> VerificationReport {
    let started = std::time::Instant::now();
    let mut s_set = grid.s_set.clone();
    s_set.sort_unstable();
    s_set.dedup();

    let sweep_k = |k: u64| -> (u64, u64, Vec<FailureRecord>) {
        let mut cases = 0u64;
        let mut skipped = 0u64;
        let mut failures = Vec::new();
        let m_range: Vec<Option<u64>> = if id.uses_m() {
            (1..=grid.n_max).map(Some).collect()
        } else {
            vec![None]
        };
        for m in &m_range {
            for n in 1..=grid.n_max {
                for &s in &s_set {
                    let point = Point { k, m: *m, n, s };
                    if !passes_filters(id, &grid.filters, &point) {
                        continue;
                    }
                    if hypothesis(id, &point).is_err() {
                        skipped += 1;
                        continue;
                    }
                    cases += 1;
                    let (lhs, rhs) = sides(id, &point);
                    if lhs != rhs {
                        failures.push(FailureRecord {
                            point,
                            lhs: rational_to_string(&lhs),
                            rhs: rational_to_string(&rhs),
                        });
                    }
                }
            }
        }
        (cases, skipped, failures)
    };

    let per_k: Vec<(u64, u64, Vec<FailureRecord>)> = if jobs == 1 {
        (1..=grid.k_max).map(sweep_k).collect()
    } else {
        use rayon::prelude::*;
        let run = || (1..=grid.k_max).into_par_iter().map(sweep_k).collect();
        if jobs == 0 {
            run()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            pool.install(run)
        }
    };

    let mut cases_checked = 0u64;
    let mut skipped = 0u64;
    let mut failures = Vec::new();
    for (c, sk, mut f) in per_k {
        cases_checked += c;
        skipped += sk;
        failures.append(&mut f);
    }

    VerificationReport {
        identity: id.name().to_string(),
        grid: grid.clone(),
        cases_checked,
        skipped,
        failures,
        wall_time_s: Some(started.elapsed().as_secs_f64()),
    }
}
