//! Exact coefficient calculus for series in the first variable
//! (`sum a(k) c_k^(s)(n^s)`) and the second variable
//! (`mu(core n)/(n*)^s * sum xi_{n*}(k) b(k/n*) c_n^(s)(k^s)`).
//!
//! All sequences are finitely supported, so every identity in this module is
//! a finite sum of exact rationals: equality checks are binary, with no
//! tolerances anywhere.
//!
//! The `xi` weight in the second-variable series is ambiguous between two
//! readings (the weighted value `n*` or a plain divisibility indicator);
//! both are implemented and [`adjudicate_xi`] decides executable behavior by
//! checking which one makes the first/second-variable round trip exact. The
//! indicator semantics wins and is the default everywhere downstream.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use crate::arith::{self, PosInt};
use crate::cr::{self, CrQuery};
use crate::rational::ExactRational;
use crate::Error;

/// Declared support restriction for a [`CoeffSeq`], enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportRule {
    Any,
    SquarefreeOnly,
    /// Nonzero only at `t^s` with `t` squarefree (the shape `k = (core k)^s`).
    SthPowersOfSquarefree(u32),
}

impl SupportRule {
    fn name(&self) -> String {
        match self {
            SupportRule::Any => "any".into(),
            SupportRule::SquarefreeOnly => "squarefree-only".into(),
            SupportRule::SthPowersOfSquarefree(s) => format!("{s}-th-powers-of-squarefree"),
        }
    }

    fn admits(&self, index: u64) -> bool {
        match self {
            SupportRule::Any => true,
            SupportRule::SquarefreeOnly => arith::is_squarefree(&PosInt::from_u64(index)),
            SupportRule::SthPowersOfSquarefree(s) => match sth_root_exact(index, *s) {
                Some(root) => arith::is_squarefree(&PosInt::from_u64(root)),
                None => false,
            },
        }
    }
}

/// Exact integer s-th root, if `index` is a perfect s-th power.
pub fn sth_root_exact(index: u64, s: u32) -> Option<u64> {
    if s == 1 {
        return Some(index);
    }
    let guess = (index as f64).powf(1.0 / s as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|r| r.checked_pow(s) == Some(index))
}

/// A finitely supported map from positive index to exact rational.
///
/// Only nonzero entries are stored. Equality compares entries alone; the
/// support rule is a validation tag, not part of the value.
#[derive(Debug, Clone)]
pub struct CoeffSeq {
    entries: BTreeMap<u64, ExactRational>,
    rule: SupportRule,
}

impl PartialEq for CoeffSeq {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for CoeffSeq {}

impl CoeffSeq {
    pub fn new(
        entries: impl IntoIterator<Item = (u64, ExactRational)>,
        rule: SupportRule,
    ) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (index, value) in entries {
            if index == 0 {
                return Err(Error::ZeroValue);
            }
            if value.is_zero() {
                continue;
            }
            if !rule.admits(index) {
                return Err(Error::SupportViolation {
                    index,
                    rule: rule.name(),
                });
            }
            map.insert(index, value);
        }
        Ok(CoeffSeq { entries: map, rule })
    }

    pub fn empty(rule: SupportRule) -> Self {
        CoeffSeq {
            entries: BTreeMap::new(),
            rule,
        }
    }

    /// The delta sequence at index 1.
    pub fn delta_one(rule: SupportRule) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(1, ExactRational::one());
        CoeffSeq { entries, rule }
    }

    pub fn rule(&self) -> SupportRule {
        self.rule
    }

    pub fn get(&self, index: u64) -> ExactRational {
        self.entries.get(&index).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExactRational)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn max_support(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reinterprets root entries `(t, v)` as entries `(t^s, v)`; requires a
    /// squarefree-supported input so the result obeys the s-th-power rule.
    pub fn lift_to_sth_powers(&self, s: u32) -> Result<CoeffSeq, Error> {
        let lifted = self
            .entries
            .iter()
            .map(|(t, v)| (t.checked_pow(s).expect("lifted index fits u64"), v.clone()));
        CoeffSeq::new(lifted, SupportRule::SthPowersOfSquarefree(s))
    }

    /// Serializes as a JSON array of `[index, "numerator", "denominator"]`
    /// triples, sorted by index. Numerator and denominator are decimal
    /// strings so coefficient values never hit JSON number limits.
    pub fn to_json(&self) -> String {
        let triples: Vec<(u64, String, String)> = self
            .entries
            .iter()
            .map(|(k, v)| (*k, v.numer().to_string(), v.denom().to_string()))
            .collect();
        serde_json::to_string(&triples).expect("serializing triples cannot fail")
    }

    /// Parses the format produced by [`CoeffSeq::to_json`].
    pub fn from_json(text: &str, rule: SupportRule) -> Result<Self, Error> {
        let triples: Vec<(u64, String, String)> = serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("coefficient JSON: {e}")))?;
        let mut entries = Vec::with_capacity(triples.len());
        for (index, num, den) in triples {
            let num: BigInt = num
                .parse()
                .map_err(|_| Error::Malformed(format!("numerator {num:?}")))?;
            let den: BigInt = den
                .parse()
                .map_err(|_| Error::Malformed(format!("denominator {den:?}")))?;
            if den.is_zero() {
                return Err(Error::Malformed("zero denominator".into()));
            }
            if entries.iter().any(|(seen, _)| *seen == index) {
                return Err(Error::Malformed(format!("duplicate index {index}")));
            }
            entries.push((index, ExactRational::new(num, den)));
        }
        CoeffSeq::new(entries, rule)
    }
}

/// `f(k) = sum over d|k of d^s mu(d) a(d^s)` (the recursion defining the
/// first-variable coefficients).
pub fn f_from_a(a: &CoeffSeq, s: u32, k: u64) -> ExactRational {
    let mut acc = ExactRational::zero();
    for d in arith::divisors(&PosInt::from_u64(k)) {
        let d64 = d.to_u64().expect("divisor of a u64");
        let mu = arith::mobius(&d);
        if mu == 0 {
            continue;
        }
        let ds = match d64.checked_pow(s) {
            Some(ds) => ds,
            None => continue, // index beyond any finite support we can hold
        };
        let coeff = a.get(ds);
        if coeff.is_zero() {
            continue;
        }
        acc += coeff * ExactRational::from(BigInt::from(mu) * BigInt::from(ds));
    }
    acc
}

/// Roots of the s-th-power support: entries of `a` at `t^s`, keyed by `t`.
/// Entries at indices that are not s-th powers do not participate (the
/// inversion formulas only ever read s-th-power positions).
fn root_view(a: &CoeffSeq, s: u32) -> BTreeMap<u64, ExactRational> {
    a.entries
        .iter()
        .filter_map(|(idx, v)| sth_root_exact(*idx, s).map(|t| (t, v.clone())))
        .collect()
}

fn divisor_closure(roots: &BTreeMap<u64, ExactRational>) -> Vec<u64> {
    let mut out: Vec<u64> = roots
        .keys()
        .flat_map(|t| arith::divisors(&PosInt::from_u64(*t)))
        .map(|d| d.to_u64().expect("divisor of a u64"))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Hardy-Wright forward step: `b(k^s) = sum over n of mu(n) a(n^s k^s)`,
/// with `b` zero away from s-th powers.
pub fn b_from_a(a: &CoeffSeq, s: u32) -> CoeffSeq {
    let roots = root_view(a, s);
    let mut out = Vec::new();
    for c in divisor_closure(&roots) {
        let mut acc = ExactRational::zero();
        for (t, v) in &roots {
            if t % c == 0 {
                let mu = arith::mobius(&PosInt::from_u64(t / c));
                if mu != 0 {
                    acc += v * &ExactRational::from(BigInt::from(mu));
                }
            }
        }
        if !acc.is_zero() {
            out.push((c.checked_pow(s).expect("index fits u64"), acc));
        }
    }
    CoeffSeq::new(out, SupportRule::Any).expect("positive indices")
}

/// Hardy-Wright inverse step: `a(k^s) = sum over n of b(n^s k^s)`.
pub fn a_from_b(b: &CoeffSeq, s: u32) -> CoeffSeq {
    let roots = root_view(b, s);
    let mut out = Vec::new();
    for c in divisor_closure(&roots) {
        let mut acc = ExactRational::zero();
        for (t, v) in &roots {
            if t % c == 0 {
                acc += v;
            }
        }
        if !acc.is_zero() {
            out.push((c.checked_pow(s).expect("index fits u64"), acc));
        }
    }
    CoeffSeq::new(out, SupportRule::Any).expect("positive indices")
}

/// Which variable of `c_k^(s)(n)` the series ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// Coefficients pair with `c_k^(s)(n^s)`.
    First,
    /// Coefficients pair with `c_n^(s)(k^s)`.
    Second,
}

/// The two readings of `xi_{n*}(k)` in the second-variable series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiSemantics {
    /// `xi_{n*}(k)` contributes 1 whenever `n* | k` (the reading that makes
    /// the first/second-variable equivalence exact).
    Indicator,
    /// `xi_{n*}(k)` contributes the weight `n*` itself.
    Weighted,
}

impl XiSemantics {
    pub fn name(&self) -> &'static str {
        match self {
            XiSemantics::Indicator => "indicator",
            XiSemantics::Weighted => "weighted",
        }
    }
}

/// A coefficient sequence together with everything needed to evaluate its
/// series: the power `s`, the variable convention, and the `xi` reading.
#[derive(Debug, Clone)]
pub struct ExpansionSpec {
    pub s: u32,
    pub coeffs: CoeffSeq,
    pub variable: Variable,
    pub xi_semantics: XiSemantics,
}

impl ExpansionSpec {
    pub fn first(coeffs: CoeffSeq, s: u32) -> Self {
        ExpansionSpec {
            s,
            coeffs,
            variable: Variable::First,
            xi_semantics: XiSemantics::Indicator,
        }
    }

    pub fn second(coeffs: CoeffSeq, s: u32, xi_semantics: XiSemantics) -> Self {
        ExpansionSpec {
            s,
            coeffs,
            variable: Variable::Second,
            xi_semantics,
        }
    }
}

/// `sum over k <= K of a(k) c_k^(s)(n^s)`; exact whenever `K` covers the
/// support of `a`.
pub fn eval_first(spec: &ExpansionSpec, n: u64, k_bound: u64) -> ExactRational {
    assert_eq!(spec.variable, Variable::First, "spec must be first-variable");
    let n_pow = PosInt::from_u64(n).pow(spec.s);
    let mut acc = ExactRational::zero();
    for (k, coeff) in spec.coeffs.iter() {
        if k > k_bound {
            break;
        }
        let c = cr::cr_mobius(&CrQuery::new(PosInt::from_u64(k), n_pow.clone(), spec.s));
        acc += coeff * &ExactRational::from(c);
    }
    acc
}

/// `mu(core n)/(n*)^s * sum over k <= K, n* | k of xi * b(k/n*) c_n^(s)(k^s)`,
/// with `xi` read per the requested semantics.
pub fn eval_second(spec: &ExpansionSpec, n: u64, k_bound: u64) -> ExactRational {
    assert_eq!(
        spec.variable,
        Variable::Second,
        "spec must be second-variable"
    );
    let n_pos = PosInt::from_u64(n);
    let n_star = arith::star(&n_pos).to_u64().expect("star of a u64");
    let mu_core = arith::mobius(&arith::core(&n_pos));
    let mut inner = ExactRational::zero();
    for (j, coeff) in spec.coeffs.iter() {
        let k = match j.checked_mul(n_star) {
            Some(k) if k <= k_bound => k,
            _ => continue,
        };
        let k_pow = PosInt::from_u64(k).pow(spec.s);
        let c = cr::cr_mobius(&CrQuery::new(n_pos.clone(), k_pow, spec.s));
        inner += coeff * &ExactRational::from(c);
    }
    let xi_weight = match spec.xi_semantics {
        XiSemantics::Indicator => BigInt::one(),
        XiSemantics::Weighted => BigInt::from(n_star),
    };
    let star_pow = BigInt::from(BigUint::from(n_star).pow(spec.s));
    inner * ExactRational::new(BigInt::from(mu_core) * xi_weight, star_pow)
}

/// First-variable coefficients to second-variable coefficients:
/// `b(m) = mu(m) a(m)`. Requires `a` to vanish off squarefree indices.
pub fn transform_first_to_second(a: &CoeffSeq) -> Result<CoeffSeq, Error> {
    let mut out = Vec::with_capacity(a.len());
    for (m, v) in a.iter() {
        let mu = arith::mobius(&PosInt::from_u64(m));
        if mu == 0 {
            return Err(Error::SupportViolation {
                index: m,
                rule: SupportRule::SquarefreeOnly.name(),
            });
        }
        out.push((m, v * &ExactRational::from(BigInt::from(mu))));
    }
    CoeffSeq::new(out, SupportRule::SquarefreeOnly)
}

/// Second-variable coefficients back to first-variable coefficients by
/// aggregating over each core class `H(k) = { m : core(m) = k }`:
/// `alpha(m) = b(m) mu(core m) / (m*)^s` and `a(k) = sum alpha(m) (m*)^s`.
pub fn transform_second_to_first(b: &CoeffSeq, s: u32) -> CoeffSeq {
    let mut grouped: BTreeMap<u64, ExactRational> = BTreeMap::new();
    for (m, v) in b.iter() {
        let m_pos = PosInt::from_u64(m);
        let k = arith::core(&m_pos).to_u64().expect("core of a u64");
        let mu_core = arith::mobius(&PosInt::from_u64(k));
        let star_pow = BigInt::from(arith::star(&m_pos).pow(s).into_biguint());
        let alpha = v * &ExactRational::new(BigInt::from(mu_core), star_pow.clone());
        let entry = grouped.entry(k).or_default();
        *entry += alpha * ExactRational::from(star_pow);
    }
    CoeffSeq::new(grouped, SupportRule::SquarefreeOnly).expect("cores are squarefree")
}

/// A random squarefree-supported sequence: up to `max_len` entries at
/// squarefree indices in `[1, max_index]`, with numerators in
/// `[-max_num, max_num] \ {0}` and denominators in `[1, max_den]`.
pub fn random_squarefree_seq(
    rng: &mut impl Rng,
    max_index: u64,
    max_len: usize,
    max_num: i64,
    max_den: i64,
) -> CoeffSeq {
    let len = rng.random_range(1..=max_len);
    let mut entries = Vec::with_capacity(len);
    for _ in 0..len {
        let index = loop {
            let candidate = rng.random_range(1..=max_index);
            if arith::is_squarefree(&PosInt::from_u64(candidate)) {
                break candidate;
            }
        };
        let num = loop {
            let v = rng.random_range(-max_num..=max_num);
            if v != 0 {
                break v;
            }
        };
        let den = rng.random_range(1..=max_den);
        entries.push((
            index,
            ExactRational::new(BigInt::from(num), BigInt::from(den)),
        ));
    }
    CoeffSeq::new(entries, SupportRule::SquarefreeOnly).expect("squarefree by construction")
}

/// One disagreement found while adjudicating the `xi` semantics.
#[derive(Debug, Clone)]
pub struct XiFailure {
    pub semantics: XiSemantics,
    pub trial: usize,
    pub s: u32,
    pub n: u64,
    pub first_value: ExactRational,
    pub second_value: ExactRational,
}

/// Outcome of running both `xi` readings against the first-variable series.
#[derive(Debug, Clone)]
pub struct XiAdjudication {
    pub winner: Option<XiSemantics>,
    pub indicator_failures: u64,
    pub weighted_failures: u64,
    pub sample_failure: Option<XiFailure>,
    pub cases: u64,
}

/// Runs both `xi` semantics on seeded random squarefree-supported sequences,
/// comparing the second-variable series against the first-variable series
/// pointwise. The reading with zero disagreements wins; the adjudication is
/// decisive only if exactly one reading survives.
pub fn adjudicate_xi(
    trials: usize,
    max_index: u64,
    n_max: u64,
    s_values: &[u32],
    seed: u64,
) -> XiAdjudication {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut indicator_failures = 0u64;
    let mut weighted_failures = 0u64;
    let mut sample_failure = None;
    let mut cases = 0u64;
    for trial in 0..trials {
        let a = random_squarefree_seq(&mut rng, max_index, 6, 100, 100);
        let b = transform_first_to_second(&a).expect("squarefree-supported");
        for &s in s_values {
            let first_spec = ExpansionSpec::first(a.clone(), s);
            let k_cover = a.max_support().unwrap_or(1);
            for n in 1..=n_max {
                let f = eval_first(&first_spec, n, k_cover);
                let n_star = arith::star(&PosInt::from_u64(n))
                    .to_u64()
                    .expect("star of a u64");
                let k_cover_second = n_star * b.max_support().unwrap_or(1);
                for semantics in [XiSemantics::Indicator, XiSemantics::Weighted] {
                    cases += 1;
                    let spec = ExpansionSpec::second(b.clone(), s, semantics);
                    let g = eval_second(&spec, n, k_cover_second);
                    if f != g {
                        match semantics {
                            XiSemantics::Indicator => indicator_failures += 1,
                            XiSemantics::Weighted => weighted_failures += 1,
                        }
                        if sample_failure.is_none() {
                            sample_failure = Some(XiFailure {
                                semantics,
                                trial,
                                s,
                                n,
                                first_value: f.clone(),
                                second_value: g,
                            });
                        }
                    }
                }
            }
        }
    }
    let winner = match (indicator_failures, weighted_failures) {
        (0, w) if w > 0 => Some(XiSemantics::Indicator),
        (i, 0) if i > 0 => Some(XiSemantics::Weighted),
        _ => None,
    };
    XiAdjudication {
        winner,
        indicator_failures,
        weighted_failures,
        sample_failure,
        cases,
    }
}
