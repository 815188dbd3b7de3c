//! The worked Klee-function series: `Phi_s(n) zeta(2s) / n` expanded against
//! `c_k^(s)(n)` with coefficients `mu(k) / J_2s(k)`, its second-variable
//! counterpart, and the coefficient identity both rest on.
//!
//! Coefficients stay exact rationals; only the running partial sums and the
//! zeta target live in fixed-point [`HighPrecReal`] arithmetic, where
//! addition is exact, so reports are bit-identical however the loop is
//! scheduled.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{self, PosInt};
use crate::cr::{self, CrQuery};
use crate::rational::ExactRational;
use crate::real::HighPrecReal;

/// Truncated-series evaluation record: partial sums at every checkpoint
/// (powers of ten and the final `K`), the target value, and the final error.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub s: u32,
    pub n: u64,
    pub k_max: u64,
    pub precision: u32,
    pub target: HighPrecReal,
    /// `(k, partial_sum, |partial_sum - target|)` per checkpoint.
    pub checkpoints: Vec<(u64, HighPrecReal, HighPrecReal)>,
    pub final_abs_error: HighPrecReal,
}

impl SeriesReport {
    /// Decimal digits used when rendering report values.
    pub fn display_digits(&self) -> u32 {
        // ~ precision * log10(2), capped for readability
        ((self.precision as u64 * 30103 / 100000) as u32).min(60)
    }

    /// One-file serialization: a `#`-prefixed JSON header line followed by
    /// plot-ready CSV rows.
    pub fn to_csv(&self) -> String {
        let digits = self.display_digits();
        let mut out = String::new();
        out.push_str(&format!(
            "# {{\"n\":{},\"s\":{},\"K\":{},\"target\":\"{}\",\"precision\":{}}}\n",
            self.n,
            self.s,
            self.k_max,
            self.target.to_decimal_string(digits),
            self.precision
        ));
        out.push_str("k_checkpoint,partial_sum,abs_error\n");
        for (k, partial, err) in &self.checkpoints {
            out.push_str(&format!(
                "{},{},{}\n",
                k,
                partial.to_decimal_string(digits),
                err.to_decimal_string(digits)
            ));
        }
        out
    }
}

/// Pochhammer product `m (m+1) ... (m + r - 1)`.
fn rising(m: u32, r: u32) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= BigUint::from(m + i);
    }
    acc
}

/// `zeta(2s)` by direct partial summation with an Euler-Maclaurin tail
/// estimate whose remainder is provably below `2^-(precision/2 + 8)`.
///
/// Closed forms (`pi^2/6`, `pi^4/90`) are used only as cross-checks in
/// tests, never here.
pub fn zeta_even_arg(s: u32, precision: u32) -> HighPrecReal {
    assert!(s >= 1, "s must be >= 1");
    let m = 2 * s;
    let wprec = precision + 32;

    // Remainder after the B_6 term is bounded by
    // (m)_7 / 1209600 * N^-(m+7); pick N so that bound < 2^-(precision/2+8).
    let log2_target = precision as f64 / 2.0 + 8.0;
    let rising7 = rising(m, 7)
        .to_string()
        .parse::<f64>()
        .expect("fits in f64 for desk-scale m");
    let n_cut = ((rising7 / 1_209_600.0).ln() / std::f64::consts::LN_2 + log2_target)
        / (m as f64 + 7.0);
    let n_cut = (2f64.powf(n_cut).ceil() as u64).max(16);

    let mut acc = HighPrecReal::zero(wprec);
    for n in 1..n_cut {
        let nm = BigInt::from(BigUint::from(n).pow(m));
        acc = acc.add(&HighPrecReal::from_rational(
            &ExactRational::new(BigInt::one(), nm),
            wprec,
        ));
    }

    // Tail from N = n_cut:
    //   N^(1-m)/(m-1) + N^-m/2 + m N^-(m+1)/12
    //   - (m)_3 N^-(m+3)/720 + (m)_5 N^-(m+5)/30240
    let n_big = BigUint::from(n_cut);
    let term = |num: BigInt, den: BigInt| {
        HighPrecReal::from_rational(&ExactRational::new(num, den), wprec)
    };
    let pow = |e: u32| BigInt::from(n_big.pow(e));
    acc = acc.add(&term(BigInt::one(), pow(m - 1) * BigInt::from(m - 1)));
    acc = acc.add(&term(BigInt::one(), pow(m) * BigInt::from(2u32)));
    acc = acc.add(&term(BigInt::from(m), pow(m + 1) * BigInt::from(12u32)));
    acc = acc.sub(&term(
        BigInt::from(rising(m, 3)),
        pow(m + 3) * BigInt::from(720u32),
    ));
    acc = acc.add(&term(
        BigInt::from(rising(m, 5)),
        pow(m + 5) * BigInt::from(30240u32),
    ));

    acc.with_precision(precision)
}

/// The series coefficient `mu(k) / J_2s(k)`; zero off squarefree `k`.
pub fn klee_coefficient(k: u64, s: u32) -> ExactRational {
    let kp = PosInt::from_u64(k);
    let f = arith::factorize(&kp);
    if f.pairs().iter().any(|(_, e)| *e > 1) {
        return ExactRational::zero();
    }
    let mu: i8 = if f.pairs().len().is_multiple_of(2) { 1 } else { -1 };
    let jordan = arith::jordan_totient(2 * s, &kp);
    ExactRational::new(BigInt::from(mu), BigInt::from(jordan.into_biguint()))
}

/// Compares the truncated sum `sum over d <= D of mu(kd)/(kd)^2s` (lhs)
/// against its closed form `mu(k) / (J_2s(k) zeta(2s))` (rhs). Both sides
/// vanish off squarefree `k`.
pub fn coefficient_identity_check(
    k: u64,
    s: u32,
    d_max: u64,
    precision: u32,
) -> (HighPrecReal, HighPrecReal) {
    let kp = PosInt::from_u64(k);
    if !arith::is_squarefree(&kp) {
        return (HighPrecReal::zero(precision), HighPrecReal::zero(precision));
    }
    let mut lhs = HighPrecReal::zero(precision);
    for d in 1..=d_max {
        let m = k.checked_mul(d).expect("k*D at desk scale");
        let mu = arith::mobius(&PosInt::from_u64(m));
        if mu == 0 {
            continue;
        }
        let den = BigInt::from(BigUint::from(m).pow(2 * s));
        lhs = lhs.add(&HighPrecReal::from_rational(
            &ExactRational::new(BigInt::from(mu), den),
            precision,
        ));
    }
    let zeta = zeta_even_arg(s, precision);
    let rhs = HighPrecReal::from_rational(&klee_coefficient(k, s), precision).div(&zeta);
    (lhs, rhs)
}

fn checkpoints_for(k_max: u64) -> Vec<u64> {
    let mut cps = Vec::new();
    let mut c = 1u64;
    while c <= k_max {
        cps.push(c);
        match c.checked_mul(10) {
            Some(next) => c = next,
            None => break,
        }
    }
    if cps.last() != Some(&k_max) {
        cps.push(k_max);
    }
    cps
}

/// Partial sums of `sum over k <= K of mu(k)/J_2s(k) * c_k^(s)(n)` against
/// the target `Phi_s(n) zeta(2s) / n`.
pub fn klee_series_eval(n: u64, s: u32, k_max: u64, precision: u32) -> SeriesReport {
    let n_pos = PosInt::from_u64(n);
    let target = zeta_even_arg(s, precision).mul_rational(&ExactRational::new(
        BigInt::from(arith::klee_phi(s, &n_pos).into_biguint()),
        BigInt::from(n),
    ));

    let cps = checkpoints_for(k_max);
    let mut next_cp = 0usize;
    let mut checkpoints = Vec::with_capacity(cps.len());
    let mut acc = HighPrecReal::zero(precision);
    for k in 1..=k_max {
        let coeff = klee_coefficient(k, s);
        if !coeff.is_zero() {
            let c = cr::cr_mobius(&CrQuery::new(PosInt::from_u64(k), n_pos.clone(), s));
            if !c.is_zero() {
                acc = acc.add(&HighPrecReal::from_rational(
                    &(coeff * ExactRational::from(c)),
                    precision,
                ));
            }
        }
        while next_cp < cps.len() && cps[next_cp] == k {
            checkpoints.push((k, acc.clone(), acc.sub(&target).abs()));
            next_cp += 1;
        }
    }
    let final_abs_error = checkpoints
        .last()
        .map(|(_, _, e)| e.clone())
        .unwrap_or_else(|| HighPrecReal::zero(precision));
    SeriesReport {
        s,
        n,
        k_max,
        precision,
        target,
        checkpoints,
        final_abs_error,
    }
}

/// The second-variable form of the same series, evaluated through the
/// general coefficient transform (`b(j) = mu(j)^2 / J_2s(j)`) under the
/// adjudicated indicator reading of `xi`:
///
/// `mu(core n)/(n*)^s * sum over k <= K, n* | k of b(k/n*) c_n^(s)(k^s)`
///
/// The recorded target is `Phi_s(n) zeta(2s) / n`, as for the first-variable
/// report; the trajectory documents how far the second-variable series lands
/// from it.
pub fn klee_cr_prime_eval(n: u64, s: u32, k_max: u64, precision: u32) -> SeriesReport {
    let n_pos = PosInt::from_u64(n);
    let target = zeta_even_arg(s, precision).mul_rational(&ExactRational::new(
        BigInt::from(arith::klee_phi(s, &n_pos).into_biguint()),
        BigInt::from(n),
    ));

    let n_star = arith::star(&n_pos).to_u64().expect("star of a u64");
    let mu_core = arith::mobius(&arith::core(&n_pos));
    let prefactor = ExactRational::new(
        BigInt::from(mu_core),
        BigInt::from(BigUint::from(n_star).pow(s)),
    );

    let cps = checkpoints_for(k_max);
    let mut next_cp = 0usize;
    let mut checkpoints = Vec::with_capacity(cps.len());
    let mut acc = HighPrecReal::zero(precision);
    for k in 1..=k_max {
        if k % n_star == 0 {
            let j = k / n_star;
            // b(j) = mu(j)^2 / J_2s(j), the transform of mu/J_2s
            let b = {
                let jp = PosInt::from_u64(j);
                if arith::is_squarefree(&jp) {
                    ExactRational::new(
                        BigInt::one(),
                        BigInt::from(arith::jordan_totient(2 * s, &jp).into_biguint()),
                    )
                } else {
                    ExactRational::zero()
                }
            };
            if !b.is_zero() {
                let k_pow = PosInt::from_u64(k).pow(s);
                let c = cr::cr_mobius(&CrQuery::new(n_pos.clone(), k_pow, s));
                if !c.is_zero() {
                    let term = &prefactor * b * ExactRational::from(c);
                    acc = acc.add(&HighPrecReal::from_rational(&term, precision));
                }
            }
        }
        while next_cp < cps.len() && cps[next_cp] == k {
            checkpoints.push((k, acc.clone(), acc.sub(&target).abs()));
            next_cp += 1;
        }
    }
    let final_abs_error = checkpoints
        .last()
        .map(|(_, _, e)| e.clone())
        .unwrap_or_else(|| HighPrecReal::zero(precision));
    SeriesReport {
        s,
        n,
        k_max,
        precision,
        target,
        checkpoints,
        final_abs_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real;

    #[test]
    fn zeta_2_matches_pi_squared_over_six() {
        let z = zeta_even_arg(1, 192);
        assert!(z.to_decimal_string(12).starts_with("1.6449340668"));
        let pi = real::pi(192);
        let reference = pi.mul(&pi).div_u64(6);
        let err = z.sub(&reference).abs();
        assert!(err.abs_lt_f64(2f64.powi(-96)));
    }

    #[test]
    fn zeta_4_matches_pi_fourth_over_ninety() {
        let z = zeta_even_arg(2, 192);
        assert!(z.to_decimal_string(12).starts_with("1.0823232337"));
        let pi = real::pi(192);
        let reference = pi.mul(&pi).mul(&pi).mul(&pi).div_u64(90);
        let err = z.sub(&reference).abs();
        assert!(err.abs_lt_f64(2f64.powi(-96)));
    }

    #[test]
    fn zeta_precision_is_monotone() {
        let reference = {
            let pi = real::pi(320);
            pi.mul(&pi).div_u64(6)
        };
        let mut last_err: Option<HighPrecReal> = None;
        for precision in [64u32, 96, 128, 192, 256] {
            let err = zeta_even_arg(1, precision)
                .with_precision(320)
                .sub(&reference)
                .abs();
            if let Some(prev) = &last_err {
                assert!(err <= *prev, "error grew at precision {precision}");
            }
            last_err = Some(err);
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(klee_coefficient(1, 1), ExactRational::one());
        assert_eq!(
            klee_coefficient(2, 1),
            ExactRational::new(BigInt::from(-1), BigInt::from(3))
        );
        assert!(klee_coefficient(4, 1).is_zero());
        assert!(klee_coefficient(4, 2).is_zero());
    }

    #[test]
    fn coefficient_identity_at_k_1() {
        // lhs ~ 1/zeta(2) = 0.6079271018...
        let (lhs, rhs) = coefficient_identity_check(1, 1, 100_000, 128);
        assert!(lhs.to_decimal_string(6).starts_with("0.6079"));
        assert!(lhs.sub(&rhs).abs().abs_lt_f64(1e-4));
    }

    #[test]
    fn coefficient_identity_small_squarefree_k() {
        let d_max = 10_000u64;
        let bound = 10.0 / d_max as f64;
        for s in 1..=2u32 {
            for k in [1u64, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 20] {
                if !arith::is_squarefree(&PosInt::from_u64(k)) {
                    continue;
                }
                let (lhs, rhs) = coefficient_identity_check(k, s, d_max, 128);
                assert!(
                    lhs.sub(&rhs).abs().abs_lt_f64(bound),
                    "k={k} s={s}: lhs={} rhs={}",
                    lhs.to_decimal_string(12),
                    rhs.to_decimal_string(12)
                );
            }
        }
    }

    #[test]
    fn coefficient_identity_vanishes_off_squarefree() {
        let (lhs, rhs) = coefficient_identity_check(4, 1, 1000, 128);
        assert!(lhs.is_zero());
        assert!(rhs.is_zero());
    }

    #[test]
    fn series_first_checkpoint_is_one() {
        for s in 1..=2u32 {
            for n in [1u64, 3, 8] {
                let report = klee_series_eval(n, s, 50, 128);
                let (k, partial, _) = &report.checkpoints[0];
                assert_eq!(*k, 1);
                assert_eq!(partial, &HighPrecReal::one(128), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn series_converges_to_zeta_2_at_n_1() {
        let report = klee_series_eval(1, 1, 1000, 128);
        // |S_K - zeta(2)| <= 2/K
        assert!(report.final_abs_error.abs_lt_f64(2.0 / 1000.0));
        for (k, _, err) in &report.checkpoints {
            if *k >= 10 {
                assert!(err.abs_lt_f64(2.0 / *k as f64), "checkpoint {k}");
            }
        }
    }

    #[test]
    fn series_tracks_target_at_n_2() {
        let report = klee_series_eval(2, 1, 2000, 128);
        assert!(report.final_abs_error.abs_lt_f64(1e-2));
        // target is Phi_1(2) zeta(2) / 2 = zeta(2)/2
        assert!(report.target.to_decimal_string(6).starts_with("0.8224"));
    }

    #[test]
    fn error_trajectory_settles_like_one_over_k() {
        for n in [1u64, 2, 5, 9] {
            let report = klee_series_eval(n, 1, 2000, 128);
            let decades: Vec<&(u64, HighPrecReal, HighPrecReal)> = report
                .checkpoints
                .iter()
                .filter(|(k, _, _)| *k >= 100)
                .collect();
            // eventually decreasing
            for pair in decades.windows(2) {
                assert!(pair[1].2 <= pair[0].2, "n={n}: error grew after k={}", pair[0].0);
            }
            // bounded by C/k with a generous fitted constant
            for (k, _, err) in &decades {
                assert!(err.abs_lt_f64(20.0 / *k as f64), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn cr_prime_converges_at_n_1() {
        let report = klee_cr_prime_eval(1, 1, 100_000, 128);
        assert!(report.final_abs_error.abs_lt_f64(1e-3));
        let report = klee_cr_prime_eval(1, 2, 500, 128);
        assert!(report.final_abs_error.abs_lt_f64(1e-6));
    }

    #[test]
    fn cr_prime_applies_signed_prefactor() {
        // n = 4: core = 2, star = 2, so every partial sum is
        // mu(2)/2^s = -1/2^s times the inner sum; recompute independently.
        let s = 1u32;
        let k_max = 40u64;
        let report = klee_cr_prime_eval(4, s, k_max, 128);
        let mut expected = HighPrecReal::zero(128);
        for k in (2..=k_max).step_by(2) {
            let j = k / 2;
            let jp = PosInt::from_u64(j);
            if !arith::is_squarefree(&jp) {
                continue;
            }
            let b = ExactRational::new(
                BigInt::one(),
                BigInt::from(arith::jordan_totient(2 * s, &jp).into_biguint()),
            );
            let c = cr::cr_mobius(&CrQuery::new(
                PosInt::from_u64(4),
                PosInt::from_u64(k).pow(s),
                s,
            ));
            let term = ExactRational::new(BigInt::from(-1), BigInt::from(2))
                * b
                * ExactRational::from(c);
            expected = expected.add(&HighPrecReal::from_rational(&term, 128));
        }
        let (_, last_partial, _) = report.checkpoints.last().unwrap();
        assert_eq!(last_partial, &expected);
    }

    #[test]
    fn cr_prime_zero_when_bound_misses_support() {
        // n = 6 has n* = 1, but a bound of 0 terms: use n = 4 (n* = 2) with
        // k_max = 1 so no multiple of n* is reached.
        let report = klee_cr_prime_eval(4, 1, 1, 128);
        let (_, partial, _) = report.checkpoints.last().unwrap();
        assert!(partial.is_zero());
    }

    #[test]
    fn coefficients_come_from_the_generic_transform() {
        // The series coefficients mu(k)/J_2s(k) are squarefree-supported, and
        // pushing them through the general first-to-second transform yields
        // exactly the b(j) = mu(j)^2/J_2s(j) used by the second-variable form.
        use crate::expansion::{transform_first_to_second, CoeffSeq, SupportRule};
        for s in 1..=2u32 {
            let a = CoeffSeq::new(
                (1..=30u64).map(|k| (k, klee_coefficient(k, s))),
                SupportRule::SquarefreeOnly,
            )
            .expect("mu kills non-squarefree indices");
            let b = transform_first_to_second(&a).unwrap();
            for j in 1..=30u64 {
                let jp = PosInt::from_u64(j);
                let expected = if arith::is_squarefree(&jp) {
                    ExactRational::new(
                        BigInt::one(),
                        BigInt::from(arith::jordan_totient(2 * s, &jp).into_biguint()),
                    )
                } else {
                    ExactRational::zero()
                };
                assert_eq!(b.get(j), expected, "j={j} s={s}");
            }
        }
    }

    #[test]
    fn csv_shape() {
        let report = klee_series_eval(1, 1, 100, 128);
        let csv = report.to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("# {\"n\":1,\"s\":1,\"K\":100,"));
        assert_eq!(lines.next().unwrap(), "k_checkpoint,partial_sum,abs_error");
        assert_eq!(lines.count(), 3); // k = 1, 10, 100
    }
}
