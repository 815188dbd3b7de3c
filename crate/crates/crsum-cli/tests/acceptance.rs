//! Acceptance suite: one test per release criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them on success).
//!
//! Every tolerance is pinned here, in code; nothing is deferred to later
//! calibration.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crsum::arith::{self, PosInt};
use crsum::cr::{self, CrQuery};
use crsum::expansion::{self, ExpansionSpec, XiSemantics};
use crsum::klee;
use crsum::oracles::{self, OracleConfig};
use crsum::verify::{sweep, IdentityId};

fn conclude(criterion: u32, description: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance criterion {criterion} ({description}): PASS");
    } else {
        println!(
            "acceptance criterion {criterion} ({description}): FAIL with {} issue(s)",
            failures.len()
        );
        for failure in failures.iter().take(10) {
            println!("  {failure}");
        }
        panic!(
            "acceptance criterion {criterion} failed: {}",
            failures.first().unwrap()
        );
    }
}

#[test]
fn criterion_1_route_agreement() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for s in 1..=3u32 {
        for k in 1..=200u64 {
            for n in 1..=200u64 {
                let q = CrQuery::from_u64(k, n, s);
                let mobius = cr::cr_mobius(&q);
                let multiplicative = cr::cr_multiplicative(&q);
                if mobius != multiplicative {
                    failures.push(format!(
                        "k={k} n={n} s={s}: mobius={mobius} multiplicative={multiplicative}"
                    ));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs() >= 60 {
        failures.push(format!("sweep took {elapsed:?}, budget is 60 s"));
    }
    conclude(
        1,
        &format!("route agreement on [1,200]^2 x s in {{1,2,3}} in {elapsed:.2?}"),
        failures,
    );
}

#[test]
fn criterion_2_oracle_agreement() {
    let cfg = OracleConfig {
        precision: 128,
        rounding_tolerance: 1e-6,
    };
    let mut failures = Vec::new();
    for s in 1..=2u32 {
        for k in 1..=60u64 {
            for n in 1..=60u64 {
                let q = CrQuery::from_u64(k, n, s);
                match oracles::cr_direct(&q, &cfg) {
                    Ok((value, _residual)) => {
                        let reference = cr::cr_mobius(&q);
                        if value != reference {
                            failures.push(format!(
                                "k={k} n={n} s={s}: direct={value} mobius={reference}"
                            ));
                        }
                    }
                    Err(err) => failures.push(format!("k={k} n={n} s={s}: {err}")),
                }
            }
        }
    }
    conclude(
        2,
        "direct exponential sum rounds to the Mobius route on [1,60]^2 x s in {1,2}, residual < 1e-6",
        failures,
    );
}

#[test]
fn criterion_3_classical_reduction() {
    let mut failures = Vec::new();
    for k in 1..=300u64 {
        let kp = PosInt::from_u64(k);
        for n in 1..=300u64 {
            let np = PosInt::from_u64(n);
            match oracles::classical_ramanujan_naive(&kp, &np) {
                Ok(classical) => {
                    let reduced = cr::cr_mobius(&CrQuery::from_u64(k, n, 1));
                    if classical != reduced {
                        failures
                            .push(format!("k={k} n={n}: classical={classical} s1={reduced}"));
                    }
                }
                Err(err) => failures.push(format!("k={k} n={n}: {err}")),
            }
        }
    }
    conclude(3, "s = 1 matches the naive classical Ramanujan sum on [1,300]^2", failures);
}

#[test]
fn criterion_4_identity_suite() {
    let mut failures = Vec::new();
    for id in [
        IdentityId::MultInN,
        IdentityId::TwistedSum,
        IdentityId::Vanishing,
        IdentityId::CoreShift,
        IdentityId::Symmetry,
        IdentityId::Reciprocity,
    ] {
        let report = sweep(id, &id.default_grid(), 0);
        if report.cases_checked == 0 {
            failures.push(format!("{}: empty sweep", id.name()));
        }
        for failure in &report.failures {
            failures.push(format!(
                "{}: k={} m={:?} n={} s={}: {} != {}",
                id.name(),
                failure.point.k,
                failure.point.m,
                failure.point.n,
                failure.point.s,
                failure.lhs,
                failure.rhs
            ));
        }
    }
    conclude(
        4,
        "twisted multiplicativity, twisted sum, vanishing, core shift, symmetry, reciprocity (exact)",
        failures,
    );
}

#[test]
fn criterion_5_hoelder_audit() {
    let mut failures = Vec::new();

    // the corrected quotient form agrees with the Mobius route everywhere
    for s in 1..=3u32 {
        for k in 1..=200u64 {
            for n in 1..=200u64 {
                let q = CrQuery::from_u64(k, n, s);
                match cr::cr_hoelder(&q, false) {
                    Ok(value) => {
                        if value != cr::cr_mobius(&q) {
                            failures.push(format!("corrected form differs at k={k} n={n} s={s}"));
                        }
                    }
                    Err(err) => failures.push(format!("corrected form error at k={k} n={n} s={s}: {err}")),
                }
            }
        }
    }

    // the literal form is refuted at (2, 4, 2) specifically
    let q = CrQuery::from_u64(2, 4, 2);
    match cr::cr_hoelder(&q, true) {
        Ok(literal) => {
            if literal == cr::cr_mobius(&q) {
                failures.push("literal form unexpectedly agrees at (2,4,2)".into());
            }
            if literal != BigInt::from(-4) {
                failures.push(format!("literal form at (2,4,2) gave {literal}, expected -4"));
            }
        }
        Err(err) => failures.push(format!("literal form error at (2,4,2): {err}")),
    }

    // and the audit report lists counterexamples, (2,4) among them
    let audit = sweep(
        IdentityId::HoelderLiteralAudit,
        &IdentityId::HoelderLiteralAudit.default_grid(),
        0,
    );
    if audit.failures.is_empty() {
        failures.push("audit sweep found no counterexamples".into());
    }
    if !audit
        .failures
        .iter()
        .any(|f| f.point.k == 2 && f.point.n == 4 && f.point.s == 2)
    {
        failures.push("audit report does not list (k=2, n=4, s=2)".into());
    }

    conclude(
        5,
        "corrected Hoelder form agrees on [1,200]^2 x {1,2,3}; literal form refuted at (2,4,2)",
        failures,
    );
}

const TRIALS: usize = 200;
const SEED: u64 = 0xC0FFEE;

fn random_sequences() -> Vec<expansion::CoeffSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..TRIALS)
        .map(|_| expansion::random_squarefree_seq(&mut rng, 50, 6, 100, 100))
        .collect()
}

#[test]
fn criterion_6_expansion_exactness() {
    let mut failures = Vec::new();
    let squarefree_k: Vec<u64> = (1..=100)
        .filter(|k| arith::is_squarefree(&PosInt::from_u64(*k)))
        .collect();

    for (i, roots) in random_sequences().iter().enumerate() {
        for s in 1..=2u32 {
            // the first-variable identity mu(k) f(k) = sum b(n^s) c_k^(s)(n^s)
            let a = roots.lift_to_sth_powers(s).expect("squarefree roots");
            let b = expansion::b_from_a(&a, s);
            for &k in &squarefree_k {
                let kp = PosInt::from_u64(k);
                let lhs = expansion::f_from_a(&a, s, k)
                    * BigRational::from(BigInt::from(arith::mobius(&kp)));
                let mut rhs = BigRational::from(BigInt::from(0));
                for (idx, coeff) in b.iter() {
                    let c = cr::cr_mobius(&CrQuery::new(kp.clone(), PosInt::from_u64(idx), s));
                    rhs += coeff * &BigRational::from(c);
                }
                if lhs != rhs {
                    failures.push(format!("seq {i} s={s} k={k}: twisted f identity broke"));
                }
            }

            // Hardy-Wright round trips, both compositions
            if expansion::a_from_b(&expansion::b_from_a(&a, s), s) != a {
                failures.push(format!("seq {i} s={s}: a_from_b(b_from_a(a)) != a"));
            }
            if expansion::b_from_a(&expansion::a_from_b(&a, s), s) != a {
                failures.push(format!("seq {i} s={s}: b_from_a(a_from_b(a)) != a"));
            }

            // forward and backward transforms against direct evaluation
            let b2 = match expansion::transform_first_to_second(roots) {
                Ok(b2) => b2,
                Err(err) => {
                    failures.push(format!("seq {i}: {err}"));
                    continue;
                }
            };
            if expansion::transform_second_to_first(&b2, s) != *roots {
                failures.push(format!("seq {i} s={s}: transform round trip broke"));
            }
            let cover = roots.max_support().unwrap_or(1);
            let first_spec = ExpansionSpec::first(roots.clone(), s);
            let second_spec = ExpansionSpec::second(b2, s, XiSemantics::Indicator);
            for n in 1..=50u64 {
                let first = expansion::eval_first(&first_spec, n, cover);
                let n_star = arith::star(&PosInt::from_u64(n)).to_u64().expect("u64");
                let second = expansion::eval_second(&second_spec, n, n_star * cover);
                if first != second {
                    failures.push(format!("seq {i} s={s} n={n}: series values differ"));
                }
            }
        }
    }
    conclude(
        6,
        &format!("{TRIALS} random sequences: twisted f identity, Hardy-Wright, and series transforms all exactly 0 discrepancy"),
        failures,
    );
}

#[test]
fn criterion_7_xi_adjudication_is_decisive() {
    let adjudication = expansion::adjudicate_xi(TRIALS, 50, 50, &[1, 2], SEED);
    let mut failures = Vec::new();
    match adjudication.winner {
        Some(XiSemantics::Indicator) => {}
        Some(XiSemantics::Weighted) => failures.push("weighted semantics won".into()),
        None => failures.push(format!(
            "not decisive: indicator {} failures, weighted {} failures",
            adjudication.indicator_failures, adjudication.weighted_failures
        )),
    }
    if adjudication.indicator_failures != 0 {
        failures.push(format!(
            "indicator semantics failed {} case(s)",
            adjudication.indicator_failures
        ));
    }
    if adjudication.weighted_failures == 0 {
        failures.push("weighted semantics never failed; adjudication is vacuous".into());
    }
    if let Some(sample) = &adjudication.sample_failure {
        println!(
            "xi adjudication: chose indicator; weighted first fails at trial {} s={} n={} (first = {}, weighted second = {})",
            sample.trial, sample.s, sample.n, sample.first_value, sample.second_value
        );
    }
    conclude(
        7,
        "exactly one xi reading (indicator) passes; weighted refuted",
        failures,
    );
}

#[test]
fn criterion_8_klee_convergence() {
    let mut failures = Vec::new();

    let headline = klee::klee_series_eval(1, 1, 100_000, 128);
    if !headline.target.to_decimal_string(8).starts_with("1.644934") {
        failures.push(format!(
            "zeta(2) target off: {}",
            headline.target.to_decimal_string(12)
        ));
    }
    if !headline.final_abs_error.abs_lt_f64(1e-3) {
        failures.push(format!(
            "s=1 n=1 K=1e5: |S_K - zeta(2)| = {} >= 1e-3",
            headline.final_abs_error.to_decimal_string(12)
        ));
    }
    // tail bound |S_K - zeta(2)| <= 2/K at every recorded decade
    for (k, _, err) in &headline.checkpoints {
        if *k >= 10 && !err.abs_lt_f64(2.0 / *k as f64) {
            failures.push(format!("s=1 n=1: error at checkpoint {k} exceeds 2/K"));
        }
    }

    let quartic = klee::klee_series_eval(1, 2, 10_000, 128);
    if !quartic.target.to_decimal_string(8).starts_with("1.082323") {
        failures.push(format!(
            "zeta(4) target off: {}",
            quartic.target.to_decimal_string(12)
        ));
    }
    if !quartic.final_abs_error.abs_lt_f64(1e-6) {
        failures.push(format!(
            "s=2 n=1 K=1e4: |S_K - zeta(4)| = {} >= 1e-6",
            quartic.final_abs_error.to_decimal_string(12)
        ));
    }

    for s in 1..=2u32 {
        for n in 1..=10u64 {
            let report = klee::klee_series_eval(n, s, 100_000, 128);
            if !report.final_abs_error.abs_lt_f64(1e-2) {
                failures.push(format!(
                    "s={s} n={n} K=1e5: error {} >= 1e-2",
                    report.final_abs_error.to_decimal_string(12)
                ));
            }
        }
    }

    conclude(
        8,
        "Klee series within 1e-3 of zeta(2) and 1e-6 of zeta(4) at n=1; within 1e-2 of Phi_s(n) zeta(2s)/n for n <= 10",
        failures,
    );
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let output = Command::new(env!("CARGO_BIN_EXE_crsum"))
        .args(args)
        .env_remove("CRSUM_PRECISION")
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "cli {:?} failed: {}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
    output.stdout
}

#[test]
fn criterion_9_report_determinism() {
    let mut failures = Vec::new();

    // verify reports: identical across repeated runs and jobs settings
    let verify_args = |jobs: &'static str| {
        vec![
            "verify",
            "--identity",
            "reciprocity",
            "--kmax",
            "40",
            "--nmax",
            "40",
            "--s",
            "1,2",
            "--format",
            "json",
            "--jobs",
            jobs,
        ]
    };
    let baseline = run_cli(&verify_args("1"));
    for jobs in ["1", "2", "4", "0"] {
        if run_cli(&verify_args(jobs)) != baseline {
            failures.push(format!("verify report differs with --jobs {jobs}"));
        }
    }

    // audit report: stable bytes as well
    let audit_args = [
        "verify",
        "--identity",
        "hoelder-literal-audit",
        "--format",
        "json",
    ];
    if run_cli(&audit_args) != run_cli(&audit_args) {
        failures.push("audit report differs across runs".into());
    }

    // klee reports
    let klee_args = [
        "klee", "--variant", "cr", "--n", "3", "--s", "1", "--K", "2000",
    ];
    if run_cli(&klee_args) != run_cli(&klee_args) {
        failures.push("klee report differs across runs".into());
    }

    // expand documents
    let input = std::env::temp_dir().join(format!("crsum-acceptance-{}.json", std::process::id()));
    std::fs::write(&input, r#"[[1,"1","1"],[2,"-1","3"],[15,"7","2"]]"#).unwrap();
    let expand_args = [
        "expand",
        "--input",
        input.to_str().unwrap(),
        "--direction",
        "roundtrip",
        "--s",
        "2",
    ];
    if run_cli(&expand_args) != run_cli(&expand_args) {
        failures.push("expand document differs across runs".into());
    }
    let _ = std::fs::remove_file(input);

    conclude(9, "reports byte-identical across runs and --jobs settings", failures);
}
