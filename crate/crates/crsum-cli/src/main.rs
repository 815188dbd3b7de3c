//! `crsum`: point evaluation, identity sweeps, coefficient-transform round
//! trips, and Klee-series convergence reports.
//!
//! Exit codes: 0 success, 1 verification failures, 2 flag or input errors,
//! 3 oracle tolerance exceeded, 4 coefficient support violation.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crsum::arith::PosInt;
use crsum::expansion::{
    self, CoeffSeq, ExpansionSpec, SupportRule, XiSemantics,
};
use crsum::klee;
use crsum::oracles::{self, OracleConfig};
use crsum::rational::{rational_abs, rational_to_string, ExactRational};
use crsum::verify::{Filters, IdentityId};
use crsum::{cr, CrQuery, Error};

#[derive(Parser)]
#[command(
    name = "crsum",
    about = "Exact Cohen-Ramanujan sums: evaluation, identity sweeps, series transforms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate c_k^(s)(n) by one of the implemented routes
    Eval(EvalArgs),
    /// Sweep one identity over a grid and write a verification report
    Verify(VerifyArgs),
    /// Transform coefficient sequences between series variables
    Expand(ExpandArgs),
    /// Klee-series convergence and coefficient-identity reports
    Klee(KleeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Mobius,
    Multiplicative,
    Hoelder,
    HoelderLiteral,
    Direct,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    /// First argument k
    #[arg(long)]
    k: String,
    /// Second argument n
    #[arg(long)]
    n: String,
    /// Power s of the generalized gcd
    #[arg(long)]
    s: u32,
    /// Evaluation route
    #[arg(long, value_enum, default_value = "mobius")]
    method: Method,
    /// Precision in bits for the direct route (overrides CRSUM_PRECISION)
    #[arg(long)]
    precision: Option<u32>,
    /// Rounding tolerance for the direct route, in (0, 0.5)
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
#[command(after_help = "Identities: mult-in-n, twisted-sum, vanishing, core-shift, symmetry, \
reciprocity, xi-divisor-sum, route-agreement, hoelder-literal-audit")]
struct VerifyArgs {
    /// Identity to sweep (see the registry below)
    #[arg(long)]
    identity: String,
    /// Upper bound for k (defaults to the identity's standard grid)
    #[arg(long)]
    kmax: Option<u64>,
    /// Upper bound for n (and m, where applicable)
    #[arg(long)]
    nmax: Option<u64>,
    /// Comma-separated list of s values
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<u32>>,
    /// Restrict the grid to squarefree k
    #[arg(long)]
    squarefree_k: bool,
    /// Restrict the grid to squarefree n
    #[arg(long)]
    squarefree_n: bool,
    /// Restrict (m, n) to coprime pairs
    #[arg(long)]
    coprime_pairs: bool,
    /// Worker threads for the sweep (0 = library default)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Include wall-clock timing in the report (makes output nondeterministic)
    #[arg(long)]
    timings: bool,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    FirstToSecond,
    SecondToFirst,
    Roundtrip,
}

#[derive(Args)]
struct ExpandArgs {
    /// Input coefficient sequence: JSON [[index, "num", "den"], ...]
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    direction: Direction,
    /// Power s used by the transforms and the comparison table
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Compare first- and second-variable series at n = 1..=nmax
    #[arg(long, default_value_t = 20)]
    nmax: u64,
    /// Write the JSON result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KleeVariant {
    Cr,
    CrPrime,
    CoeffIdentity,
}

#[derive(Args)]
struct KleeArgs {
    #[arg(long, value_enum)]
    variant: KleeVariant,
    /// Series argument n (variants cr, cr-prime)
    #[arg(long)]
    n: Option<u64>,
    /// Power s
    #[arg(long)]
    s: u32,
    /// Truncation bound K (variants cr, cr-prime)
    #[arg(long = "K")]
    k_max: Option<u64>,
    /// Coefficient index k (variant coeff-identity)
    #[arg(long)]
    k: Option<u64>,
    /// Truncation bound D (variant coeff-identity)
    #[arg(long = "D")]
    d_max: Option<u64>,
    /// Precision in bits (overrides CRSUM_PRECISION)
    #[arg(long)]
    precision: Option<u32>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Expand(args) => cmd_expand(args),
        Command::Klee(args) => cmd_klee(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ToleranceExceeded { .. } => 3,
        Error::SupportViolation { .. } => 4,
        _ => 2,
    }
}

/// Default 128-bit precision, overridable by CRSUM_PRECISION and then by an
/// explicit --precision flag.
fn resolve_precision(flag: Option<u32>) -> Result<u32, Error> {
    let bits = match flag {
        Some(bits) => bits,
        None => match std::env::var("CRSUM_PRECISION") {
            Ok(text) => text.parse::<u32>().map_err(|_| {
                Error::Malformed(format!("CRSUM_PRECISION must be an integer, got {text:?}"))
            })?,
            Err(_) => 128,
        },
    };
    if bits < 64 {
        return Err(Error::OutOfRange("precision must be at least 64 bits".into()));
    }
    Ok(bits)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, Error> {
    let k = PosInt::from_str(&args.k)?;
    let n = PosInt::from_str(&args.n)?;
    if args.s < 1 {
        return Err(Error::OutOfRange("s must be >= 1".into()));
    }
    let query = CrQuery::new(k, n, args.s);
    let (value, residual) = match args.method {
        Method::Mobius => (cr::cr_mobius(&query), None),
        Method::Multiplicative => (cr::cr_multiplicative(&query), None),
        Method::Hoelder => (cr::cr_hoelder(&query, false)?, None),
        Method::HoelderLiteral => {
            let literal = cr::cr_hoelder(&query, true)?;
            let reference = cr::cr_mobius(&query);
            if literal != reference {
                eprintln!(
                    "warning: literal Hoelder form gives {literal} but the Mobius route gives {reference}"
                );
            }
            (literal, None)
        }
        Method::Direct => {
            let mut cfg = OracleConfig {
                precision: resolve_precision(args.precision)?,
                ..OracleConfig::default()
            };
            if let Some(tolerance) = args.tolerance {
                cfg.rounding_tolerance = tolerance;
            }
            cfg.validate()?;
            let (value, residual) = oracles::cr_direct(&query, &cfg)?;
            (value, Some(residual))
        }
    };
    match args.format {
        Format::Pretty => {
            println!("{value}");
            if let Some(residual) = residual {
                println!("residual: {residual:e}");
            }
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("value".into(), serde_json::Value::String(value.to_string()));
            if let Some(residual) = residual {
                obj.insert("residual".into(), serde_json::json!(residual));
            }
            println!("{}", serde_json::Value::Object(obj));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let id = IdentityId::from_str(&args.identity)?;
    let mut grid = id.default_grid();
    if let Some(kmax) = args.kmax {
        if kmax < 1 {
            return Err(Error::OutOfRange("--kmax must be >= 1".into()));
        }
        grid.k_max = kmax;
    }
    if let Some(nmax) = args.nmax {
        if nmax < 1 {
            return Err(Error::OutOfRange("--nmax must be >= 1".into()));
        }
        grid.n_max = nmax;
    }
    if let Some(s_set) = args.s {
        if s_set.is_empty() || s_set.iter().any(|s| *s < 1) {
            return Err(Error::OutOfRange("--s needs a non-empty list of s >= 1".into()));
        }
        grid.s_set = s_set;
    }
    grid.filters = Filters {
        squarefree_k: args.squarefree_k,
        squarefree_n: args.squarefree_n,
        coprime_pairs: args.coprime_pairs,
    };

    let report = crsum::verify::sweep(id, &grid, args.jobs);
    let json = report.to_json(args.timings);

    match (&args.out, args.format) {
        (Some(path), _) => {
            emit(&Some(path.clone()), &json)?;
            print_verify_summary(&report, id);
        }
        (None, Format::Json) => println!("{json}"),
        (None, Format::Pretty) => print_verify_summary(&report, id),
    }

    let succeeded = if id.expects_failures() {
        !report.passed()
    } else {
        report.passed()
    };
    Ok(if succeeded {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_verify_summary(report: &crsum::verify::VerificationReport, id: IdentityId) {
    println!(
        "{}: {} cases checked, {} skipped, {} failure(s)",
        report.identity,
        report.cases_checked,
        report.skipped,
        report.failures.len()
    );
    for failure in report.failures.iter().take(10) {
        let m = failure
            .point
            .m
            .map(|m| format!(" m={m}"))
            .unwrap_or_default();
        println!(
            "  k={}{} n={} s={}: lhs={} rhs={}",
            failure.point.k, m, failure.point.n, failure.point.s, failure.lhs, failure.rhs
        );
    }
    if report.failures.len() > 10 {
        println!("  ... {} more", report.failures.len() - 10);
    }
    if id.expects_failures() && !report.failures.is_empty() {
        println!("audit found the expected counterexamples");
    }
}

fn load_seq(path: &PathBuf) -> Result<CoeffSeq, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    CoeffSeq::from_json(&text, SupportRule::Any)
}

struct ComparisonRow {
    n: u64,
    first: ExactRational,
    second: ExactRational,
}

/// Pointwise table of the first-variable series for `a` against the
/// second-variable series for `b` under the indicator reading.
fn comparison_table(a: &CoeffSeq, b: &CoeffSeq, s: u32, n_max: u64) -> Vec<ComparisonRow> {
    let cover_first = a.max_support().unwrap_or(1);
    let cover_b = b.max_support().unwrap_or(1);
    (1..=n_max)
        .map(|n| {
            let first = expansion::eval_first(&ExpansionSpec::first(a.clone(), s), n, cover_first);
            let n_star = crsum::arith::star(&PosInt::from_u64(n))
                .to_u64()
                .expect("star of a u64");
            let second = expansion::eval_second(
                &ExpansionSpec::second(b.clone(), s, XiSemantics::Indicator),
                n,
                n_star * cover_b,
            );
            ComparisonRow { n, first, second }
        })
        .collect()
}

fn cmd_expand(args: ExpandArgs) -> Result<ExitCode, Error> {
    if args.s < 1 {
        return Err(Error::OutOfRange("s must be >= 1".into()));
    }
    let input = load_seq(&args.input)?;

    let (direction_name, output, comparison, roundtrip_discrepancy) = match args.direction {
        Direction::FirstToSecond => {
            let b = expansion::transform_first_to_second(&input)?;
            let table = comparison_table(&input, &b, args.s, args.nmax);
            ("first-to-second", b, table, None)
        }
        Direction::SecondToFirst => {
            let a = expansion::transform_second_to_first(&input, args.s);
            let table = comparison_table(&a, &input, args.s, args.nmax);
            ("second-to-first", a, table, None)
        }
        Direction::Roundtrip => {
            let b = expansion::transform_first_to_second(&input)?;
            let back = expansion::transform_second_to_first(&b, args.s);
            let mut discrepancy = ExactRational::zero();
            for index in input.support().chain(back.support()) {
                let diff = rational_abs(&(input.get(index) - back.get(index)));
                if diff > discrepancy {
                    discrepancy = diff;
                }
            }
            let table = comparison_table(&input, &b, args.s, args.nmax);
            ("roundtrip", back, table, Some(discrepancy))
        }
    };

    #[derive(serde::Serialize)]
    struct ComparisonJson {
        n: u64,
        first: String,
        second: String,
        difference: String,
    }

    #[derive(serde::Serialize)]
    struct ExpandDocument {
        direction: &'static str,
        s: u32,
        input: serde_json::Value,
        output: serde_json::Value,
        comparison: Vec<ComparisonJson>,
        max_pointwise_difference: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        roundtrip_max_discrepancy: Option<String>,
    }

    let max_pointwise = comparison
        .iter()
        .map(|row| rational_abs(&(&row.first - &row.second)))
        .max()
        .unwrap_or_else(ExactRational::zero);

    let doc = ExpandDocument {
        direction: direction_name,
        s: args.s,
        input: serde_json::from_str(&input.to_json()).expect("valid JSON"),
        output: serde_json::from_str(&output.to_json()).expect("valid JSON"),
        comparison: comparison
            .iter()
            .map(|row| ComparisonJson {
                n: row.n,
                first: rational_to_string(&row.first),
                second: rational_to_string(&row.second),
                difference: rational_to_string(&(&row.first - &row.second)),
            })
            .collect(),
        max_pointwise_difference: rational_to_string(&max_pointwise),
        roundtrip_max_discrepancy: roundtrip_discrepancy
            .as_ref()
            .map(rational_to_string),
    };
    let json = serde_json::to_string_pretty(&doc).expect("document serialization cannot fail");

    match (&args.out, args.format) {
        (Some(path), _) => {
            emit(&Some(path.clone()), &json)?;
            println!(
                "{direction_name}: {} -> {} entries, max pointwise difference {}",
                input.len(),
                output.len(),
                rational_to_string(&max_pointwise)
            );
            if let Some(d) = &roundtrip_discrepancy {
                println!("roundtrip max discrepancy: {}", rational_to_string(d));
            }
        }
        (None, _) => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_klee(args: KleeArgs) -> Result<ExitCode, Error> {
    if args.s < 1 {
        return Err(Error::OutOfRange("s must be >= 1".into()));
    }
    let precision = resolve_precision(args.precision)?;
    let need = |value: Option<u64>, flag: &str| {
        value.ok_or_else(|| Error::Malformed(format!("--{flag} is required for this variant")))
    };
    let content = match args.variant {
        KleeVariant::Cr => {
            let n = need(args.n, "n")?;
            let k_max = need(args.k_max, "K")?;
            if n < 1 || k_max < 1 {
                return Err(Error::OutOfRange("--n and --K must be >= 1".into()));
            }
            klee::klee_series_eval(n, args.s, k_max, precision).to_csv()
        }
        KleeVariant::CrPrime => {
            let n = need(args.n, "n")?;
            let k_max = need(args.k_max, "K")?;
            if n < 1 || k_max < 1 {
                return Err(Error::OutOfRange("--n and --K must be >= 1".into()));
            }
            klee::klee_cr_prime_eval(n, args.s, k_max, precision).to_csv()
        }
        KleeVariant::CoeffIdentity => {
            let k = need(args.k, "k")?;
            let d_max = need(args.d_max, "D")?;
            if k < 1 || d_max < 1 {
                return Err(Error::OutOfRange("--k and --D must be >= 1".into()));
            }
            let (lhs, rhs) = klee::coefficient_identity_check(k, args.s, d_max, precision);
            let digits = ((precision as u64 * 30103 / 100000) as u32).min(60);
            format!(
                "# {{\"k\":{},\"s\":{},\"D\":{},\"precision\":{}}}\nlhs,rhs,abs_diff\n{},{},{}\n",
                k,
                args.s,
                d_max,
                precision,
                lhs.to_decimal_string(digits),
                rhs.to_decimal_string(digits),
                lhs.sub(&rhs).abs().to_decimal_string(digits)
            )
        }
    };
    emit(&args.out, &content)?;
    if args.out.is_some() {
        eprintln!("report written");
    }
    Ok(ExitCode::SUCCESS)
}
