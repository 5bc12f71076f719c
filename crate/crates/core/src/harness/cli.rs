//! Argument parsing and dispatch for the `redpoly` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analytic::{
    integral_i, integral_in, lattice_sum, section5_identity_check, totient_power_sum, totient_sum,
    CoordinateWeight, LatticeSumSpec,
};
use crate::budget::Budget;
use crate::census::{
    run_census, CensusClass, CensusConfig, CensusQuery, CensusResult, Method, OracleCache,
};
use crate::error::{Error, Result};

use super::fixtures::Fixtures;
use super::results::{record_result, CacheStatus, ResultRecord};
use super::verify::{compute_rows, plotdata_csv, run_verify, Theorem, VerifyParams, VerifyReport};
use super::{error_kind, exit_code, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

#[derive(Debug, Parser)]
#[command(
    name = "redpoly",
    version,
    about = "Exact census of reducible integer polynomials of bounded height"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count one polynomial class at one degree and height bound.
    Census(CensusArgs),
    /// Check a growth-order suite along a geometric grid.
    Verify(VerifyArgs),
    /// Evaluate an integral, totient sum, or lattice sum.
    Analytic {
        #[command(subcommand)]
        op: AnalyticOp,
    },
    /// Emit `t,count,normalizer,ratio` rows for a suite as CSV.
    Plotdata(SuiteArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Worker threads (0 = one per CPU).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Wall-clock budget per query in seconds (0 = unlimited).
    #[arg(long)]
    time_budget_secs: Option<u64>,
    /// Memory budget for deduplication sets in bytes.
    #[arg(long)]
    memory_budget_bytes: Option<u64>,
    /// Step budget per query (0 = unlimited).
    #[arg(long)]
    step_budget: Option<u64>,
}

impl RunArgs {
    fn config(&self) -> Result<CensusConfig> {
        let mut budget = Budget::from_env()?;
        if let Some(secs) = self.time_budget_secs {
            budget.time_limit = (secs > 0).then(|| Duration::from_secs(secs));
        }
        if let Some(bytes) = self.memory_budget_bytes {
            budget.memory_bytes = bytes;
        }
        if let Some(steps) = self.step_budget {
            budget.max_steps = (steps > 0).then_some(steps);
        }
        Ok(CensusConfig {
            threads: self.threads,
            budget,
            ..CensusConfig::default()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Sieve,
    OracleScan,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Polynomial degree n.
    #[arg(long)]
    degree: usize,
    /// Height bound t (a positive integer).
    #[arg(long)]
    height_max: i64,
    /// reducible, split, kfactor, nolarge, pairset or qsplit.
    #[arg(long, default_value = "reducible")]
    class: String,
    /// Factor degree for `--class kfactor`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Sieve)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Results cache to append to and reproduce against.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Reducibility verdict cache shared across runs.
    #[arg(long)]
    oracle_cache: Option<PathBuf>,
    /// Include per-height member counts.
    #[arg(long)]
    shells: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    /// T1, T2, T3 or T4.
    theorem: String,
    /// Degree (defaults: T1 3, T2 2, T3 3, T4 4).
    #[arg(long)]
    n: Option<usize>,
    /// Factor degree for T4 (default n - 1).
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated geometric grid of height bounds.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<i64>>,
    #[command(flatten)]
    run: RunArgs,
}

impl SuiteArgs {
    fn params(&self) -> Result<VerifyParams> {
        let theorem: Theorem = self.theorem.parse()?;
        let mut params = VerifyParams::new(theorem);
        if let Some(n) = self.n {
            params.n = n;
            params.k = n.saturating_sub(1);
        }
        if let Some(k) = self.k {
            params.k = k;
        }
        if let Some(grid) = &self.grid {
            params.grid = grid.clone();
        }
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    suite: SuiteArgs,
    /// Band fixtures file (defaults to the built-in bands).
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum AnalyticOp {
    /// Integral of x^a y^b over {x, y >= 1, xy <= T}.
    Integral {
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    /// Integral of x_1 ... x_n over {x_i >= 1, prod x_i <= T}.
    In {
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        t: f64,
    },
    /// Exact sum of phi(m) for m <= t.
    TotientSum {
        #[arg(long)]
        t: u64,
    },
    /// Sum of phi(m) m^alpha for m <= t.
    PowerSum {
        #[arg(long)]
        t: u64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Exact weighted lattice sum over {x_i >= 1, prod x_i <= T}.
    LatticeSum {
        #[arg(long = "T")]
        t: f64,
        /// One weight per coordinate: 1, phi, x^e or phi*x^e.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<CoordinateWeight>,
    },
    /// Both sides of the logarithmic integral identity for degree n.
    Identity5 {
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        t: f64,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let report = json!({"error": {"kind": error_kind(&e), "message": e.to_string()}});
            let _ = writeln!(err, "{report}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<u8> {
    match command {
        Command::Census(args) => cmd_census(&args, out).map(|_| EXIT_OK),
        Command::Verify(args) => {
            let report = cmd_verify(&args, out)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Analytic { op } => cmd_analytic(&op, out).map(|_| EXIT_OK),
        Command::Plotdata(args) => {
            let rows = compute_rows(&args.params()?, &args.run.config()?)?;
            out.write_all(plotdata_csv(&rows).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_class(args: &CensusArgs) -> Result<CensusClass> {
    match (args.class.as_str(), args.k) {
        ("kfactor", Some(k)) => Ok(CensusClass::KFactor(k)),
        ("kfactor", None) => Err(Error::precondition("--class kfactor needs --k")),
        (_, Some(_)) if !args.class.starts_with("kfactor") => {
            Err(Error::precondition("--k applies to --class kfactor only"))
        }
        (other, _) => other.parse(),
    }
}

fn cmd_census(args: &CensusArgs, out: &mut dyn Write) -> Result<ResultRecord> {
    let class = parse_class(args)?;
    let query = CensusQuery::new(args.degree, args.height_max, class);
    query.validate()?;
    let mut cfg = args.run.config()?;
    cfg.method = match args.method {
        MethodArg::Sieve => Method::Sieve,
        MethodArg::OracleScan => Method::OracleScan,
    };
    cfg.shell_breakdown = args.shells;
    if let Some(path) = &args.oracle_cache {
        cfg.oracle = Arc::new(OracleCache::load(path)?);
    }
    let result = run_census(&query, &cfg)?;
    if let Some(path) = &args.oracle_cache {
        cfg.oracle.save(path)?;
    }
    let record = ResultRecord::from_result(&result);
    let status = match &args.cache {
        Some(path) => Some(record_result(path, &record)?),
        None => None,
    };
    write_census(out, args.format, &result, &record, status)?;
    Ok(record)
}

fn status_text(status: Option<CacheStatus>) -> &'static str {
    match status {
        Some(CacheStatus::New) => "new",
        Some(CacheStatus::Reproduced) => "reproduced",
        None => "none",
    }
}

fn write_census(
    out: &mut dyn Write,
    format: Format,
    result: &CensusResult,
    record: &ResultRecord,
    status: Option<CacheStatus>,
) -> Result<()> {
    let q = &result.query;
    match format {
        Format::Json => {
            let mut value = serde_json::to_value(record)?;
            value["cache"] = json!(status_text(status));
            if let Some(shells) = &result.shell_breakdown {
                value["shell_breakdown"] = serde_json::to_value(shells)?;
            }
            writeln!(out, "{value}")?;
        }
        Format::Csv => {
            writeln!(
                out,
                "fingerprint,degree,height_bound,class,count,method,candidates,dedupe_size,elapsed_ms,cache"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                record.fingerprint,
                q.degree,
                q.height_bound,
                q.class,
                result.count,
                result.method,
                result.work.candidates,
                result.work.dedupe_size,
                result.work.elapsed.as_millis(),
                status_text(status)
            )?;
        }
        Format::Table => {
            writeln!(out, "query        {}", record.fingerprint)?;
            writeln!(out, "count        {}", result.count)?;
            writeln!(out, "method       {}", result.method)?;
            writeln!(out, "candidates   {}", result.work.candidates)?;
            writeln!(out, "dedupe size  {}", result.work.dedupe_size)?;
            if let Some(pairs) = result.work.pair_count {
                writeln!(out, "pairs        {pairs}")?;
            }
            writeln!(out, "elapsed      {} ms", result.work.elapsed.as_millis())?;
            writeln!(out, "cache        {}", status_text(status))?;
            if let Some(shells) = &result.shell_breakdown {
                writeln!(out, "height  members")?;
                for (h, c) in shells {
                    writeln!(out, "{h:>6}  {c}")?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<VerifyReport> {
    let params = args.suite.params()?;
    let fixtures = match &args.fixtures {
        Some(path) => Fixtures::load(path)?,
        None => Fixtures::builtin(),
    };
    let report = run_verify(&params, &fixtures, &args.suite.run.config()?)?;
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
        Format::Csv => out.write_all(plotdata_csv(&report.rows).as_bytes())?,
        Format::Table => write_report_table(out, &report)?,
    }
    Ok(report)
}

fn write_report_table(out: &mut dyn Write, report: &VerifyReport) -> Result<()> {
    let k = report.k.map(|k| format!(" k={k}")).unwrap_or_default();
    writeln!(
        out,
        "{} n={}{k}  drift band [{}, {}]",
        report.theorem, report.n, report.allowed_drift.0, report.allowed_drift.1
    )?;
    writeln!(
        out,
        "{:>8} {:>14} {:>20} {:>12}",
        "t", "count", "normalizer", "ratio"
    )?;
    for r in &report.rows {
        writeln!(
            out,
            "{:>8} {:>14} {:>20.6} {:>12.6}",
            r.t, r.count, r.normalizer, r.ratio
        )?;
    }
    for c in &report.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{mark}  {}  ({})", c.name, c.detail)?;
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "verdict: {verdict}")?;
    Ok(())
}

fn cmd_analytic(op: &AnalyticOp, out: &mut dyn Write) -> Result<()> {
    match op {
        AnalyticOp::Integral { t, a, b } => writeln!(out, "{}", integral_i(*t, *a, *b)?)?,
        AnalyticOp::In { n, t } => writeln!(out, "{}", integral_in(*n, *t)?)?,
        AnalyticOp::TotientSum { t } => writeln!(out, "{}", totient_sum(*t)?)?,
        AnalyticOp::PowerSum { t, alpha } => writeln!(out, "{}", totient_power_sum(*t, *alpha)?)?,
        AnalyticOp::LatticeSum { t, weights } => writeln!(
            out,
            "{}",
            lattice_sum(&LatticeSumSpec::new(*t, weights.clone()))?
        )?,
        AnalyticOp::Identity5 { n, t } => {
            let (lhs, rhs) = section5_identity_check(*n, *t)?;
            writeln!(out, "lhs {lhs}")?;
            writeln!(out, "rhs {rhs}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("redpoly").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn census_json_is_one_object() {
        let (code, out, _) = run_capture(&[
            "census",
            "--degree",
            "2",
            "--height-max",
            "1",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["count"], 8);
        assert_eq!(v["cache"], "none");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(
            run_capture(&["census", "--degree", "3", "--height-max", "0"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&["census", "--degree", "2", "--height-max", "0.99"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&[
                "census",
                "--degree",
                "3",
                "--height-max",
                "1",
                "--class",
                "kfactor"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["verify", "T9"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["census", "--degree", "3", "--height-max", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
    }

    #[test]
    fn analytic_values() {
        assert_eq!(
            run_capture(&["analytic", "integral", "--T", "2", "--a", "1", "--b", "0"]).1,
            "0.5\n"
        );
        assert_eq!(
            run_capture(&["analytic", "totient-sum", "--t", "100"]).1,
            "3044\n"
        );
        assert_eq!(
            run_capture(&[
                "analytic",
                "lattice-sum",
                "--T",
                "4",
                "--weights",
                "phi,phi"
            ])
            .1,
            "12\n"
        );
        let (code, out, _) = run_capture(&["analytic", "power-sum", "--t", "10", "--alpha", "-2"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() - 2.1118).abs() < 1e-3);
    }
}
