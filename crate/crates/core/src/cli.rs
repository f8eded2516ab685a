//! Command-line front end: argument parsing, validation, and CSV/JSON output.
//!
//! Every output starts with the resolved run configuration. Thread count is
//! deliberately left out of it, since results must not depend on it.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::arith::{gcd, FactoredInteger};
use crate::characters::CharacterGroup;
use crate::dirichlet_series::leading_coefficient;
use crate::distribution::{distribution_report, normal_order_report, z_grid};
use crate::egyptian::{r_bruteforce, r_character_formula, r_divisor_method, EgyptianContext, QuadraticMain};
use crate::error::{Error, Result};
use crate::moments::{kth_moment_scan, scan, ScanOptions, ABSOLUTE_SCAN_LIMIT, DEFAULT_SCAN_LIMIT, MAX_MODULUS};
use crate::par::{with_threads, Execution};
use crate::verify::{run_suite, Suite};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONSISTENCY: i32 = 2;

const SIGN_NOTE: &str = "the factor (1 - 6/p + 1/p^2) is negative at p = 2 (see minus_sign_factor_at_2); \
the product uses (1 + 6/p + 1/p^2), which is what the residue of the generating series gives";

#[derive(Debug, Parser)]
#[command(
    name = "egyfrac",
    version,
    about = "Solutions of a/n = 1/x + 1/y: exact counts and moment/distribution experiments"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R(n;a) by every applicable method.
    Compute(ComputeArgs),
    /// Cumulative moments of R(n;a) over 1..=N at checkpoints.
    Scan(ScanArgs),
    /// Empirical CDF of the normalized log R(n;a) against the normal law.
    Dist(DistArgs),
    /// Leading coefficient of the mean-value polynomial via a truncated Euler product.
    Coeff(CoeffArgs),
    /// Run invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    /// Also list the solutions (x, y).
    #[arg(long)]
    pub solutions: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long)]
    pub nmax: u64,
    /// Comma-separated checkpoints (default: powers of ten and N).
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Also report sum R^k over gcd(n,a) = 1 at each checkpoint.
    #[arg(long)]
    pub moment: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
    pub limit: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long)]
    pub nmax: u64,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub z_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub z_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub z_step: f64,
    /// Band for the normal-order fraction.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Grid shift for the omega/Omega comparison CDFs.
    #[arg(long, default_value_t = 0.25)]
    pub offset: f64,
    #[arg(long, default_value_t = 0.05)]
    pub slack: f64,
    #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
    pub limit: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub pmax: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    pub suite: Suite,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// The resolved configuration embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub solutions: bool,
    pub format: Format,
}

impl RunConfig {
    fn new(subcommand: &'static str, format: Format) -> Self {
        RunConfig {
            subcommand,
            a: None,
            n: None,
            n_max: None,
            limit: None,
            checkpoints: None,
            moment: None,
            z_grid: None,
            epsilon: None,
            offset: None,
            slack: None,
            p_max: None,
            suite: None,
            solutions: false,
            format,
        }
    }

    fn header(&self) -> serde_json::Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool": concat!("egyfrac ", env!("CARGO_PKG_VERSION")),
            "config": self,
        })
    }
}

/// A finished run: rendered output and whether every internal check held.
struct Rendered {
    body: Vec<u8>,
    consistent: bool,
}

fn check_modulus(a: u64) -> Result<()> {
    if a == 0 || a > MAX_MODULUS {
        return Err(Error::InvalidArgument(format!("--a must be in 1..={MAX_MODULUS}, got {a}")));
    }
    Ok(())
}

fn check_limit(limit: u64) -> Result<()> {
    if limit > ABSOLUTE_SCAN_LIMIT {
        return Err(Error::InvalidArgument(format!("--limit must not exceed {ABSOLUTE_SCAN_LIMIT}")));
    }
    Ok(())
}

fn check_nmax(n_max: u64, limit: u64) -> Result<()> {
    if n_max > limit {
        return Err(Error::OutOfRange { n: n_max, limit });
    }
    Ok(())
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf)
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv output: {e}"))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::InvalidArgument(format!("json output: {e}"))
}

fn comment_line(buf: &mut Vec<u8>, tag: &str, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    if tag.is_empty() {
        buf.extend_from_slice(format!("# {text}\n").as_bytes());
    } else {
        buf.extend_from_slice(format!("# {tag} {text}\n").as_bytes());
    }
    Ok(())
}

/// CSV: a `#` header line with the configuration, a column header, the rows.
fn render_csv(
    config: &RunConfig,
    columns: &[&str],
    rows: &[Vec<String>],
    summary: Option<serde_json::Value>,
) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    comment_line(&mut buf, "", &config.header())?;
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(columns).map_err(csv_err)?;
        for row in rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv output: {e}")))?;
    }
    if let Some(s) = summary {
        comment_line(&mut buf, "summary", &s)?;
    }
    Ok(buf)
}

fn render_json(config: &RunConfig, result: serde_json::Value) -> Result<Vec<u8>> {
    let mut doc = config.header();
    doc["result"] = result;
    let mut buf = serde_json::to_vec_pretty(&doc).map_err(json_err)?;
    buf.push(b'\n');
    Ok(buf)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Debug, Serialize)]
struct ComputeRecord {
    n: u64,
    a: u64,
    gcd_na: u64,
    r: u64,
    r_general: u64,
    /// `None` when the search range exceeds the brute-force budget.
    r_bruteforce: Option<u64>,
    /// Only defined for gcd(n, a) = 1.
    r_divisor_method: Option<u64>,
    r_character_formula: Option<u64>,
    quadratic_main: Option<QuadraticMain>,
    agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    solutions: Option<Vec<(u64, u64)>>,
}

fn cmd_compute(args: &ComputeArgs) -> Result<(RunConfig, Rendered)> {
    check_modulus(args.a)?;
    if args.n == 0 || args.n > ABSOLUTE_SCAN_LIMIT {
        return Err(Error::InvalidArgument(format!("--n must be in 1..={ABSOLUTE_SCAN_LIMIT}")));
    }
    let (n, a) = (args.n, args.a);
    let mut config = RunConfig::new("compute", args.output.format);
    config.a = Some(a);
    config.n = Some(n);
    config.solutions = args.solutions;

    let fi = FactoredInteger::by_trial_division(n)?;
    let ctx = EgyptianContext::new(a)?;
    let eval = ctx.evaluate(&fi, &mut Vec::new())?;
    let brute = match r_bruteforce(n, a, args.solutions) {
        Ok(b) => Some(b),
        Err(Error::BruteForceBudget { .. }) if !args.solutions => None,
        Err(e) => return Err(e),
    };
    let g = gcd(n, a);
    let (divisor, character, quad) = if g == 1 {
        let group = CharacterGroup::new(a)?;
        (
            Some(r_divisor_method(&fi, a)?),
            Some(r_character_formula(&fi, &group)?),
            Some(QuadraticMain { numerator: eval.quad_main_scaled, denominator: eval.quad_main_denominator }),
        )
    } else {
        (None, None, None)
    };
    let values: Vec<u64> =
        [Some(eval.r), brute.as_ref().map(|b| b.count), divisor, character].into_iter().flatten().collect();
    let agree = values.iter().all(|&v| v == eval.r);
    let solutions =
        brute.as_ref().and_then(|b| b.solutions.as_ref()).map(|s| s.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>());
    let record = ComputeRecord {
        n,
        a,
        gcd_na: g,
        r: eval.r,
        r_general: eval.r,
        r_bruteforce: brute.map(|b| b.count),
        r_divisor_method: divisor,
        r_character_formula: character,
        quadratic_main: quad,
        agree,
        solutions,
    };

    let body = match config.format {
        Format::Json => render_json(&config, serde_json::to_value(&record).map_err(json_err)?)?,
        Format::Csv => {
            let mut columns = vec![
                "n",
                "a",
                "gcd_na",
                "r_general",
                "r_bruteforce",
                "r_divisor_method",
                "r_character_formula",
                "quad_main",
                "agree",
            ];
            let mut row = vec![
                n.to_string(),
                a.to_string(),
                g.to_string(),
                record.r_general.to_string(),
                opt(record.r_bruteforce),
                opt(divisor),
                opt(character),
                opt(quad.map(|q| q.value())),
                agree.to_string(),
            ];
            if let Some(s) = &record.solutions {
                columns.push("solutions");
                row.push(s.iter().map(|(x, y)| format!("{x}:{y}")).collect::<Vec<_>>().join(";"));
            }
            render_csv(&config, &columns, &[row], None)?
        }
    };
    Ok((config, Rendered { body, consistent: agree }))
}

fn cmd_scan(args: &ScanArgs, exec: Execution) -> Result<(RunConfig, Rendered)> {
    check_modulus(args.a)?;
    check_limit(args.limit)?;
    check_nmax(args.nmax, args.limit)?;
    let opts = ScanOptions { checkpoints: args.checkpoints.clone(), exec, limit: args.limit };
    let report = scan(args.a, args.nmax, &opts)?;
    let resolved: Vec<u64> = report.checkpoints.iter().map(|r| r.n_max).collect();
    let moments = match args.moment {
        Some(k) => Some(kth_moment_scan(args.a, k, &resolved, &opts)?),
        None => None,
    };

    let mut config = RunConfig::new("scan", args.output.format);
    config.a = Some(args.a);
    config.n_max = Some(args.nmax);
    config.limit = Some(args.limit);
    config.checkpoints = Some(resolved);
    config.moment = args.moment;

    // the k = 1, 2 moments must reproduce S1, S2
    let mut consistent = report.checkpoints.windows(2).all(|w| w[0].s1 <= w[1].s1 && w[0].s2 <= w[1].s2);
    if let Some(m) = &moments {
        for ((_, sk), row) in m.iter().zip(&report.checkpoints) {
            let coprime_s = match args.moment {
                Some(1) => Some(row.s1),
                Some(2) => Some(row.s2),
                _ => None,
            };
            if coprime_s.is_some_and(|s| s != *sk) {
                consistent = false;
            }
        }
    }

    let body = match config.format {
        Format::Json => {
            let mut result = serde_json::to_value(&report).map_err(json_err)?;
            if let Some(m) = &moments {
                result["moment"] = json!(m.iter().map(|(n, s)| json!({"n_max": n, "sum": s})).collect::<Vec<_>>());
            }
            render_json(&config, result)?
        }
        Format::Csv => {
            let mut columns = vec!["n_max", "coprime_count", "s1", "s2", "d_times_phi_sq", "d", "d_normalized"];
            let k_col = args.moment.map(|k| format!("sum_r_pow_{k}"));
            if let Some(c) = &k_col {
                columns.push(c);
            }
            let rows: Vec<Vec<String>> = report
                .checkpoints
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut row = vec![
                        r.n_max.to_string(),
                        r.coprime_count.to_string(),
                        r.s1.to_string(),
                        r.s2.to_string(),
                        r.d_scaled.to_string(),
                        r.d.to_string(),
                        opt(r.d_normalized),
                    ];
                    if let Some(m) = &moments {
                        row.push(m[i].1.to_string());
                    }
                    row
                })
                .collect();
            let summary = json!({ "a": report.a, "phi_a": report.phi_a, "turan": report.turan });
            render_csv(&config, &columns, &rows, Some(summary))?
        }
    };
    Ok((config, Rendered { body, consistent }))
}

fn cmd_dist(args: &DistArgs, exec: Execution) -> Result<(RunConfig, Rendered)> {
    check_modulus(args.a)?;
    check_limit(args.limit)?;
    check_nmax(args.nmax, args.limit)?;
    if !(args.epsilon > 0.0 && args.offset >= 0.0 && args.slack >= 0.0) {
        return Err(Error::InvalidArgument("--epsilon must be positive, --offset and --slack nonnegative".into()));
    }
    let grid = z_grid(args.z_min, args.z_max, args.z_step)?;
    let report = distribution_report(args.a, args.nmax, &grid, args.offset, args.slack, exec)?;
    let normal = normal_order_report(args.a, args.nmax, args.epsilon, exec)?;

    let mut config = RunConfig::new("dist", args.output.format);
    config.a = Some(args.a);
    config.n_max = Some(args.nmax);
    config.limit = Some(args.limit);
    config.z_grid = Some(grid);
    config.epsilon = Some(args.epsilon);
    config.offset = Some(args.offset);
    config.slack = Some(args.slack);

    let g = &report.grid;
    let consistent = g.is_monotone() && g.eligible + g.excluded_zero_r + g.excluded_small_n == g.n_max;
    let summary = json!({
        "ks_eligible": report.ks_eligible,
        "ks_all_n": report.ks_all_n,
        "eligible": g.eligible,
        "excluded_zero_r": g.excluded_zero_r,
        "excluded_small_n": g.excluded_small_n,
        "monotone": g.is_monotone(),
        "sandwich": report.sandwich,
        "normal_order": normal,
    });
    let body = match config.format {
        Format::Json => {
            let mut result = serde_json::to_value(&report).map_err(json_err)?;
            result["normal_order"] = serde_json::to_value(&normal).map_err(json_err)?;
            render_json(&config, result)?
        }
        Format::Csv => {
            let columns = ["z", "empirical", "gaussian", "abs_diff", "empirical_all_n"];
            let rows: Vec<Vec<String>> = (0..g.z_values.len())
                .map(|i| {
                    vec![
                        g.z_values[i].to_string(),
                        g.empirical[i].to_string(),
                        g.gaussian[i].to_string(),
                        (g.empirical[i] - g.gaussian[i]).abs().to_string(),
                        g.empirical_all_n[i].to_string(),
                    ]
                })
                .collect();
            render_csv(&config, &columns, &rows, Some(summary))?
        }
    };
    Ok((config, Rendered { body, consistent }))
}

fn cmd_coeff(args: &CoeffArgs, exec: Execution) -> Result<(RunConfig, Rendered)> {
    check_modulus(args.a)?;
    let res = leading_coefficient(args.a, args.pmax, exec)?;
    let mut config = RunConfig::new("coeff", args.output.format);
    config.a = Some(args.a);
    config.p_max = Some(args.pmax);
    let body = match config.format {
        Format::Json => {
            let mut result = serde_json::to_value(&res).map_err(json_err)?;
            result["note"] = json!(SIGN_NOTE);
            render_json(&config, result)?
        }
        Format::Csv => {
            let columns = [
                "a",
                "p_max",
                "value",
                "last_prime",
                "last_factor_delta",
                "primes_used",
                "prefactor",
                "minus_sign_factor_at_2",
            ];
            let row = vec![
                res.a.to_string(),
                res.p_max.to_string(),
                res.value.to_string(),
                res.last_prime.to_string(),
                res.last_factor_delta.to_string(),
                res.primes_used.to_string(),
                res.prefactor.to_string(),
                res.minus_sign_factor_at_2.to_string(),
            ];
            render_csv(&config, &columns, &[row], Some(json!({ "note": SIGN_NOTE })))?
        }
    };
    Ok((config, Rendered { body, consistent: true }))
}

fn cmd_verify(args: &VerifyArgs, exec: Execution) -> Result<(RunConfig, Rendered)> {
    let results = run_suite(args.suite, exec)?;
    let mut config = RunConfig::new("verify", args.output.format);
    config.suite = Some(args.suite);
    let consistent = results.iter().all(|r| r.passed);
    let body = match config.format {
        Format::Json => render_json(
            &config,
            json!({ "passed": consistent, "checks": serde_json::to_value(&results).map_err(json_err)? }),
        )?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| vec![r.name.clone(), r.passed.to_string(), r.cases.to_string(), r.detail.clone()])
                .collect();
            render_csv(&config, &["check", "passed", "cases", "detail"], &rows, Some(json!({ "passed": consistent })))?
        }
    };
    Ok((config, Rendered { body, consistent }))
}

fn execute(cli: &Cli) -> Result<(RunConfig, Rendered)> {
    let exec = Execution::Parallel;
    let threads = cli.threads.map(|t| t as usize);
    with_threads(threads, || match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Scan(a) => cmd_scan(a, exec),
        Command::Dist(a) => cmd_dist(a, exec),
        Command::Coeff(a) => cmd_coeff(a, exec),
        Command::Verify(a) => cmd_verify(a, exec),
    })
}

fn out_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Compute(a) => a.output.out.as_ref(),
        Command::Scan(a) => a.output.out.as_ref(),
        Command::Dist(a) => a.output.out.as_ref(),
        Command::Coeff(a) => a.output.out.as_ref(),
        Command::Verify(a) => a.output.out.as_ref(),
    }
}

/// Parse `args`, run, write the result to `--out` or `stdout`, and return
/// the process exit code. Diagnostics and timing go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let start = Instant::now();
    let (config, rendered) = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return if e.is_consistency() { EXIT_CONSISTENCY } else { EXIT_USAGE };
        }
    };
    let written = match out_path(&cli) {
        Some(path) => std::fs::write(path, &rendered.body),
        None => stdout.write_all(&rendered.body).and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: writing output: {e}");
        return EXIT_USAGE;
    }
    let _ = writeln!(stderr, "{}: {:.3} s", config.subcommand, start.elapsed().as_secs_f64());
    if rendered.consistent {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "error: internal consistency check failed");
        EXIT_CONSISTENCY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("egyfrac").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_small_cases() {
        let (code, out, _) = run_capture(&["compute", "--n", "2", "--a", "1", "--solutions"]);
        assert_eq!(code, 0);
        let last = out.lines().last().unwrap();
        assert!(last.starts_with("2,1,1,3,3,3,3,"), "{last}");
        assert!(last.ends_with("true,3:6;4:4;6:3"), "{last}");

        let (code, out, _) = run_capture(&["compute", "--n", "4", "--a", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["r"], 2);
        assert_eq!(v["schema_version"], SCHEMA_VERSION);

        let (code, out, _) = run_capture(&["compute", "--n", "1", "--a", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["r"], 1);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["compute"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "--n", "5", "--a", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "--n", "5", "--a", "10001"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["scan", "--nmax", "100", "--threads", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["scan", "--nmax", "20000000"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("compute"));
    }

    #[test]
    fn scan_csv_layout() {
        let (code, out, _) = run_capture(&["scan", "--a", "1", "--nmax", "10", "--checkpoints", "10"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# {\"config\""));
        assert_eq!(lines[1], "n_max,coprime_count,s1,s2,d_times_phi_sq,d,d_normalized");
        assert!(lines[2].starts_with("10,10,48,298,0,0,0"));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn scan_reports_zero_deviation_mod_3() {
        let (code, out, _) = run_capture(&["scan", "--a", "3", "--nmax", "1000", "--moment", "2"]);
        assert_eq!(code, 0);
        for line in out.lines().skip(2).filter(|l| !l.starts_with('#')) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[4], "0");
            assert_eq!(cols[3], cols[7]);
        }
    }

    #[test]
    fn dist_and_coeff_smoke() {
        let (code, out, _) = run_capture(&["dist", "--a", "1", "--nmax", "100"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 26);
        assert!(out.lines().last().unwrap().starts_with("# summary {"));
        assert!(out.contains("\"excluded_small_n\":2"));

        let (code, out, _) = run_capture(&["coeff", "--a", "2", "--pmax", "1000", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["result"]["value"].as_f64().unwrap() > 0.0);
        assert!(v["result"]["minus_sign_factor_at_2"].as_f64().unwrap() < 0.0);
    }
}
