use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlab_core::combinatorics::{compositions, mk, mk_is_covered};
use qlab_core::multipoly::{Alphabet, MultiPoly};
use qlab_core::pi::{pi_definition, verify_factorizations};
use qlab_core::qformula::{derive_q_formula, emit, Format};
use qlab_core::report::Report;
use qlab_core::scalar::{int, parse_scalar, Scalar};
use qlab_core::series::TruncSeries;
use qlab_core::suites::{self, Suite, VerifyConfig};
use serde_json::{json, Value};

const GOLDEN_ENV: &str = "QLAB_GOLDEN_DIR";

/// Like `print!`, but a closed stdout (e.g. piping into `head`) ends the
/// process quietly instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        write_stdout(&format!($($arg)*))
    };
}

macro_rules! outln {
    ($($arg:tt)*) => {
        write_stdout(&format!("{}\n", format!($($arg)*)))
    };
}

fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        std::process::exit(0);
    }
}

#[derive(Parser)]
#[command(
    name = "qlab",
    version,
    about = "Exact verification of the recursive Q-curvature formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report
    Verify(VerifyArgs),
    /// Print the recursive formula for Q_{2N}
    DeriveQ {
        n: usize,
        #[arg(long, default_value = "latex")]
        format: String,
    },
    /// List the multiplicities of all compositions of N
    Multiplicities {
        n: usize,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Print pi_{2N}, optionally checking its factorization identities
    Pi {
        n: usize,
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = PiFormat::Latex)]
        format: PiFormat,
    },
    /// Check the sphere identities in one dimension
    Sphere {
        #[arg(long)]
        dim: String,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Truncated power series operations
    Series {
        #[command(subcommand)]
        op: SeriesOp,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// all, combinatorics, pi, sphere, series or q
    scope: String,
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    /// Dimensions as a range `A..B` (inclusive) or a comma list of rationals
    #[arg(long, default_value = "3..12")]
    dims: String,
    #[arg(long, default_value = "qlab-report.json")]
    output: PathBuf,
    /// Worker threads; defaults to the number of cores
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum SeriesOp {
    /// Square root of a series with constant term 1
    Sqrt {
        /// Comma-separated coefficients, rational or polynomial in named symbols
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PiFormat {
    Latex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
}

/// Usage problems exit with 2, failed checks with 1.
enum Failure {
    Usage(String),
    Checks,
    Io(String),
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Verify(args) => verify(args),
        Command::DeriveQ { n, format } => derive_q(n, &format),
        Command::Multiplicities { n, order, format } => multiplicities(n, order, format),
        Command::Pi { n, check, format } => pi(n, check, format),
        Command::Sphere {
            dim,
            nmax,
            report,
            output,
        } => sphere(&dim, nmax, report, output),
        Command::Series {
            op: SeriesOp::Sqrt { coeffs, order },
        } => series_sqrt(&coeffs, order),
    }
}

fn parse_dims(s: &str) -> Result<Vec<Scalar>, Failure> {
    let dims: Vec<Scalar> = if let Some((a, b)) = s.split_once("..") {
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("bad dimension range `{s}`")))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(usage(format!("empty dimension range `{s}`")));
        }
        (a..=b).map(int).collect()
    } else {
        s.split(',')
            .map(|x| parse_scalar(x.trim()).map_err(usage))
            .collect::<Result<_, _>>()?
    };
    if let Some(bad) = dims.iter().find(|d| **d < int(3)) {
        return Err(usage(format!("dimension {bad} is below 3")));
    }
    Ok(dims)
}

fn golden_dir() -> Option<PathBuf> {
    std::env::var_os(GOLDEN_ENV).map(PathBuf::from)
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Failure::Io(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn build_report(
    scope: &str,
    cfg: &VerifyConfig,
    suites: &[Suite],
    jobs: Option<usize>,
) -> Result<Report, Failure> {
    let checks = with_jobs(jobs, || suites::run(suites, cfg))?;
    let mut config = BTreeMap::new();
    config.insert("nmax".to_string(), json!(cfg.nmax));
    config.insert(
        "dims".to_string(),
        json!(cfg.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
    );
    config.insert("seed".to_string(), json!(cfg.seed));
    Ok(Report::new(
        env!("CARGO_PKG_VERSION"),
        &timestamp(),
        scope,
        config,
        checks,
    ))
}

fn write_report(report: &Report, path: &PathBuf) -> Outcome {
    std::fs::write(path, report.to_json())
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn verify(args: VerifyArgs) -> Outcome {
    let suites = suites::parse_scope(&args.scope).map_err(usage)?;
    if args.nmax == 0 {
        return Err(usage("--nmax must be at least 1"));
    }
    let cfg = VerifyConfig {
        nmax: args.nmax,
        dims: parse_dims(&args.dims)?,
        golden_dir: golden_dir(),
        ..Default::default()
    };
    let report = build_report(&args.scope, &cfg, &suites, args.jobs)?;
    write_report(&report, &args.output)?;
    out!("{}", report.summary_text());
    outln!("report written to {}", args.output.display());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn derive_q(n: usize, format: &str) -> Outcome {
    let format: Format = format.parse().map_err(usage)?;
    let f = derive_q_formula(n).map_err(usage)?;
    outln!("{}", emit(&f, format));
    Ok(())
}

fn multiplicities(n: usize, order: usize, format: TableFormat) -> Outcome {
    if n == 0 || order == 0 {
        return Err(usage("N and --order must be at least 1"));
    }
    let rows: Vec<(String, Vec<usize>, Scalar, bool)> = compositions(n)
        .into_iter()
        .map(|c| {
            let v = mk(&c, order).map_err(usage)?;
            Ok((
                c.to_string(),
                c.parts().to_vec(),
                v,
                !mk_is_covered(&c, order),
            ))
        })
        .collect::<Result<_, Failure>>()?;
    match format {
        TableFormat::Csv => {
            outln!("composition,value,zero_extended");
            for (text, _, v, ext) in &rows {
                outln!("\"{text}\",{v},{ext}");
            }
        }
        TableFormat::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|(_, parts, v, ext)| json!({"composition": parts, "value": v.to_string(), "zero_extended": ext}))
                .collect();
            outln!(
                "{}",
                serde_json::to_string_pretty(&json!({"N": n, "order": order, "rows": out}))
                    .expect("json")
            );
        }
    }
    Ok(())
}

fn pi(n: usize, check: bool, format: PiFormat) -> Outcome {
    let p = pi_definition(n).map_err(usage)?;
    if !check {
        match format {
            PiFormat::Latex => outln!("\\pi_{{{}}}(\\lambda) = {}", 2 * n, p.to_latex()),
            PiFormat::Json => outln!(
                "{}",
                serde_json::to_string_pretty(&p.to_json()).expect("json")
            ),
        }
        return Ok(());
    }
    let checks = verify_factorizations(n).map_err(usage)?;
    let all = checks.iter().all(|c| c.passed());
    match format {
        PiFormat::Latex => {
            for c in &checks {
                let status = if c.passed() {
                    "pass".to_string()
                } else {
                    format!("FAIL ({})", c.mismatch().unwrap_or_default())
                };
                outln!("{}: {status}", c.statement());
            }
        }
        PiFormat::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "j": c.j,
                        "identity": c.statement(),
                        "status": if c.passed() { "pass" } else { "fail" },
                        "mismatch": c.mismatch(),
                    })
                })
                .collect();
            let out = json!({"N": n, "pi": p.to_json(), "checks": rows});
            outln!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn sphere(
    dim: &str,
    nmax: usize,
    report: Option<ReportFormat>,
    output: Option<PathBuf>,
) -> Outcome {
    if nmax == 0 {
        return Err(usage("--nmax must be at least 1"));
    }
    let dims = parse_dims(dim)?;
    let cfg = VerifyConfig {
        nmax,
        dims,
        golden_dir: golden_dir(),
        ..Default::default()
    };
    let r = build_report("sphere", &cfg, &[Suite::Sphere], None)?;
    if let Some(path) = &output {
        write_report(&r, path)?;
    }
    match report {
        Some(ReportFormat::Json) => out!("{}", r.to_json()),
        None => {
            for c in &r.checks {
                let params: Vec<String> = c
                    .params
                    .iter()
                    .map(|(k, v)| {
                        format!("{k}={}", v.as_str().map_or(v.to_string(), str::to_string))
                    })
                    .collect();
                let status = match &c.status {
                    qlab_core::Status::Skipped { reason } => format!("skipped ({reason})"),
                    s => s.label().to_string(),
                };
                outln!(
                    "{} [{}] {}: {status}",
                    c.id,
                    params.join(" "),
                    c.detail.as_deref().unwrap_or("")
                );
            }
            out!("{}", r.summary_text());
        }
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn series_sqrt(coeffs: &str, order: usize) -> Outcome {
    let items: Vec<&str> = coeffs.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(usage("empty coefficient in --coeffs"));
    }
    let mut names: Vec<String> = Vec::new();
    for item in &items {
        for s in MultiPoly::symbols_in(item).map_err(usage)? {
            if !names.contains(&s) {
                names.push(s);
            }
        }
    }
    let alpha = Alphabet::new(&names);
    let mut polys = items
        .iter()
        .map(|s| MultiPoly::parse(&alpha, s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    polys.resize(order + 1, MultiPoly::zero(&alpha));
    let series = TruncSeries::new(polys).map_err(usage)?;
    let root = series.sqrt().map_err(usage)?;
    let out: Vec<String> = root.coeffs().iter().map(|c| c.to_string()).collect();
    outln!(
        "{}",
        serde_json::to_string_pretty(&json!({"order": order, "sqrt": out})).expect("json")
    );
    Ok(())
}
