use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use normcalc::analysis::classify;
use normcalc::rep::{parse_support, GroupType, InductionDatum};
use normcalc::scan::{run_scan, ScanError, ScanSpec};
use normcalc::suites::{Suite, SuiteReport};
use normcalc::weyl::{check_decomposition, DecompositionOutcome, Way};

const EXIT_ASSERTION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "normcalc", version, about = "Exact checks on normalization factors of intertwining operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: identities, gl, step2, step3, reduction, weyl or all
    Verify {
        suite: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify one inducing datum |det|^s tau_a x sigma_r
    Analyze {
        #[arg(long)]
        group: String,
        #[arg(long)]
        a: i64,
        /// Comma-separated support tuple, e.g. "7,1"; "" for the empty tuple
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        support: String,
        /// sigma lives on the trivial group
        #[arg(long)]
        no_sigma: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Scan a grid of (a, r1, r2) described by a JSON spec file
    Scan {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Check a three-factor decomposition of w_k
    Weyl {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// 12 or 34
        #[arg(long)]
        way: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// A failed command: message plus exit code.
struct Failure(u8, String);

fn input_error(e: impl ToString) -> Failure {
    Failure(EXIT_INPUT, e.to_string())
}

fn io_error(e: io::Error) -> Failure {
    Failure(EXIT_IO, format!("i/o error: {e}"))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
    writeln!(io::stdout(), "{text}").map_err(io_error)
}

fn verify(suite: &str, format: Format) -> Result<(), Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(suite).ok_or_else(|| {
            input_error(format!(
                "unknown suite `{suite}` (expected identities, gl, step2, step3, reduction, weyl or all)"
            ))
        })?]
    };
    let reports: Vec<SuiteReport> = suites.into_iter().map(Suite::run).collect();
    match format {
        Format::Text => {
            let mut out = io::stdout().lock();
            for r in &reports {
                write!(out, "{r}").map_err(io_error)?;
            }
        }
        Format::Json => print_json(&reports)?,
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.name()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure(EXIT_ASSERTION, format!("failing suites: {}", failed.join(", "))))
    }
}

fn analyze(group: &str, a: i64, support: &str, no_sigma: bool, format: Format) -> Result<(), Failure> {
    let group: GroupType = group.parse().map_err(input_error)?;
    let support = parse_support(support).map_err(input_error)?;
    let datum = InductionDatum::new(group, a, support.entries(), !no_sigma).map_err(input_error)?;
    let report = classify(&datum).map_err(input_error)?;
    match format {
        Format::Text => write!(io::stdout(), "{}", report.render_text()).map_err(io_error),
        Format::Json => print_json(&report),
    }
}

fn scan(spec_path: &PathBuf) -> Result<(), Failure> {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| Failure(EXIT_IO, format!("cannot read {}: {e}", spec_path.display())))?;
    let spec = ScanSpec::from_json(&text).map_err(input_error)?;
    let as_failure = |e: ScanError| match e {
        ScanError::Io(e) => io_error(e),
        other => input_error(other),
    };
    match &spec.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure(EXIT_IO, format!("cannot create {}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            let summary = run_scan(&spec, &mut out).map_err(as_failure)?;
            let line = serde_json::to_string(&summary).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
            writeln!(io::stdout(), "{line}").map_err(io_error)
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            run_scan(&spec, &mut out).map(|_| ()).map_err(as_failure)
        }
    }
}

fn weyl(group: &str, n: usize, k: usize, d: usize, way_code: &str, format: Format) -> Result<(), Failure> {
    let group: GroupType = group.parse().map_err(input_error)?;
    let way: Way = way_code.parse().map_err(input_error)?;
    let check = check_decomposition(way, group, n, k, d).map_err(input_error)?;
    match format {
        Format::Json => print_json(&check)?,
        Format::Text => {
            let mut out = io::stdout().lock();
            let mut text = format!(
                "group {group}, n = {n}, k = {k}, d = {d}, way {way_code}: dimension {}, epsilon = {}\n",
                check.dim, check.epsilon
            );
            for (i, f) in check.factors.iter().enumerate() {
                let ok = if check.factors_preserve_form[i] { "preserves form" } else { "DOES NOT preserve form" };
                text.push_str(&format!("factor {} ({ok}):\n{f}", i + 1));
            }
            text.push_str(&match &check.outcome {
                DecompositionOutcome::Exact => "product = w_k exactly\n".to_string(),
                DecompositionOutcome::TorusCorrected { diagonal } => {
                    format!("product = t * w_k with t = diag{diagonal:?}\n")
                }
                DecompositionOutcome::Fail { difference } => format!("product differs from w_k by:\n{difference}"),
            });
            write!(out, "{text}").map_err(io_error)?;
        }
    }
    if check.passed() {
        Ok(())
    } else {
        Err(Failure(EXIT_ASSERTION, "decomposition check failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { suite, format } => verify(suite, *format),
        Command::Analyze { group, a, support, no_sigma, format } => analyze(group, *a, support, *no_sigma, *format),
        Command::Scan { spec } => scan(spec),
        Command::Weyl { group, n, k, d, way, format } => weyl(group, *n, *k, *d, way, *format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
