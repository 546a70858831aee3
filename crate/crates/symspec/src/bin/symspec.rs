//! Command-line front end: analyze single functions, sweep corpora, and
//! run the exhaustive verification suite.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use symspec::analysis::{analyze, csv_row, AnalysisDocument, AnalysisOptions, CSV_HEADER};
use symspec::dsl::parse_function_spec;
use symspec::exact::Exact;
use symspec::pdt::{build_pdt, export_pdt};
use symspec::sweep::{run_sweep, SweepMode, SweepOptions};
use symspec::verify::run_verify;

const SPEC_HELP: &str = "\
FUNCTION SPECS:
  maj:n          majority: +1 iff |x| > n/2 (even-n ties go to -1)
  and:n          -1 only at the all-ones input
  or:n           -1 iff |x| >= 1
  parity:n       (-1)^|x|
  mod:m:n        -1 iff |x| is divisible by m
  threshold:t:n  +1 iff |x| >= t
  g:k:n          -1 exactly on level k
  random:s:n     seeded pseudorandom level signs (splitmix64 stream)
  +--+           literal level string, weight-0 level first (n = length - 1)

SWEEP FAMILIES (in row order):
  maj, and, or, parity, mod:3, threshold:ceil(n/2), g:1, and g:2 when n >= 2

ENVIRONMENT:
  SYMSPEC_EXACT_LIMIT  largest n analyzed with exact rational reporting
                       (default 64); above it the float path is used

EXIT CODES:
  0  success
  1  verification failure (symspec verify found a violated identity)
  2  usage or input error

Output is deterministic: identical invocations produce byte-identical
output once --no-timestamp suppresses the generated_at field.";

#[derive(Parser)]
#[command(
    name = "symspec",
    version,
    about = "Exact spectral analysis of symmetric Boolean functions",
    after_long_help = SPEC_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one function: structure radii, norms, bound margins,
    /// decision-tree size, and optionally the exact approximate norm.
    Analyze {
        /// Function spec; see the long help (--help) for the DSL.
        spec: String,
        /// Accuracy for the approximate-norm LP, as a rational like 1/3.
        #[arg(long, value_name = "P/Q")]
        eps: Option<String>,
        /// Emit the row as JSON (the default).
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit the row as CSV (fixed header + one line).
        #[arg(long)]
        csv: bool,
        /// Write the parity decision tree to FILE (materialized trees
        /// only, n <= 20).
        #[arg(long, value_name = "FILE")]
        pdt_export: Option<PathBuf>,
        /// Omit the generated_at timestamp for byte-reproducible output.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Analyze a whole corpus at one n and emit a CSV stream with an
    /// envelope-ratio footer.
    Sweep {
        /// Number of input variables.
        #[arg(long)]
        n: usize,
        /// Corpus: exhaustive (all 2^(n+1) patterns, n <= 16), families,
        /// or random (100 seeded functions).
        #[arg(long)]
        mode: SweepMode,
        /// Worker threads; output is identical for any worker count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the CSV to FILE instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Omit the generated_at comment line.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Re-check the library's identities and inequalities over all
    /// functions up to --n-max; exits 0 iff everything holds.
    Verify {
        /// Exhaustive corpus bound (1..=12).
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Deliberately fail one check to test failure handling.
        #[arg(long)]
        inject_fault: bool,
    },
}

fn now_rfc3339() -> String {
    chrono::Utc::now()
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

// Write to stdout, treating a closed pipe (e.g. `symspec ... | head`) as a
// normal early exit rather than an error.
fn emit(text: &str) -> Result<(), String> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(format!("stdout: {e}")),
    }
}

fn exact_limit_from_env() -> Result<usize, String> {
    match std::env::var("SYMSPEC_EXACT_LIMIT") {
        Ok(v) => v.trim().parse().map_err(|_| {
            format!("SYMSPEC_EXACT_LIMIT must be a nonnegative integer, got {v:?}")
        }),
        Err(std::env::VarError::NotPresent) => Ok(symspec::DEFAULT_EXACT_LIMIT),
        Err(e) => Err(format!("SYMSPEC_EXACT_LIMIT: {e}")),
    }
}

fn parse_eps(text: &str) -> Result<Exact, String> {
    let eps = Exact::from_str(text)
        .map_err(|e| format!("--eps expects a rational like 1/3 or 0: {e}"))?;
    if eps < Exact::from_integer(0.into()) {
        return Err(format!("--eps must be nonnegative, got {text}"));
    }
    Ok(eps)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze {
            spec,
            eps,
            json: _,
            csv,
            pdt_export,
            no_timestamp,
        } => {
            let parsed =
                parse_function_spec(&spec).map_err(|e| format!("spec {spec:?}: {e}"))?;
            let f = parsed.to_function();
            let opts = AnalysisOptions {
                epsilon: eps.as_deref().map(parse_eps).transpose()?,
                exact_limit: exact_limit_from_env()?,
            };
            let row = analyze(&f, &parsed.to_string(), &opts).map_err(|e| e.to_string())?;

            if let Some(path) = pdt_export {
                let tree = build_pdt(&f);
                let text = export_pdt(&tree).map_err(|e| e.to_string())?;
                std::fs::write(&path, text)
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }

            let generated_at = (!no_timestamp).then(now_rfc3339);
            if csv {
                let mut out = String::new();
                if let Some(ts) = &generated_at {
                    out.push_str("# generated_at: ");
                    out.push_str(ts);
                    out.push('\n');
                }
                out.push_str(CSV_HEADER);
                out.push('\n');
                out.push_str(&csv_row(&row));
                out.push('\n');
                emit(&out)?;
            } else {
                let doc = AnalysisDocument {
                    generated_at,
                    row: &row,
                };
                let mut text =
                    serde_json::to_string_pretty(&doc).expect("rows always serialize");
                text.push('\n');
                emit(&text)?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep {
            n,
            mode,
            workers,
            out,
            no_timestamp,
        } => {
            let options = SweepOptions {
                n,
                mode,
                workers,
                exact_limit: exact_limit_from_env()?,
                generated_at: (!no_timestamp).then(now_rfc3339),
            };
            let result = run_sweep(&options).map_err(|e| e.to_string())?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &result.text)
                        .map_err(|e| format!("writing {}: {e}", path.display()))?;
                    eprintln!("wrote {} rows to {}", result.rows, path.display());
                }
                None => emit(&result.text)?,
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            n_max,
            inject_fault,
        } => {
            let report = run_verify(n_max, inject_fault).map_err(|e| e.to_string())?;
            let mut text =
                serde_json::to_string_pretty(&report).expect("reports always serialize");
            text.push('\n');
            emit(&text)?;
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                for check in report.checks.iter().filter(|c| !c.pass) {
                    match &check.counterexample {
                        Some(pattern) => {
                            eprintln!("FAIL {}: counterexample {}", check.name, pattern)
                        }
                        None => eprintln!("FAIL {}: {}", check.name, check.detail),
                    }
                }
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
