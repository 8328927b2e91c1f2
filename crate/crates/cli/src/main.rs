use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use formality_cli::commands::{self, EXIT_ERROR};
use formality_cli::doc::{CliError, Overrides};
use formality_cli::{corpus, report, verify};
use formality_core::rational::parse_rational;
use formality_core::Rational;
use serde_json::{json, Value};

/// Exact formality certificates for cdgas and truncated dg operads.
///
/// Exit codes: 0 formal certified, 10 non-formal certified, 20 inconclusive, 1 input error.
#[derive(Parser)]
#[command(name = "formality", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Window {
    /// Degree window N (overrides the document).
    #[arg(long = "truncate")]
    truncate: Option<u32>,
    /// Arity window for operads (overrides the document).
    #[arg(long = "max-arity")]
    max_arity: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the formality criterion and print a certificate report.
    Analyze {
        /// Input document, or the name of a corpus file.
        file: String,
        #[arg(long, value_parser = rational, allow_negative_numbers = true)]
        q: Option<Rational>,
        #[command(flatten)]
        window: Window,
        /// TOML file with a [sigma] table replacing the document's.
        #[arg(long)]
        sigma: Option<String>,
        /// Ignore any supplied sigma and search for a diagonal lift.
        #[arg(long, conflicts_with = "sigma")]
        search: bool,
        /// Human-readable rendering instead of JSON.
        #[arg(long)]
        pretty: bool,
        /// Include wall-clock time (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Print the minimal model as a loadable document.
    MinimalModel {
        file: String,
        #[command(flatten)]
        window: Window,
    },
    /// Triple Massey product of three cocycles.
    Massey {
        file: String,
        x: String,
        y: String,
        z: String,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        pretty: bool,
    },
    /// Grading action on the Gerstenhaber operad, or the twist scalars.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Re-check the certificate in an analyze report without any search.
    Verify {
        file: String,
        report: String,
        #[arg(long)]
        pretty: bool,
    },
    /// List the shipped corpus, or print one document.
    Corpus { name: Option<String> },
}

#[derive(Subcommand)]
enum Demo {
    Gerstenhaber {
        #[arg(long, value_parser = rational, allow_negative_numbers = true)]
        lambda: Rational,
        #[arg(long = "max-arity", default_value_t = 3)]
        max_arity: usize,
        #[arg(long = "truncate", default_value_t = 3)]
        truncate: u32,
        #[arg(long)]
        pretty: bool,
    },
    Twist {
        /// One value or a comma-separated list.
        #[arg(long, value_parser = rational, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        lambda: Vec<Rational>,
        #[arg(long)]
        pretty: bool,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read_input(file: &str) -> Result<String, CliError> {
    if Path::new(file).exists() {
        return std::fs::read_to_string(file).map_err(|e| CliError::input(format!("cannot read {file}: {e}")));
    }
    corpus::get(file)
        .map(str::to_string)
        .ok_or_else(|| CliError::input(format!("{file}: no such file or corpus entry")))
}

/// Writes to stdout; a closed pipe is not an error.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(v: &Value, pretty: bool) {
    if pretty {
        out(&report::render_text(v));
    } else {
        out(&(serde_json::to_string_pretty(v).expect("reports serialize") + "\n"));
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze { file, q, window, sigma, search, pretty, timing } => {
            let text = read_input(&file)?;
            let sigma_text = sigma.map(|s| read_input(&s)).transpose()?;
            let ov = Overrides { q, truncation: window.truncate, max_arity: window.max_arity, sigma_text, search };
            let (v, code) = commands::analyze(&text, &ov, timing)?;
            emit(&v, pretty);
            Ok(code)
        }
        Command::MinimalModel { file, window } => {
            let text = read_input(&file)?;
            let ov = Overrides { truncation: window.truncate, max_arity: window.max_arity, ..Default::default() };
            out(&commands::minimal_model_listing(&text, &ov)?);
            Ok(0)
        }
        Command::Massey { file, x, y, z, window, pretty } => {
            let text = read_input(&file)?;
            let ov = Overrides { truncation: window.truncate, max_arity: window.max_arity, ..Default::default() };
            emit(&commands::massey(&text, &ov, [&x, &y, &z])?, pretty);
            Ok(0)
        }
        Command::Demo { which: Demo::Gerstenhaber { lambda, max_arity, truncate, pretty } } => {
            emit(&commands::demo_gerstenhaber(&lambda, max_arity, truncate)?, pretty);
            Ok(0)
        }
        Command::Demo { which: Demo::Twist { lambda, pretty } } => {
            emit(&commands::demo_twist(&lambda), pretty);
            Ok(0)
        }
        Command::Verify { file, report: report_path, pretty } => {
            let text = read_input(&file)?;
            let raw = std::fs::read_to_string(&report_path)
                .map_err(|e| CliError::input(format!("cannot read {report_path}: {e}")))?;
            let value: Value =
                serde_json::from_str(&raw).map_err(|e| CliError::new("PARSE_ERROR", format!("{report_path}: {e}")))?;
            let out = verify::verify(&text, &value)?;
            let v = json!({
                "command": "verify",
                "verdict": out.verdict,
                "verified": out.verified(),
                "checks": out.checks.iter().map(|(k, ok)| json!({ "check": k, "ok": ok })).collect::<Vec<_>>(),
            });
            emit(&v, pretty);
            Ok(if out.verified() { 0 } else { EXIT_ERROR })
        }
        Command::Corpus { name: None } => {
            out(&corpus::names().map(|n| format!("{n}\n")).collect::<String>());
            Ok(0)
        }
        Command::Corpus { name: Some(n) } => {
            let text = corpus::get(&n).ok_or_else(|| CliError::input(format!("no corpus entry {n}")))?;
            out(text);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            out(&(serde_json::to_string_pretty(&json!({ "error": { "code": e.code, "message": e.message } })).unwrap() + "\n"));
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
