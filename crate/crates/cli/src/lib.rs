//! Command-line front end for exact real-root isolation by the method of
//! cascades.
//!
//! [`run`] parses arguments, dispatches to a subcommand and returns what
//! should be printed together with the process exit code, so the whole tool
//! can be exercised in-process.

pub mod commands;
pub mod parse;
pub mod render;
pub mod replay;
pub mod report;

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::commands::{MethodArg, RefineRequest};
use crate::parse::{parse_interval, parse_polynomial, parse_rational};
use crate::render::DEFAULT_DIGITS;
use crate::report::{CommandError, CommandOutput, ExitStatus, RunReport, VERSION};

/// JSON Schema every `--json` report conforms to.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Parser)]
#[command(
    name = "cascades",
    version,
    about = "Exact real-root isolation for rational polynomials by Rolle's method of cascades"
)]
pub struct Cli {
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Fractional digits in decimal renderings
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS as u32, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    pub digits: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PolyArg {
    /// Polynomial, e.g. "x^4 - 24x^3 + 198x^2 - 648x + 473" or "473,-648,198,-24,1"
    #[arg(allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    /// Bracketing interval "lo,hi"
    #[arg(long, allow_hyphen_values = true)]
    pub interval: String,

    /// Target enclosure width, e.g. 1e-20 or 1/1000
    #[arg(long, default_value = "1e-30")]
    pub tol: String,

    /// Iteration limit for false position and Newton
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Great and small hypotheses and Newton's bound
    Bounds(PolyArg),
    /// The cascade chain and the ascent through it
    Cascades(PolyArg),
    /// Isolate the real roots
    Isolate {
        #[command(flatten)]
        poly: PolyArg,
        /// Only the positive roots
        #[arg(long)]
        positive_only: bool,
    },
    /// Refine one bracketed root
    Refine {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        interval: IntervalArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Bisect)]
        method: MethodArg,
        /// Include every step
        #[arg(long)]
        trace: bool,
    },
    /// Check root/derivative interleaving and all certificates
    Certify(PolyArg),
    /// Replay Rolle's worked quartic against the published values
    Replay,
    /// Run all refinement methods on the same bracket
    Compare {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        interval: IntervalArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::Cascades(_) => "cascades",
            Command::Isolate { .. } => "isolate",
            Command::Refine { .. } => "refine",
            Command::Certify(_) => "certify",
            Command::Replay => "replay",
            Command::Compare { .. } => "compare",
        }
    }

    fn poly_text(&self) -> Option<&str> {
        match self {
            Command::Bounds(p) | Command::Cascades(p) | Command::Certify(p) => Some(&p.poly),
            Command::Isolate { poly, .. } | Command::Refine { poly, .. } | Command::Compare { poly, .. } => {
                Some(&poly.poly)
            }
            Command::Replay => None,
        }
    }
}

/// Everything a run prints, and its exit code.
#[derive(Debug, Clone)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    /// The structured report, when a subcommand ran.
    pub report: Option<Value>,
}

fn refine_request(args: &IntervalArgs, trace: bool) -> Result<RefineRequest, CommandError> {
    let (lo, hi) = parse_interval(&args.interval)?;
    let tol = parse_rational(&args.tol)?;
    Ok(RefineRequest {
        lo,
        hi,
        tol,
        max_iter: args.max_iter,
        trace,
    })
}

fn dispatch(command: &Command, digits: usize) -> (Option<String>, Result<CommandOutput, CommandError>) {
    let poly = match command.poly_text().map(parse_polynomial) {
        None => None,
        Some(Ok(p)) => Some(p),
        Some(Err(e)) => return (None, Err(e.into())),
    };
    let input = poly.as_ref().map(ToString::to_string);
    let p = || poly.as_ref().expect("command takes a polynomial");
    let out = match command {
        Command::Bounds(_) => commands::bounds(p(), digits),
        Command::Cascades(_) => commands::cascades(p(), digits),
        Command::Isolate { positive_only, .. } => commands::isolate(p(), *positive_only, digits),
        Command::Refine {
            interval,
            method,
            trace,
            ..
        } => refine_request(interval, *trace).and_then(|req| commands::refine(p(), *method, &req, digits)),
        Command::Certify(_) => commands::certify(p(), digits),
        Command::Replay => replay::replay(digits),
        Command::Compare { interval, .. } => {
            refine_request(interval, false).and_then(|req| commands::compare(p(), &req, digits))
        }
    };
    (input, out)
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let rendered = e.render().to_string();
            return Execution {
                stdout: if informational { rendered.clone() } else { String::new() },
                stderr: if informational { String::new() } else { rendered },
                code: if informational { 0 } else { ExitStatus::Usage.code() },
                report: None,
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Execution {
    let start = Instant::now();
    let (input, outcome) = dispatch(&cli.command, cli.digits as usize);
    let timing_ms = start.elapsed().as_secs_f64() * 1000.0;
    let (results, text, status, error) = match outcome {
        Ok(out) => (Ok(out.results), out.text, out.status, None),
        Err(e) => {
            let message = e.to_string();
            (
                Err((e.kind().to_string(), message.clone())),
                String::new(),
                e.status(),
                Some(format!("error: {message}\n")),
            )
        }
    };
    let report = RunReport {
        command: cli.command.name().to_string(),
        input: input.clone(),
        results,
        timing_ms,
        version: VERSION.to_string(),
    }
    .to_json();
    let stdout = if cli.json {
        format!("{}\n", serde_json::to_string_pretty(&report).expect("serialisable"))
    } else if error.is_none() {
        match &input {
            Some(p) => format!("p = {p}\n{text}"),
            None => text,
        }
    } else {
        String::new()
    };
    Execution {
        stdout,
        stderr: error.unwrap_or_default(),
        code: status.code(),
        report: Some(report),
    }
}
