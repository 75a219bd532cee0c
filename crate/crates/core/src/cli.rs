//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification suite records a
//! violation, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{stability_constants, FunctionalParams, QuantityBundle};
use crate::optimizer::{mass_sweep, minimize_f, MinimizeReport, OptimizerSettings};
use crate::sets::GaussianSet;
use crate::verify::{emit_report, render_report, run_suite, ReportFormat, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gaussian-iso", version, about = "Gaussian isoperimetric quantities and stability checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// `default` (the constants of [`stability_constants`]) or an explicit
/// positive number. `paper` is accepted as a synonym of `default`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Coefficient {
    Default,
    Value(f64),
}

impl FromStr for Coefficient {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "default" || s == "paper" {
            return Ok(Self::Default);
        }
        s.parse::<f64>().map(Self::Value).map_err(|_| format!("expected a number or `default`, got {s:?}"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every quantity of a set given as a JSON descriptor.
    Eval {
        /// Descriptor such as '{"type":"halfspace","omega":[1],"s":-1}', or
        /// @FILE to read it from a file.
        #[arg(long)]
        set: String,
    },
    /// Run a verification suite on a random corpus.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Corpus size.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
        format: String,
        /// Override the stability constant c.
        #[arg(long)]
        constant: Option<f64>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
    },
    /// Minimize the penalized functional over unions of intervals.
    Minimize {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value = "default", allow_negative_numbers = true)]
        eps: Coefficient,
        #[arg(long, default_value = "default", allow_negative_numbers = true)]
        lambda: Coefficient,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
    },
    /// Deficit, asymmetry and their ratio along the two-ray family.
    Sweep {
        /// Negative levels separated by commas or spaces.
        #[arg(long, default_value = "-3,-5,-10,-15,-20", allow_hyphen_values = true)]
        s_list: String,
    },
}

#[derive(Serialize)]
struct MinimizeOutput<'a> {
    s: f64,
    eps: f64,
    lambda: f64,
    k_max: usize,
    report: &'a MinimizeReport,
}

fn with_pool<T: Send>(jobs: u16, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(usize::from(jobs))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}

fn parse_levels(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("not a number in level list: {t:?}"))))
        .collect()
}

fn read_descriptor(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source }),
        None => Ok(arg.to_string()),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let io = |source| Error::Io { path: "<stdout>".into(), source };
    match command {
        Command::Eval { set } => {
            let set = GaussianSet::from_json(&read_descriptor(&set)?)?;
            let bundle = QuantityBundle::compute(&set)?;
            out.write_all(pretty(&bundle).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, samples, seed, out: path, format, constant, jobs } => {
            let mut config = SuiteConfig { samples, seed, ..Default::default() };
            if let Some(c) = constant {
                config.c = c;
            }
            let report = with_pool(jobs, || run_suite(&suite, &config))??;
            let format: ReportFormat = format.parse()?;
            match path {
                Some(path) => emit_report(&report, &path, format)?,
                None => out.write_all(render_report(&report, format).as_bytes()).map_err(io)?,
            }
            for c in &report.checks {
                let status = if c.passed() { "ok" } else { "FAILED" };
                writeln!(err, "{status:>6}  {:<28} {:>7} samples {:>5} violations", c.name, c.samples, c.violations)
                    .map_err(io)?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Minimize { s, eps, lambda, kmax, starts, seed, jobs } => {
            let k = stability_constants(s);
            let eps = match eps {
                Coefficient::Default => k.eps,
                Coefficient::Value(v) => v,
            };
            let lambda = match lambda {
                Coefficient::Default => k.lambda_pen,
                Coefficient::Value(v) => v,
            };
            let params = FunctionalParams::new(s, eps, lambda)?;
            let settings = OptimizerSettings { multistarts: starts, seed, ..Default::default() };
            let report = with_pool(jobs, || minimize_f(s, &params, kmax, &settings))??;
            let output = MinimizeOutput { s, eps, lambda, k_max: kmax, report: &report };
            out.write_all(pretty(&output).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Sweep { s_list } => {
            let rows = mass_sweep(&parse_levels(&s_list)?)?;
            out.write_all(pretty(&rows).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
