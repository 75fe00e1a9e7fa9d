//! Command-line driver. A [`ScenarioConfig`] is built from per-command
//! defaults, an optional `key = value` config file and the flags, in that
//! order; [`execute`] runs it and [`emit`] serialises the [`RunReport`].
//!
//! Exit codes: `0` when every check passes, `1` for usage and validation
//! errors, `2` for numerical failures and failed checks.

mod config;
mod report;
mod run;

use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::error::Error;

pub use config::{OutputFormat, Scenario, ScenarioConfig, Spin, KEYS};
pub use report::{emit, Check, ErrorEstimate, RunReport, SCHEMA};
pub use run::execute;

#[derive(Parser, Debug)]
#[command(name = "cusp-edge", version, about = "Scenario runs for Dirac operators on cusp edge spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Clifford supertrace identities
    Clifford {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Compose index families read from a file
    Indexsets {
        #[command(subcommand)]
        action: ComposeAction,
    },
    /// Verify the lifts of vector fields to the blown-up spaces
    Blowup {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Heat-equation residuals of the model kernels
    Kernels {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Cusp Dirac spectrum, mode by mode
    Spectrum,
    /// Index prediction against the measured heat supertrace
    Index,
    /// Eta invariant of a twisted circle
    Eta,
    /// Signature prediction with a circle fiber
    Signature,
    /// Pushforward expansion of a synthetic density
    Pushforward {
        #[command(subcommand)]
        action: DemoAction,
    },
}

#[derive(Subcommand, Debug)]
enum CheckAction {
    Check,
}

#[derive(Subcommand, Debug)]
enum ComposeAction {
    Compose,
}

#[derive(Subcommand, Debug)]
enum VerifyAction {
    Verify,
}

#[derive(Subcommand, Debug)]
enum DemoAction {
    Demo,
}

/// Flags are kept as text and go through [`ScenarioConfig::set`], like
/// config file entries.
#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    f: Option<String>,
    #[arg(long, global = true)]
    b: Option<String>,
    /// periodic or antiperiodic
    #[arg(long, global = true)]
    spin: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    twist: Option<String>,
    #[arg(long, global = true)]
    modes: Option<String>,
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    xmax: Option<String>,
    #[arg(long, global = true)]
    tmin: Option<String>,
    #[arg(long, global = true)]
    tmax: Option<String>,
    #[arg(long, global = true)]
    tpoints: Option<String>,
    #[arg(long, global = true)]
    count: Option<String>,
    #[arg(long, global = true)]
    tolerance: Option<String>,
    #[arg(long = "semigroup-tolerance", global = true)]
    semigroup_tolerance: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    /// fiber form degree
    #[arg(long = "N", global = true)]
    degree: Option<String>,
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true)]
    file: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    interior: Option<String>,
    /// json, csv or text
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true)]
    config: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let all = [
            ("k", &self.k),
            ("f", &self.f),
            ("b", &self.b),
            ("spin", &self.spin),
            ("twist", &self.twist),
            ("modes", &self.modes),
            ("grid", &self.grid),
            ("xmax", &self.xmax),
            ("tmin", &self.tmin),
            ("tmax", &self.tmax),
            ("tpoints", &self.tpoints),
            ("count", &self.count),
            ("tolerance", &self.tolerance),
            ("semigroup_tolerance", &self.semigroup_tolerance),
            ("samples", &self.samples),
            ("N", &self.degree),
            ("preset", &self.preset),
            ("file", &self.file),
            ("interior", &self.interior),
            ("output", &self.output),
            ("seed", &self.seed),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

impl Command {
    fn scenario(&self) -> Scenario {
        match self {
            Command::Clifford { .. } => Scenario::CliffordCheck,
            Command::Indexsets { .. } => Scenario::IndexsetsCompose,
            Command::Blowup { .. } => Scenario::BlowupVerify,
            Command::Kernels { .. } => Scenario::KernelsCheck,
            Command::Spectrum => Scenario::Spectrum,
            Command::Index => Scenario::Index,
            Command::Eta => Scenario::Eta,
            Command::Signature => Scenario::Signature,
            Command::Pushforward { .. } => Scenario::PushforwardDemo,
        }
    }
}

/// Exit code for an error: `1` when the input is at fault, `2` when the
/// computation is.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::DimensionMismatch { .. }
        | Error::Resource(_)
        | Error::Divergent(_)
        | Error::Unsupported(_)
        | Error::Parse { .. } => 1,
        Error::Numerical(_) | Error::ConventionMismatch { .. } | Error::ExpansionMismatch { .. } => 2,
    }
}

/// Parses `argv` (program name first) into a config: defaults, then the
/// config file, then the flags.
pub fn parse_args<I, T>(argv: I) -> Result<ScenarioConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let mut cfg = ScenarioConfig::defaults(cli.command.scenario());
    let fail = |e: Error| clap::Error::raw(ErrorKind::ValueValidation, format!("{e}\n"));
    if let Some(path) = &cli.flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| clap::Error::raw(ErrorKind::Io, format!("cannot read {path}: {e}\n")))?;
        cfg.apply_file(&text).map_err(fail)?;
    }
    for (key, value) in cli.flags.pairs() {
        cfg.set(key, value).map_err(fail)?;
    }
    Ok(cfg)
}

/// Runs the driver, writing the report to `out` and diagnostics to `err`,
/// and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let start = Instant::now();
    let result = execute(&cfg);
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(mut report) => {
            report.wall_time = Some(elapsed);
            let _ = write!(out, "{}", emit(&report, cfg.output));
            let _ = writeln!(err, "{} finished in {elapsed:.3} s (seed {})", cfg.command, cfg.seed);
            if report.passed() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
