//! Command-line front end for the `xdiscord` library: single-point
//! evaluations, time sweeps written as CSV, and the data behind the four
//! reference figures.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation or physicality error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod format;

use commands::{FigureConfig, FigureId};
use config::{RunConfig, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Usage,
    Validation,
    Numerical,
}

impl ExitKind {
    pub fn code(self) -> u8 {
        match self {
            ExitKind::Usage => 1,
            ExitKind::Validation => 2,
            ExitKind::Numerical => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Usage,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Validation,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<xdiscord::Error> for CliError {
    fn from(e: xdiscord::Error) -> Self {
        use xdiscord::Error::*;
        let kind = match e {
            Completeness(_) | OutOfDomain(_) | NoSignChange(..) => ExitKind::Numerical,
            _ => ExitKind::Validation,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "xdiscord",
    version,
    about = "Classical correlation and discord of two-qubit X states under noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlations of one state at one time, as a one-row CSV
    Point(PointArgs),
    /// Correlations over a time grid, with sudden-change events
    Sweep(RunArgs),
    /// Write the curves of a reference figure, one CSV per curve
    Figure(FigureArgs),
}

#[derive(Debug, Default, Args)]
pub struct OracleArgs {
    /// Cross-check against a brute-force search over measurement directions
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_name = "N")]
    pub oracle_theta_points: Option<String>,
    #[arg(long, value_name = "N")]
    pub oracle_phi_points: Option<String>,
    #[arg(long, value_name = "N")]
    pub oracle_refine_rounds: Option<String>,
}

impl OracleArgs {
    fn apply(&self, s: &mut Settings) {
        if self.oracle {
            s.set("oracle", "true");
        }
        let knobs = [
            ("oracle_theta_points", &self.oracle_theta_points),
            ("oracle_phi_points", &self.oracle_phi_points),
            ("oracle_refine_rounds", &self.oracle_refine_rounds),
        ];
        for (key, value) in knobs {
            if let Some(v) = value {
                s.set(key, v.clone());
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat key = value file; flags override its entries
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Initial state r,s,c1,c2,c3 (or c1,c2,c3 for Bell-diagonal)
    #[arg(long, value_name = "R,S,C1,C2,C3", allow_hyphen_values = true)]
    pub state: Option<String>,
    /// amplitude, phase, or depolarizing
    #[arg(long, value_name = "NAME")]
    pub channel: Option<String>,
    /// Decay rate
    #[arg(long, value_name = "X")]
    pub tau: Option<String>,
    /// Time grid in units of tau*t
    #[arg(long, value_name = "MIN:MAX:N")]
    pub grid: Option<String>,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Output file (standard output if absent)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Evaluation time in units of tau*t
    #[arg(long, value_name = "TAU_T")]
    pub time: Option<String>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "figures")]
    pub out: PathBuf,
    /// Time grid in units of tau*t
    #[arg(long, value_name = "MIN:MAX:N")]
    pub grid: Option<String>,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let overrides = [
            ("state", &self.state),
            ("channel", &self.channel),
            ("tau", &self.tau),
            ("grid", &self.grid),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                s.set(key, v.clone());
            }
        }
        if let Some(out) = &self.out {
            s.set("out", out.display().to_string());
        }
        self.oracle.apply(&mut s);
        Ok(s)
    }
}

impl FigureArgs {
    fn config(&self) -> Result<FigureConfig, CliError> {
        let mut s = Settings::default();
        self.oracle.apply(&mut s);
        let oracle = if self.oracle.oracle {
            Some(config::oracle_config(&s)?)
        } else {
            None
        };
        Ok(FigureConfig {
            out_dir: self.out.clone(),
            grid: self
                .grid
                .as_deref()
                .map(config::parse_grid)
                .transpose()?
                .unwrap_or(xdiscord::dynamics::DEFAULT_GRID),
            oracle,
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(
                e.kind(),
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(stdout, "{}", e.render());
                return if e.kind() == DisplayHelpOnMissingArgumentOrSubcommand {
                    Err(CliError::usage("missing subcommand"))
                } else {
                    Ok(())
                };
            }
            let text = e.render().to_string();
            let text = text.trim().trim_start_matches("error: ");
            return Err(CliError::usage(text));
        }
    };
    let io = |e: std::io::Error| CliError::validation(format!("cannot write output: {e}"));
    match cli.command {
        Command::Point(args) => {
            let mut s = args.run.settings()?;
            if let Some(t) = &args.time {
                s.set("time", t.clone());
            }
            let cfg = RunConfig::from_settings(&s)?;
            let text = commands::point(&cfg)?;
            match &cfg.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| {
                    CliError::validation(format!("cannot write {}: {e}", path.display()))
                })?,
                None => stdout.write_all(text.as_bytes()).map_err(io)?,
            }
        }
        Command::Sweep(args) => {
            let cfg = RunConfig::from_settings(&args.settings()?)?;
            let (out, err) = commands::sweep_command(&cfg)?;
            stdout.write_all(out.as_bytes()).map_err(io)?;
            stderr.write_all(err.as_bytes()).map_err(io)?;
        }
        Command::Figure(args) => {
            let summary = commands::figure(args.id, &args.config()?)?;
            stdout.write_all(summary.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}
