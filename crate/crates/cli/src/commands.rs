use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use xdiscord::dynamics::{uniform_grid, SweepResult, DEFAULT_GRID};
use xdiscord::{
    branch_entropies, correlations, evolve_params, min_conditional_entropy, sweep, ChannelAtTime,
    CorrelationBreakdown, NoiseKind, OracleConfig, XStateParams,
};

use crate::config::RunConfig;
use crate::format::{self, OracleColumns};
use crate::CliError;

/// Oracle deviations above this are flagged in the command summary.
pub const ORACLE_WARN_DEVIATION: f64 = 1e-6;

/// Points of the η axis in the S1/S3 panels of fig1.
pub const ETA_POINTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

fn oracle_columns(
    p: &XStateParams,
    analytic: &CorrelationBreakdown,
    config: &OracleConfig,
) -> Result<OracleColumns, CliError> {
    let minimum = min_conditional_entropy(&p.to_density_matrix(), config)?.value;
    Ok(OracleColumns {
        minimum,
        deviation: (analytic.min_branch_entropy() - minimum).abs(),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}

fn deviation_warnings(grid: &[f64], oracle: &[OracleColumns]) -> String {
    let mut out = String::new();
    for (t, o) in grid.iter().zip(oracle) {
        if o.deviation > ORACLE_WARN_DEVIATION {
            writeln!(
                out,
                "warning: oracle deviates from the closed form by {} at tau_t = {}",
                format::number(o.deviation),
                format::number(*t)
            )
            .unwrap();
        }
    }
    out
}

/// One CSV row for the configured state at the configured time.
pub fn point(cfg: &RunConfig) -> Result<String, CliError> {
    let (state, tau_t, control) = match cfg.channel {
        Some(kind) => {
            let ch = ChannelAtTime::at_scaled_time(kind, cfg.tau, cfg.time)?;
            (
                evolve_params(&cfg.state, &ch)?,
                cfg.time,
                Some(ch.control()),
            )
        }
        None if cfg.time == 0.0 => (cfg.state, 0.0, None),
        None => return Err(CliError::usage("a nonzero time needs a channel")),
    };
    let c = correlations(&state)?;
    let oracle = cfg
        .oracle
        .as_ref()
        .map(|o| oracle_columns(&state, &c, o))
        .transpose()?;
    let mut row = format::row(tau_t, control.unwrap_or(f64::NAN), &c, oracle);
    if control.is_none() {
        row = row.replacen(",nan,", ",,", 1);
    }
    let mut out = format!("{}\n{row}\n", format::header(oracle.is_some()));
    if let Some(o) = oracle {
        out.push_str(&deviation_warnings(&[tau_t], &[o]));
    }
    Ok(out)
}

fn run_sweep(
    state: &XStateParams,
    kind: NoiseKind,
    tau: f64,
    grid: &[f64],
    oracle: Option<&OracleConfig>,
) -> Result<(SweepResult, Option<Vec<OracleColumns>>), CliError> {
    let result = sweep(state, kind, tau, grid)?;
    let columns = oracle
        .map(|config| {
            grid.iter()
                .zip(&result.rows)
                .map(|(&t, row)| {
                    let evolved =
                        evolve_params(state, &ChannelAtTime::at_scaled_time(kind, tau, t)?)?;
                    oracle_columns(&evolved, row, config)
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .transpose()?;
    Ok((result, columns))
}

fn event_summary(label: &str, result: &SweepResult) -> String {
    let mut out = format!("{label}: {} event(s)\n", result.events.len());
    for e in &result.events {
        writeln!(out, "{}", format::event_line(e)).unwrap();
    }
    out
}

/// Returns `(stdout text, stderr text)`. Without an output path the CSV goes to stdout.
pub fn sweep_command(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let kind = cfg.channel.ok_or_else(|| {
        CliError::usage("sweep needs a channel (--channel or config key 'channel')")
    })?;
    let grid = cfg.grid_points();
    let (result, oracle) = run_sweep(&cfg.state, kind, cfg.tau, &grid, cfg.oracle.as_ref())?;
    let csv = format::sweep_csv(&result, oracle.as_deref());
    let warnings = oracle
        .map(|o| deviation_warnings(&grid, &o))
        .unwrap_or_default();
    match &cfg.out {
        Some(path) => {
            write_file(path, &csv)?;
            let label = path.display().to_string();
            Ok((event_summary(&label, &result), warnings))
        }
        None => Ok((
            csv,
            format!("{}{warnings}", event_summary("sweep", &result)),
        )),
    }
}

/// Settings shared by every curve of a figure.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureConfig {
    pub out_dir: PathBuf,
    pub grid: (f64, f64, usize),
    pub oracle: Option<OracleConfig>,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("figures"),
            grid: DEFAULT_GRID,
            oracle: None,
        }
    }
}

fn bell(c1: f64, c2: f64, c3: f64) -> XStateParams {
    XStateParams::new(0.0, 0.0, c1, c2, c3).expect("figure parameters are physical")
}

/// Sweeps drawn in each figure: file stem, channel, initial state.
pub fn figure_sweeps(id: FigureId) -> Vec<(&'static str, NoiseKind, XStateParams)> {
    use NoiseKind::*;
    match id {
        FigureId::Fig1 => vec![("fig1d", Amplitude, bell(0.1, 0.4, 0.5))],
        FigureId::Fig2 => vec![
            ("fig2_1", Phase, bell(0.1, 0.2, 0.3)),
            ("fig2_2", Phase, bell(0.1, 0.4, 0.2)),
            ("fig2_3", Phase, bell(0.2, 0.2, 0.0)),
        ],
        FigureId::Fig3 => vec![
            ("fig3_1", Depolarizing, bell(0.1, 0.2, 0.3)),
            ("fig3_2", Depolarizing, bell(0.1, 0.4, 0.3)),
            ("fig3_3", Depolarizing, bell(0.3, 0.2, 0.2)),
        ],
        FigureId::Fig4 => vec![
            (
                "fig4a",
                Depolarizing,
                XStateParams::new(0.1, -0.01, 0.1, 0.3, 0.4).expect("physical"),
            ),
            (
                "fig4c",
                Depolarizing,
                XStateParams::new(0.1, 0.01, 0.1, 0.4, 0.3).expect("physical"),
            ),
        ],
    }
}

/// S1 and S3 against η under amplitude noise, for the fig1 panels.
/// c1 is not given for panels (a) and (b); S1 and S3 do not depend on it.
pub fn fig1_eta_panels() -> Vec<(&'static str, XStateParams)> {
    vec![
        ("fig1a", bell(0.1, 0.5, 0.4)),
        ("fig1b", bell(0.1, 0.4, 0.4)),
        ("fig1c", bell(0.1, 0.4, 0.5)),
    ]
}

pub fn eta_panel_csv(p0: &XStateParams) -> Result<String, CliError> {
    let mut out = String::from("eta,s1,s3\n");
    for i in 1..=ETA_POINTS {
        let eta = i as f64 / ETA_POINTS as f64;
        let ch = ChannelAtTime::from_control(NoiseKind::Amplitude, 1.0, eta)?;
        let [s1, _, s3] = branch_entropies(&evolve_params(p0, &ch)?)?;
        writeln!(
            out,
            "{},{},{}",
            format::number(eta),
            format::number(s1),
            format::number(s3)
        )
        .unwrap();
    }
    Ok(out)
}

/// Writes one CSV per curve into the output directory and returns a summary.
pub fn figure(id: FigureId, cfg: &FigureConfig) -> Result<String, CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| {
        CliError::validation(format!("cannot create {}: {e}", cfg.out_dir.display()))
    })?;
    let mut summary = String::new();
    if id == FigureId::Fig1 {
        for (stem, p0) in fig1_eta_panels() {
            let path = cfg.out_dir.join(format!("{stem}.csv"));
            write_file(&path, &eta_panel_csv(&p0)?)?;
            writeln!(summary, "{}: S1 and S3 vs eta", path.display()).unwrap();
        }
    }
    let grid = uniform_grid(cfg.grid.0, cfg.grid.1, cfg.grid.2)
        .map_err(|e| CliError::usage(e.to_string()))?;
    for (stem, kind, p0) in figure_sweeps(id) {
        let (result, oracle) = run_sweep(&p0, kind, 1.0, &grid, cfg.oracle.as_ref())?;
        let path = cfg.out_dir.join(format!("{stem}.csv"));
        write_file(&path, &format::sweep_csv(&result, oracle.as_deref()))?;
        summary.push_str(&event_summary(&path.display().to_string(), &result));
        if let Some(o) = oracle {
            summary.push_str(&deviation_warnings(&grid, &o));
        }
    }
    Ok(summary)
}
