//! Correlation curves over time and detection of sudden changes in their decay.
//!
//! A sudden change is a switch of the minimizing measurement branch
//! (argmin of S1, S2, S3). Both the classical correlation and the discord
//! contain min{S_i}, so a branch switch puts a kink in both curves. All times
//! are in the dimensionless product τt.

use rayon::prelude::*;

use crate::channels::{evolve_params, ChannelAtTime, NoiseKind};
use crate::discord::{argmin_branch, branch_entropies, correlations, Branch, CorrelationBreakdown};
use crate::error::{Error, Result};
use crate::states::XStateParams;

/// Default grid: 1001 uniform points on τt ∈ [0, 3].
pub const DEFAULT_GRID: (f64, f64, usize) = (0.0, 3.0, 1001);
/// Bisection stops once the bracket is narrower than this (in τt).
pub const BISECTION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Classical,
    Discord,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Classical => "classical",
            Quantity::Discord => "discord",
        }
    }
}

/// A switch of the minimizing branch between two grid points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuddenChangeEvent {
    pub tau_t: f64,
    pub branch_before: Branch,
    pub branch_after: Branch,
    /// One-sided finite-difference slope (bits per unit τt) just before the switch.
    pub left_slope: f64,
    pub right_slope: f64,
    /// Curve whose slopes are reported: the one with the larger slope jump.
    pub quantity: Quantity,
    /// Slope jump at or below the threshold.
    pub weak: bool,
}

impl SuddenChangeEvent {
    pub fn slope_jump(&self) -> f64 {
        (self.right_slope - self.left_slope).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventSettings {
    /// Minimum |right − left| slope (bits per unit τt) for a non-weak event.
    pub slope_threshold: f64,
    /// Branches within this many bits of the minimum count as tied; a tie
    /// never unseats the current branch.
    pub tie_tolerance: f64,
}

impl Default for EventSettings {
    fn default() -> Self {
        Self {
            slope_threshold: 1e-3,
            tie_tolerance: 1e-12,
        }
    }
}

/// Correlations of a noisy state sampled on a τt grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub kind: NoiseKind,
    pub tau: f64,
    pub initial: XStateParams,
    /// Scaled times τt, strictly increasing.
    pub grid: Vec<f64>,
    /// η, γ, or p at each grid point.
    pub controls: Vec<f64>,
    pub rows: Vec<CorrelationBreakdown>,
    pub events: Vec<SuddenChangeEvent>,
}

impl SweepResult {
    pub fn column(&self, quantity: Quantity) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match quantity {
                Quantity::Classical => r.classical,
                Quantity::Discord => r.discord,
            })
            .collect()
    }

    pub fn strong_events(&self) -> impl Iterator<Item = &SuddenChangeEvent> {
        self.events.iter().filter(|e| !e.weak)
    }
}

/// `points` evenly spaced values from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {points}"
        )));
    }
    if !(min.is_finite() && max.is_finite()) || min < 0.0 || max <= min {
        return Err(Error::InvalidGrid(format!(
            "need 0 <= min < max, got [{min}, {max}]"
        )));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                max
            } else {
                min + step * i as f64
            }
        })
        .collect())
}

pub fn default_grid() -> Vec<f64> {
    let (lo, hi, n) = DEFAULT_GRID;
    uniform_grid(lo, hi, n).expect("default grid is valid")
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidGrid(
            "grid times must be finite and non-negative".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Closed-form correlations of `p0` after the channel acts for `tau_t`.
pub fn correlations_at(
    p0: &XStateParams,
    kind: NoiseKind,
    tau: f64,
    tau_t: f64,
) -> Result<CorrelationBreakdown> {
    let ch = ChannelAtTime::at_scaled_time(kind, tau, tau_t)?;
    correlations(&evolve_params(p0, &ch)?)
}

fn branches_at(p0: &XStateParams, kind: NoiseKind, tau: f64, tau_t: f64) -> Result<[f64; 3]> {
    let ch = ChannelAtTime::at_scaled_time(kind, tau, tau_t)?;
    branch_entropies(&evolve_params(p0, &ch)?)
}

/// Evaluates correlations on every grid point and detects branch switches.
/// Event times are refined by bisection inside the grid cell.
pub fn sweep(p0: &XStateParams, kind: NoiseKind, tau: f64, grid: &[f64]) -> Result<SweepResult> {
    sweep_with(p0, kind, tau, grid, &EventSettings::default())
}

pub fn sweep_with(
    p0: &XStateParams,
    kind: NoiseKind,
    tau: f64,
    grid: &[f64],
    settings: &EventSettings,
) -> Result<SweepResult> {
    validate_grid(grid)?;
    let evaluated = grid
        .par_iter()
        .map(|&tau_t| {
            let ch = ChannelAtTime::at_scaled_time(kind, tau, tau_t)?;
            Ok((ch.control(), correlations(&evolve_params(p0, &ch)?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (controls, rows): (Vec<f64>, Vec<CorrelationBreakdown>) = evaluated.into_iter().unzip();

    let mut events = if grid.len() >= 3 {
        detect_events(grid, &rows, settings)
    } else {
        Vec::new()
    };
    for event in events.iter_mut() {
        let cell = grid.partition_point(|&t| t < event.tau_t).max(1);
        let lo = grid[cell - 1];
        let hi = grid[cell.min(grid.len() - 1)];
        if let Ok(t) = bisect_branches(
            p0,
            kind,
            tau,
            (lo, hi),
            event.branch_before,
            event.branch_after,
        ) {
            event.tau_t = t;
        }
    }

    Ok(SweepResult {
        kind,
        tau,
        initial: *p0,
        grid: grid.to_vec(),
        controls,
        rows,
        events,
    })
}

fn slope(grid: &[f64], ys: &[f64], a: usize, b: usize) -> f64 {
    (ys[b] - ys[a]) / (grid[b] - grid[a])
}

/// Branch switches along a completed sweep.
///
/// The tracked branch changes only when it exceeds the minimum by more than
/// `tie_tolerance`; a tie on the first row is resolved by the following row.
/// Event times are linear-interpolation estimates inside the grid cell.
pub fn detect_events(
    grid: &[f64],
    rows: &[CorrelationBreakdown],
    settings: &EventSettings,
) -> Vec<SuddenChangeEvent> {
    assert_eq!(grid.len(), rows.len(), "grid and rows must align");
    let n = rows.len();
    if n < 3 {
        return Vec::new();
    }
    let tol = settings.tie_tolerance;
    let tied = |row: &CorrelationBreakdown| -> Vec<Branch> {
        let m = row.min_branch_entropy();
        Branch::ALL
            .into_iter()
            .filter(|b| row.branches()[b.index()] - m <= tol)
            .collect()
    };

    let mut current = {
        let candidates = tied(&rows[0]);
        let next = rows[1].branches();
        *candidates
            .iter()
            .min_by(|a, b| next[a.index()].total_cmp(&next[b.index()]).then(a.cmp(b)))
            .expect("minimum branch is always tied with itself")
    };

    let classical: Vec<f64> = rows.iter().map(|r| r.classical).collect();
    let discord: Vec<f64> = rows.iter().map(|r| r.discord).collect();

    let mut events = Vec::new();
    for i in 1..n {
        let row = &rows[i];
        let values = row.branches();
        if values[current.index()] - row.min_branch_entropy() <= tol {
            continue;
        }
        let next = argmin_branch(values);

        let g0 = rows[i - 1].branches()[current.index()] - rows[i - 1].branches()[next.index()];
        let g1 = values[current.index()] - values[next.index()];
        let frac = if g1 > g0 {
            (-g0 / (g1 - g0)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        let tau_t = grid[i - 1] + frac * (grid[i] - grid[i - 1]);

        let (la, lb) = if i >= 2 { (i - 2, i - 1) } else { (i - 1, i) };
        let (ra, rb) = if i + 1 < n { (i, i + 1) } else { (i - 1, i) };
        let jump = |ys: &[f64]| (slope(grid, ys, la, lb), slope(grid, ys, ra, rb));
        let (cl, cr) = jump(&classical);
        let (dl, dr) = jump(&discord);
        let (quantity, left_slope, right_slope) = if (cr - cl).abs() > (dr - dl).abs() {
            (Quantity::Classical, cl, cr)
        } else {
            (Quantity::Discord, dl, dr)
        };

        events.push(SuddenChangeEvent {
            tau_t,
            branch_before: current,
            branch_after: next,
            left_slope,
            right_slope,
            quantity,
            weak: (right_slope - left_slope).abs() <= settings.slope_threshold,
        });
        current = next;
    }
    events
}

fn bisect_branches(
    p0: &XStateParams,
    kind: NoiseKind,
    tau: f64,
    bracket: (f64, f64),
    before: Branch,
    after: Branch,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let gap = |t: f64| -> Result<f64> {
        let s = branches_at(p0, kind, tau, t)?;
        Ok(s[before.index()] - s[after.index()])
    };
    if !(gap(lo)? < 0.0 && gap(hi)? > 0.0) {
        return Err(Error::NoSignChange(bracket.0, bracket.1));
    }
    while hi - lo >= BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scaled time τt at which the minimizing branch changes inside `bracket` (in τt).
///
/// The branches minimal at the two ends must differ strictly (no tie at
/// either end); bisection runs on their entropy difference.
pub fn locate_transition(
    p0: &XStateParams,
    kind: NoiseKind,
    tau: f64,
    bracket: (f64, f64),
) -> Result<f64> {
    let (lo, hi) = bracket;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidGrid(format!("empty bracket [{lo}, {hi}]")));
    }
    let before = argmin_branch(branches_at(p0, kind, tau, lo)?);
    let after = argmin_branch(branches_at(p0, kind, tau, hi)?);
    if before == after {
        return Err(Error::NoSignChange(lo, hi));
    }
    bisect_branches(p0, kind, tau, bracket, before, after)
}

/// τt at which depolarizing noise fully mixes qubit A: 1 − 4p/3 = 0 with
/// p = 1 − e^{−τt}, i.e. τt = ln 4.
pub fn depolarizing_zero_time(p0: &XStateParams) -> Result<f64> {
    let [c1, c2, c3] = p0.c();
    if p0.r() == 0.0 && c1 == 0.0 && c2 == 0.0 && c3 == 0.0 {
        return Err(Error::Degenerate(
            "state carries no correlations or A polarization to depolarize".into(),
        ));
    }
    Ok(4f64.ln())
}
