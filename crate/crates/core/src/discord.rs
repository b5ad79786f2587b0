//! Closed-form correlations of z-aligned X states.
//!
//! Measurement is always performed on qubit B. For a projective measurement
//! along Pauli axis k the conditional states of A have Bloch vectors
//!
//! * z (S1): `(r ± c3) / (1 ± s)` with outcome probabilities `(1 ± s) / 2`
//! * x (S2): `±c1 x̂ + r ẑ` with probabilities ½
//! * y (S3): `±c2 ŷ + r ẑ` with probabilities ½
//!
//! A qubit with Bloch length `t` has entropy `1 + f(t)`, which gives
//!
//! ```text
//! S1 = 1 + (1+s)/2 · f((r+c3)/(1+s)) + (1-s)/2 · f((r-c3)/(1-s))
//! S2 = 1 + f(√(r² + c1²))
//! S3 = 1 + f(√(r² + c2²))
//! ```
//!
//! and the classical correlation is `S(ρ_A) − min{S1, S2, S3}`.

use std::fmt;

use crate::channels::{evolve_params, ChannelAtTime, NoiseKind};
use crate::error::{Error, Result};
use crate::states::{BellDiagonalParams, XStateParams};

/// Tolerance on |t| − 1 accepted by [`f`].
pub const F_DOMAIN_TOL: f64 = 1e-12;
/// Negative discord or classical correlation above `-CLIP_TOL` is rounded to zero.
pub const CLIP_TOL: f64 = 1e-10;

// Bloch lengths of physical states may overshoot 1 by round-off in the
// eigenvalue tolerance; they are clamped before entering `f`.
const BLOCH_OVERSHOOT_TOL: f64 = 1e-8;
const DEGENERATE_WEIGHT: f64 = 1e-14;

/// f(t) = −(1+t)/2 log₂(1+t) − (1−t)/2 log₂(1−t)
pub fn f(t: f64) -> Result<f64> {
    if t.is_nan() || t.abs() > 1.0 + F_DOMAIN_TOL {
        return Err(Error::OutOfDomain(t));
    }
    Ok(f_unchecked(t.clamp(-1.0, 1.0)))
}

fn f_unchecked(t: f64) -> f64 {
    let xlnx = |w: f64, ln_w: f64| if w > 0.0 { w * ln_w } else { 0.0 };
    let plus = xlnx(1.0 + t, t.ln_1p());
    let minus = xlnx(1.0 - t, (-t).ln_1p());
    -(plus + minus) / (2.0 * std::f64::consts::LN_2)
}

fn f_bloch(length: f64) -> Result<f64> {
    if length.abs() > 1.0 + BLOCH_OVERSHOOT_TOL {
        return Err(Error::OutOfDomain(length));
    }
    Ok(f_unchecked(length.clamp(-1.0, 1.0)))
}

/// Measurement branch on qubit B: S1 ↔ σ3, S2 ↔ σ1, S3 ↔ σ2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    S1,
    S2,
    S3,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::S1, Branch::S2, Branch::S3];

    pub fn index(&self) -> usize {
        match self {
            Branch::S1 => 0,
            Branch::S2 => 1,
            Branch::S3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::S1 => "S1",
            Branch::S2 => "S2",
            Branch::S3 => "S3",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First index of the minimum; ties go to the lowest index.
pub fn argmin_branch(s: [f64; 3]) -> Branch {
    let mut best = 0;
    for i in 1..3 {
        if s[i] < s[best] {
            best = i;
        }
    }
    Branch::ALL[best]
}

/// Conditional entropies (S1, S2, S3) of A after measuring B along z, x, y.
pub fn branch_entropies(p: &XStateParams) -> Result<[f64; 3]> {
    let (r, s, [c1, c2, c3]) = (p.r(), p.s(), p.c());

    let outcome = |sign: f64| -> Result<f64> {
        let weight = 0.5 * (1.0 + sign * s);
        let numerator = r + sign * c3;
        if weight < DEGENERATE_WEIGHT {
            if numerator.abs() > CLIP_TOL {
                return Err(Error::Degenerate(format!(
                    "s = {s} leaves outcome {sign:+} impossible but r {} c3 = {numerator}",
                    if sign > 0.0 { "+" } else { "-" }
                )));
            }
            return Ok(0.0);
        }
        Ok(weight * f_bloch(numerator / (2.0 * weight))?)
    };

    let s1 = 1.0 + outcome(1.0)? + outcome(-1.0)?;
    let s2 = 1.0 + f_bloch(r.hypot(c1))?;
    let s3 = 1.0 + f_bloch(r.hypot(c2))?;
    Ok([s1, s2, s3])
}

/// Mutual information, classical correlation, and discord at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationBreakdown {
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub argmin_branch: Branch,
    /// Set when a slightly negative discord was rounded up to zero.
    pub discord_clipped: bool,
}

impl CorrelationBreakdown {
    /// Builds the breakdown from the three entropies S(ρ_A), S(ρ_B), S(ρ_AB)
    /// and the branch conditional entropies.
    pub fn from_entropies(s_a: f64, s_b: f64, s_ab: f64, branches: [f64; 3]) -> Self {
        let argmin = argmin_branch(branches);
        let min = branches[argmin.index()];
        let mutual_info = s_a + s_b - s_ab;
        let mut classical = s_a - min;
        if classical < 0.0 && classical > -CLIP_TOL {
            classical = 0.0;
        }
        let mut discord = mutual_info - classical;
        let mut discord_clipped = false;
        if discord < 0.0 && discord > -CLIP_TOL {
            discord = 0.0;
            discord_clipped = true;
        }
        Self {
            mutual_info,
            classical,
            discord,
            s1: branches[0],
            s2: branches[1],
            s3: branches[2],
            argmin_branch: argmin,
            discord_clipped,
        }
    }

    pub fn branches(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn min_branch_entropy(&self) -> f64 {
        self.branches()[self.argmin_branch.index()]
    }
}

/// Closed-form correlations of an X state.
pub fn correlations(p: &XStateParams) -> Result<CorrelationBreakdown> {
    let branches = branch_entropies(p)?;
    let s_a = 1.0 + f_bloch(p.r())?;
    let s_b = 1.0 + f_bloch(p.s())?;
    let s_ab = p
        .closed_form_eigenvalues()
        .into_probabilities()?
        .entropy_bits();
    Ok(CorrelationBreakdown::from_entropies(
        s_a, s_b, s_ab, branches,
    ))
}

/// Phase noise on a Bell-diagonal state, through χ = max{|γc1|, |γc2|, |c3|}.
pub fn phase_noise_correlations(
    p0: &BellDiagonalParams,
    ch: &ChannelAtTime,
) -> Result<CorrelationBreakdown> {
    if ch.kind() != NoiseKind::Phase {
        return Err(Error::InvalidChannel(format!(
            "phase-noise correlations called with a {} channel",
            ch.kind()
        )));
    }
    let gamma = ch.control();
    let [c1, c2, c3] = p0.c();
    let transverse = [gamma * c1, gamma * c2];
    let chi = transverse[0].abs().max(transverse[1].abs()).max(c3.abs());

    let evolved = evolve_params(&p0.to_x_state(), ch)?;
    let joint = evolved.closed_form_eigenvalues().into_probabilities()?;
    // I = 2 + Σ λ log₂ λ, C = −f(χ)
    let mutual_info = 2.0 - joint.entropy_bits();
    let classical = -f_bloch(chi)?;
    let branches = [
        1.0 + f_bloch(c3)?,
        1.0 + f_bloch(transverse[0])?,
        1.0 + f_bloch(transverse[1])?,
    ];
    let mut discord = mutual_info - classical;
    let mut discord_clipped = false;
    if discord < 0.0 && discord > -CLIP_TOL {
        discord = 0.0;
        discord_clipped = true;
    }
    Ok(CorrelationBreakdown {
        mutual_info,
        classical,
        discord,
        s1: branches[0],
        s2: branches[1],
        s3: branches[2],
        argmin_branch: argmin_branch(branches),
        discord_clipped,
    })
}
