//! Brute-force minimization of the measured conditional entropy.
//!
//! Works from the raw 4×4 density matrix only: for every direction n on the
//! Bloch sphere of qubit B it forms the projectors Π± = (I ± n·σ)/2, the
//! unnormalized conditional states Tr_B[ρ (I ⊗ Π±)], and their entropies.
//! A coarse (θ, φ) grid is followed by local grid refinement around the
//! incumbent. Nothing here uses the closed-form branch entropies.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::discord::{argmin_branch, CorrelationBreakdown, CLIP_TOL};
use crate::error::Result;
use crate::linalg::{
    density_spectrum, hermitian_eigenvalues, partial_trace, tensor, ComplexMatrix, Subsystem,
};

/// Outcomes less likely than this contribute nothing.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;

/// Projective measurement axis n = (sinθ cosφ, sinθ sinφ, cosθ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementDirection {
    theta: f64,
    phi: f64,
}

impl MeasurementDirection {
    /// Any real angles are accepted and folded into θ ∈ [0, π], φ ∈ [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn x() -> Self {
        Self {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    pub fn y() -> Self {
        Self {
            theta: PI / 2.0,
            phi: PI / 2.0,
        }
    }

    /// Axis measured by branch S1, S2, S3 (z, x, y).
    pub fn pauli_axes() -> [Self; 3] {
        [Self::z(), Self::x(), Self::y()]
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Π± = (I ± n·σ)/2
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let [nx, ny, nz] = self.unit_vector();
        let make = |sign: f64| {
            let a = 0.5 * (1.0 + sign * nz);
            let d = 0.5 * (1.0 - sign * nz);
            let b = Complex64::new(0.5 * sign * nx, -0.5 * sign * ny);
            ComplexMatrix::from_row_major(
                2,
                vec![Complex64::new(a, 0.0), b, b.conj(), Complex64::new(d, 0.0)],
            )
            .expect("2x2 is supported")
        };
        [make(1.0), make(-1.0)]
    }

    /// Angle between this measurement axis and Pauli axis `k` (0 = x, 1 = y, 2 = z),
    /// treating n and −n as the same measurement.
    pub fn angle_to_axis(&self, k: usize) -> f64 {
        self.unit_vector()[k].abs().min(1.0).acos()
    }

    /// Smallest angle to any of the three Pauli axes.
    pub fn angle_to_nearest_axis(&self) -> f64 {
        (0..3)
            .map(|k| self.angle_to_axis(k))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Grid and refinement settings for the oracle search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub theta_points: usize,
    pub phi_points: usize,
    /// Refinement rounds always performed; more follow until a round improves by < `tolerance`.
    pub refine_rounds: usize,
    pub tolerance: f64,
    pub max_rounds: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            theta_points: 181,
            phi_points: 360,
            refine_rounds: 3,
            tolerance: 1e-10,
            max_rounds: 40,
        }
    }
}

/// Result of the direction search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleMinimum {
    pub value: f64,
    pub direction: MeasurementDirection,
}

/// A density matrix that passed validation, ready for repeated measurement.
struct Measured<'a> {
    rho: &'a ComplexMatrix,
    identity: ComplexMatrix,
}

impl<'a> Measured<'a> {
    fn new(rho: &'a ComplexMatrix) -> Result<Self> {
        density_spectrum(rho)?;
        Ok(Self {
            rho,
            identity: ComplexMatrix::identity(2)?,
        })
    }

    /// Σ_± p± S(ρ_A^±), computed as −Σ μ log₂(μ/p) over the eigenvalues μ of
    /// the unnormalized conditional state so tiny outcomes stay well conditioned.
    fn conditional_entropy(&self, dir: &MeasurementDirection) -> Result<f64> {
        let mut total = 0.0;
        for proj in dir.projectors() {
            let lifted = tensor(&self.identity, &proj)?;
            let mut reduced = partial_trace(&(self.rho * &lifted), Subsystem::A)?;
            let p = reduced.trace().re;
            if p < MIN_OUTCOME_PROBABILITY {
                continue;
            }
            // Tr_B[ρ (I⊗Π)] equals Tr_B[(I⊗Π) ρ (I⊗Π)], Hermitian up to round-off
            let herm = &reduced + &reduced.adjoint();
            reduced = herm.scale(Complex64::new(0.5, 0.0));
            let mu = hermitian_eigenvalues(&reduced)?.into_probabilities()?;
            total += mu
                .values()
                .iter()
                .filter(|&&m| m > 0.0)
                .map(|&m| -m * (m / p).log2())
                .sum::<f64>();
        }
        Ok(total)
    }
}

fn candidate_order(a: &OracleMinimum, b: &OracleMinimum) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.direction.theta.total_cmp(&b.direction.theta))
        .then(a.direction.phi.total_cmp(&b.direction.phi))
}

fn best_of(a: OracleMinimum, b: OracleMinimum) -> OracleMinimum {
    if candidate_order(&b, &a) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Conditional entropy of A (bits) after a projective measurement of B along `dir`.
pub fn conditional_entropy(rho: &ComplexMatrix, dir: &MeasurementDirection) -> Result<f64> {
    Measured::new(rho)?.conditional_entropy(dir)
}

/// Minimum of [`conditional_entropy`] over all measurement directions.
///
/// The returned value never exceeds any coarse-grid sample. Ties are broken by
/// (value, θ, φ), so the result does not depend on the parallel schedule.
pub fn min_conditional_entropy(
    rho: &ComplexMatrix,
    config: &OracleConfig,
) -> Result<OracleMinimum> {
    let measured = Measured::new(rho)?;
    let n_theta = config.theta_points.max(2);
    let n_phi = config.phi_points.max(1);
    let d_theta = PI / (n_theta - 1) as f64;
    let d_phi = 2.0 * PI / n_phi as f64;

    let evaluate = |theta: f64, phi: f64| -> Result<OracleMinimum> {
        let direction = MeasurementDirection::new(theta, phi);
        Ok(OracleMinimum {
            value: measured.conditional_entropy(&direction)?,
            direction,
        })
    };

    let coarse = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * d_theta;
            let mut best: Option<OracleMinimum> = None;
            for j in 0..n_phi {
                let cand = evaluate(theta, j as f64 * d_phi)?;
                best = Some(match best {
                    Some(b) => best_of(b, cand),
                    None => cand,
                });
            }
            Ok(best.expect("at least one azimuth"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut incumbent = coarse
        .into_iter()
        .reduce(best_of)
        .expect("at least two polar samples");

    const HALF: i32 = 3;
    let (mut h_theta, mut h_phi) = (d_theta, d_phi);
    for round in 0..config.max_rounds {
        let before = incumbent.value;
        let centre = incumbent.direction;
        for a in -HALF..=HALF {
            for b in -HALF..=HALF {
                if a == 0 && b == 0 {
                    continue;
                }
                let cand = evaluate(
                    centre.theta + h_theta * a as f64 / HALF as f64,
                    centre.phi + h_phi * b as f64 / HALF as f64,
                )?;
                incumbent = best_of(incumbent, cand);
            }
        }
        h_theta /= 3.0;
        h_phi /= 3.0;
        if round + 1 >= config.refine_rounds && before - incumbent.value < config.tolerance {
            break;
        }
    }
    Ok(incumbent)
}

/// Correlations from entropies of the raw matrix and the oracle minimum.
///
/// `s1`, `s2`, `s3` hold the conditional entropies along z, x, y.
pub fn oracle_correlations(
    rho: &ComplexMatrix,
    config: &OracleConfig,
) -> Result<CorrelationBreakdown> {
    let (breakdown, _) = oracle_correlations_with_direction(rho, config)?;
    Ok(breakdown)
}

/// As [`oracle_correlations`], also returning the minimizing direction.
pub fn oracle_correlations_with_direction(
    rho: &ComplexMatrix,
    config: &OracleConfig,
) -> Result<(CorrelationBreakdown, OracleMinimum)> {
    let measured = Measured::new(rho)?;
    let s_ab = density_spectrum(rho)?.entropy_bits();
    let s_a = density_spectrum(&partial_trace(rho, Subsystem::A)?)?.entropy_bits();
    let s_b = density_spectrum(&partial_trace(rho, Subsystem::B)?)?.entropy_bits();

    let mut fixed = [0.0; 3];
    for (slot, dir) in fixed.iter_mut().zip(MeasurementDirection::pauli_axes()) {
        *slot = measured.conditional_entropy(&dir)?;
    }
    let minimum = min_conditional_entropy(rho, config)?;

    let mutual_info = s_a + s_b - s_ab;
    let mut classical = s_a - minimum.value;
    if classical < 0.0 && classical > -CLIP_TOL {
        classical = 0.0;
    }
    let mut discord = mutual_info - classical;
    let mut discord_clipped = false;
    if discord < 0.0 && discord > -CLIP_TOL {
        discord = 0.0;
        discord_clipped = true;
    }
    let breakdown = CorrelationBreakdown {
        mutual_info,
        classical,
        discord,
        s1: fixed[0],
        s2: fixed[1],
        s3: fixed[2],
        argmin_branch: argmin_branch(fixed),
        discord_clipped,
    };
    Ok((breakdown, minimum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{evolve_params, ChannelAtTime, NoiseKind};
    use crate::discord::{branch_entropies, correlations, f};
    use crate::states::XStateParams;
    use approx::assert_abs_diff_eq;

    fn fast() -> OracleConfig {
        OracleConfig {
            theta_points: 37,
            phi_points: 72,
            ..OracleConfig::default()
        }
    }

    fn x(r: f64, s: f64, c1: f64, c2: f64, c3: f64) -> ComplexMatrix {
        XStateParams::new(r, s, c1, c2, c3)
            .unwrap()
            .to_density_matrix()
    }

    #[test]
    fn projectors_are_idempotent_and_complete() {
        for &(t, p) in &[(0.0, 0.0), (0.3, 1.7), (PI / 2.0, PI), (2.9, 5.5)] {
            let [plus, minus] = MeasurementDirection::new(t, p).projectors();
            assert!((&plus * &plus).max_abs_diff(&plus) < 1e-12);
            assert!((&minus * &minus).max_abs_diff(&minus) < 1e-12);
            assert!((&plus + &minus).max_abs_diff(&ComplexMatrix::identity(2).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn direction_folding() {
        let d = MeasurementDirection::new(-0.4, 0.2);
        let e = MeasurementDirection::new(0.4, 0.2 + PI);
        for (a, b) in d.unit_vector().iter().zip(e.unit_vector()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(d.theta() >= 0.0 && d.theta() <= PI);
        assert!(MeasurementDirection::new(1.0, -0.1).phi() < 2.0 * PI);
        assert_abs_diff_eq!(
            MeasurementDirection::x().angle_to_nearest_axis(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn maximally_mixed_has_one_bit_everywhere() {
        let rho = x(0.0, 0.0, 0.0, 0.0, 0.0);
        for &(t, p) in &[(0.0, 0.0), (1.0, 2.0), (2.5, 4.0)] {
            let h = conditional_entropy(&rho, &MeasurementDirection::new(t, p)).unwrap();
            assert_abs_diff_eq!(h, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bell_state_conditional_states_are_pure() {
        let rho = x(0.0, 0.0, 1.0, -1.0, 1.0);
        for &(t, p) in &[(0.0, 0.0), (1.0, 2.0), (2.5, 4.0)] {
            let h = conditional_entropy(&rho, &MeasurementDirection::new(t, p)).unwrap();
            assert_abs_diff_eq!(h, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn pauli_axes_reproduce_branch_entropies() {
        for p in [
            XStateParams::new(0.1, 0.01, 0.1, 0.4, 0.3).unwrap(),
            XStateParams::new(0.1, -0.01, 0.1, 0.3, 0.4).unwrap(),
            XStateParams::new(-0.4671, 0.0, 0.073, 0.292, 0.26645).unwrap(),
            XStateParams::new(0.2, -0.3, -0.25, 0.1, 0.35).unwrap(),
        ] {
            let rho = p.to_density_matrix();
            let s = branch_entropies(&p).unwrap();
            for (k, dir) in MeasurementDirection::pauli_axes().iter().enumerate() {
                let h = conditional_entropy(&rho, dir).unwrap();
                assert_abs_diff_eq!(h, s[k], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn product_state_minimum_is_local_entropy() {
        let ra = ComplexMatrix::from_row_major(
            2,
            vec![
                Complex64::new(0.7, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.3, 0.0),
            ],
        )
        .unwrap();
        let rb = ComplexMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let rho = tensor(&ra, &rb).unwrap();
        let s_a = density_spectrum(&ra).unwrap().entropy_bits();
        let min = min_conditional_entropy(&rho, &fast()).unwrap();
        assert_abs_diff_eq!(min.value, s_a, epsilon = 1e-10);
    }

    #[test]
    fn bell_diagonal_minimum_sits_on_largest_coefficient_axis() {
        let rho = x(0.0, 0.0, 0.1, 0.4, 0.2);
        let min = min_conditional_entropy(&rho, &fast()).unwrap();
        assert_abs_diff_eq!(min.value, 1.0 + f(0.4).unwrap(), epsilon = 1e-10);
        assert!(min.direction.angle_to_axis(1) < 1e-3, "{:?}", min.direction);
    }

    #[test]
    fn amplitude_evolved_state_agrees_with_closed_form() {
        let p0 = XStateParams::new(0.0, 0.0, 0.1, 0.4, 0.5).unwrap();
        let ch = ChannelAtTime::from_control(NoiseKind::Amplitude, 1.0, 0.9).unwrap();
        let p = evolve_params(&p0, &ch).unwrap();
        let min = min_conditional_entropy(&p.to_density_matrix(), &fast()).unwrap();
        let analytic = correlations(&p).unwrap().min_branch_entropy();
        assert!((min.value - analytic).abs() < 1e-6);
    }

    #[test]
    fn oracle_breakdown_anchors() {
        let zero = oracle_correlations(&x(0.0, 0.0, 0.0, 0.0, 0.0), &fast()).unwrap();
        assert_abs_diff_eq!(zero.mutual_info, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(zero.classical, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(zero.discord, 0.0, epsilon = 1e-12);

        let bell = oracle_correlations(&x(0.0, 0.0, 1.0, -1.0, 1.0), &fast()).unwrap();
        assert_abs_diff_eq!(bell.mutual_info, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(bell.classical, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(bell.discord, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn azimuthal_symmetry_when_transverse_coefficients_match() {
        let rho = x(0.1, 0.05, 0.3, 0.3, 0.2);
        for &theta in &[0.3, 1.1, 2.0] {
            let base = conditional_entropy(&rho, &MeasurementDirection::new(theta, 0.0)).unwrap();
            for &phi in &[0.7, 2.2, 4.9] {
                let h = conditional_entropy(&rho, &MeasurementDirection::new(theta, phi)).unwrap();
                assert_abs_diff_eq!(h, base, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let rho = x(0.1, -0.01, 0.1, 0.3, 0.4);
        let a = min_conditional_entropy(&rho, &fast()).unwrap();
        let b = min_conditional_entropy(&rho, &fast()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.direction, b.direction);
    }

    #[test]
    fn invalid_matrix_is_rejected() {
        let bad = ComplexMatrix::diagonal(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(conditional_entropy(&bad, &MeasurementDirection::z()).is_err());
        assert!(oracle_correlations(&bad, &fast()).is_err());
    }
}
