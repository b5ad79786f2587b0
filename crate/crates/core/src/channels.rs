//! Single-qubit noise acting on qubit A.
//!
//! Each channel is parameterized by a decay rate `tau` and elapsed time `t`;
//! only the product `tau * t` enters the Kraus operators.
//!
//! | kind          | control                | Kraus set                                   |
//! |---------------|------------------------|---------------------------------------------|
//! | amplitude     | η = exp(−τt/2)         | diag(η, 1), √(1−η²)·|1⟩⟨0|                   |
//! | phase         | γ = exp(−τt/2)         | diag(1, γ), diag(0, √(1−γ²))                 |
//! | depolarizing  | p = 1 − exp(−τt)       | √(1−p)·I, √(p/3)·σ1, √(p/3)·σ2, √(p/3)·σ3     |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix};
use crate::states::XStateParams;

/// Completeness tolerance accepted by [`apply`].
pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    Amplitude,
    Phase,
    Depolarizing,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 3] = [
        NoiseKind::Amplitude,
        NoiseKind::Phase,
        NoiseKind::Depolarizing,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::Amplitude => "amplitude",
            NoiseKind::Phase => "phase",
            NoiseKind::Depolarizing => "depolarizing",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "amplitude" => Ok(NoiseKind::Amplitude),
            "phase" => Ok(NoiseKind::Phase),
            "depolarizing" => Ok(NoiseKind::Depolarizing),
            other => Err(Error::InvalidChannel(format!(
                "unknown channel '{other}', expected amplitude | phase | depolarizing"
            ))),
        }
    }
}

/// A noise channel frozen at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelAtTime {
    kind: NoiseKind,
    tau: f64,
    t: f64,
}

impl ChannelAtTime {
    pub fn new(kind: NoiseKind, tau: f64, t: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidChannel(format!(
                "decay rate must be positive, got {tau}"
            )));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidChannel(format!(
                "time must be non-negative, got {t}"
            )));
        }
        let ch = Self { kind, tau, t };
        let x = ch.control();
        let in_range = match kind {
            NoiseKind::Amplitude | NoiseKind::Phase => x > 0.0 && x <= 1.0,
            NoiseKind::Depolarizing => (0.0..1.0).contains(&x),
        };
        if !in_range {
            return Err(Error::InvalidChannel(format!(
                "tau*t = {} drives the {kind} control parameter out of range ({x})",
                tau * t
            )));
        }
        Ok(ch)
    }

    /// Channel at the dimensionless time `tau_t = τ·t`.
    pub fn at_scaled_time(kind: NoiseKind, tau: f64, tau_t: f64) -> Result<Self> {
        Self::new(kind, tau, tau_t / tau)
    }

    /// Channel whose control parameter (η, γ, or p) equals `value`.
    pub fn from_control(kind: NoiseKind, tau: f64, value: f64) -> Result<Self> {
        let tau_t = match kind {
            NoiseKind::Amplitude | NoiseKind::Phase => {
                if !(value > 0.0 && value <= 1.0) {
                    return Err(Error::InvalidChannel(format!(
                        "{kind} control {value} not in (0, 1]"
                    )));
                }
                -2.0 * value.ln()
            }
            NoiseKind::Depolarizing => {
                if !(0.0..1.0).contains(&value) {
                    return Err(Error::InvalidChannel(format!(
                        "depolarizing p = {value} not in [0, 1)"
                    )));
                }
                -(-value).ln_1p()
            }
        };
        Self::at_scaled_time(kind, tau, tau_t)
    }

    #[inline]
    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    #[inline]
    pub fn tau_t(&self) -> f64 {
        self.tau * self.t
    }

    /// η for amplitude, γ for phase, p for depolarizing.
    pub fn control(&self) -> f64 {
        match self.kind {
            NoiseKind::Amplitude | NoiseKind::Phase => (-0.5 * self.tau_t()).exp(),
            NoiseKind::Depolarizing => -(-self.tau_t()).exp_m1(),
        }
    }

    /// Shrink factor 1 − 4p/3 applied to every Pauli component of qubit A
    /// by the depolarizing channel.
    pub fn depolarizing_factor(&self) -> f64 {
        // 1 - 4p/3 = (4 e^{-τt} - 1) / 3
        (4.0 * (-self.tau_t()).exp() - 1.0) / 3.0
    }

    /// Single-qubit Kraus operators.
    pub fn kraus_single_qubit(&self) -> Vec<ComplexMatrix> {
        let real2 = |v: [f64; 4]| ComplexMatrix::from_real(2, &v).expect("2x2 is supported");
        match self.kind {
            NoiseKind::Amplitude => {
                let eta = self.control();
                let jump = (1.0 - eta * eta).max(0.0).sqrt();
                vec![real2([eta, 0.0, 0.0, 1.0]), real2([0.0, 0.0, jump, 0.0])]
            }
            NoiseKind::Phase => {
                let gamma = self.control();
                let lost = (1.0 - gamma * gamma).max(0.0).sqrt();
                vec![real2([1.0, 0.0, 0.0, gamma]), real2([0.0, 0.0, 0.0, lost])]
            }
            NoiseKind::Depolarizing => {
                let p = self.control();
                let keep = Complex64::new((1.0 - p).sqrt(), 0.0);
                let flip = Complex64::new((p / 3.0).sqrt(), 0.0);
                vec![
                    ComplexMatrix::pauli(0).scale(keep),
                    ComplexMatrix::pauli(1).scale(flip),
                    ComplexMatrix::pauli(2).scale(flip),
                    ComplexMatrix::pauli(3).scale(flip),
                ]
            }
        }
    }

    /// Two-qubit Kraus operators `K ⊗ I` acting on qubit A.
    pub fn kraus_on_qubit_a(&self) -> Vec<ComplexMatrix> {
        lift_to_qubit_a(&self.kraus_single_qubit()).expect("single-qubit Kraus operators are 2x2")
    }
}

/// max |Σ K†K − I| entry.
pub fn completeness_error(ks: &[ComplexMatrix]) -> Result<f64> {
    let dim = ks
        .first()
        .ok_or_else(|| Error::Shape("empty Kraus set".into()))?
        .dim();
    let mut sum = ComplexMatrix::zeros(dim)?;
    for k in ks {
        if k.dim() != dim {
            return Err(Error::Shape("Kraus operators differ in shape".into()));
        }
        sum = &sum + &(&k.adjoint() * k);
    }
    Ok(sum.max_abs_diff(&ComplexMatrix::identity(dim)?))
}

/// `K ↦ K ⊗ I₂` for each single-qubit operator.
pub fn lift_to_qubit_a(ks: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let id = ComplexMatrix::identity(2)?;
    ks.iter()
        .map(|k| {
            if k.dim() != 2 {
                return Err(Error::Shape(format!(
                    "expected a 2x2 Kraus operator, got {0}x{0}",
                    k.dim()
                )));
            }
            tensor(k, &id)
        })
        .collect()
}

/// ρ ↦ Σ K ρ K†
pub fn apply(ks: &[ComplexMatrix], rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let err = completeness_error(ks)?;
    if err > COMPLETENESS_TOL {
        return Err(Error::Completeness(err));
    }
    if ks[0].dim() != rho.dim() {
        return Err(Error::Shape(format!(
            "Kraus operators are {0}x{0} but the state is {1}x{1}",
            ks[0].dim(),
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(rho.dim())?;
    for k in ks {
        out = &out + &rho.conjugated_by(k);
    }
    Ok(out)
}

/// Closed-form image of an X state under the channel.
///
/// Amplitude and phase noise are defined for Bell-diagonal inputs only;
/// depolarizing noise also accepts local Bloch components (r shrinks, s is untouched).
pub fn evolve_params(p0: &XStateParams, ch: &ChannelAtTime) -> Result<XStateParams> {
    let [c1, c2, c3] = p0.c();
    match ch.kind() {
        NoiseKind::Amplitude => {
            require_bell_diagonal(p0, ch.kind())?;
            let eta = ch.control();
            let eta2 = eta * eta;
            XStateParams::new(eta2 - 1.0, 0.0, eta * c1, eta * c2, eta2 * c3)
        }
        NoiseKind::Phase => {
            require_bell_diagonal(p0, ch.kind())?;
            let gamma = ch.control();
            XStateParams::new(0.0, 0.0, gamma * c1, gamma * c2, c3)
        }
        NoiseKind::Depolarizing => {
            let k = ch.depolarizing_factor();
            XStateParams::new(k * p0.r(), p0.s(), k * c1, k * c2, k * c3)
        }
    }
}

fn require_bell_diagonal(p0: &XStateParams, kind: NoiseKind) -> Result<()> {
    if p0.is_bell_diagonal() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{kind} noise parameter map needs a Bell-diagonal input, got r = {}, s = {}",
            p0.r(),
            p0.s()
        )))
    }
}

/// Full Kraus-conjugation route: lift, conjugate, read the parameters back.
pub fn evolve_via_kraus(p0: &XStateParams, ch: &ChannelAtTime) -> Result<XStateParams> {
    let rho = apply(&ch.kraus_on_qubit_a(), &p0.to_density_matrix())?;
    XStateParams::from_density_matrix(&rho)
}
