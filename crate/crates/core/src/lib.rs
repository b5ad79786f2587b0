//! Classical correlation and quantum discord of two-qubit X states under
//! single-qubit amplitude, phase, and depolarizing noise.
//!
//! The closed-form pipeline runs entirely on [`XStateParams`]:
//! a channel maps the five parameters in closed form ([`evolve_params`]),
//! and [`correlations`] evaluates mutual information, classical correlation,
//! and discord from the three measurement branches S1, S2, S3.
//! [`oracle`] re-derives the same quantities from the raw density matrix by
//! brute-force search over measurement directions, and [`dynamics`] tracks
//! branch switches (sudden changes of the decay rate) along time sweeps.

pub mod channels;
pub mod discord;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod states;

pub use channels::{
    apply, evolve_params, evolve_via_kraus, lift_to_qubit_a, ChannelAtTime, NoiseKind,
};
pub use discord::{
    branch_entropies, correlations, f, phase_noise_correlations, Branch, CorrelationBreakdown,
};
pub use dynamics::{
    depolarizing_zero_time, detect_events, locate_transition, sweep, EventSettings, Quantity,
    SuddenChangeEvent, SweepResult,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum, Subsystem};
pub use oracle::{
    min_conditional_entropy, oracle_correlations, MeasurementDirection, OracleConfig,
};
pub use states::{BellDiagonalParams, XStateParams};
