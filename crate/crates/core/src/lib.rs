//! Single-photon frequency conversion in a four-level atomic medium under
//! slow-light conditions.
//!
//! Two weak quantum fields at carriers ω₁ and ω₂ are coupled through
//! dressed atomic coherences. The crate computes the regime parameters,
//! propagates photon envelopes at three levels of approximation and
//! extracts efficiencies and time-bin qubit transfer.
//!
//! Everything is generic over the scalar type ([`Real`]: `f32` or `f64`).
//! The root re-exports `f64` aliases for direct use:
//!
//! ```
//! use qfc_core::{AtomicSystem, DriveConfig, Medium, CouplingConvention};
//! use std::f64::consts::PI;
//!
//! let atoms = AtomicSystem::new(
//!     2.0 * PI * 6e6, 2.0 * PI * 6e6, 2.0 * PI * 5.75e6,
//!     780e-9, 1.47e-6, 0.96, 1.1265437122289514e19, 1.6e-3,
//! ).unwrap();
//! let omega = 2.0 * PI * 600e6;
//! let drive = DriveConfig::resonant(omega, 3.0 * omega).unwrap();
//! let medium = Medium::new(atoms, drive, CouplingConvention::default()).unwrap();
//! assert!((medium.params.beta_l() - PI / 2.0).abs() < 1e-6);
//! ```

// NaN-rejecting guards are written as `!(x > 0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod coherence;
pub mod constants;
pub mod error;
pub mod physics;
pub mod propagation;
pub mod scalar;
pub mod signals;
pub mod spectral;

pub use error::{Error, Result};
pub use propagation::Tier;
pub use scalar::{Real, Shortest};
pub use signals::Carrier;

pub type AtomicSystem = physics::AtomicSystem<f64>;
pub type DriveConfig = physics::DriveConfig<f64>;
pub type CouplingConvention = physics::CouplingConvention<f64>;
pub type DerivedParams = physics::DerivedParams<f64>;
pub type Thresholds = physics::Thresholds<f64>;
pub type RegimeReport = physics::RegimeReport<f64>;
pub type TimeGrid = signals::TimeGrid<f64>;
pub type PulseEnvelope = signals::PulseEnvelope<f64>;
pub type TimeBinQubit = signals::TimeBinQubit<f64>;
pub type CoherenceState = coherence::CoherenceState<f64>;
pub type CoherenceParams = coherence::CoherenceParams<f64>;
pub type Medium = propagation::Medium<f64>;
pub type PropagationGrid = propagation::PropagationGrid<f64>;
pub type FieldHistory = propagation::FieldHistory<f64>;
pub type TierComparison = propagation::TierComparison<f64>;
pub type ConversionResult = analysis::ConversionResult<f64>;
pub type QubitTransferResult = analysis::QubitTransferResult<f64>;
pub type Complex64 = num_complex::Complex<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type AtomicSystem = crate::physics::AtomicSystem<f32>;
    pub type DriveConfig = crate::physics::DriveConfig<f32>;
    pub type DerivedParams = crate::physics::DerivedParams<f32>;
    pub type TimeGrid = crate::signals::TimeGrid<f32>;
    pub type PulseEnvelope = crate::signals::PulseEnvelope<f32>;
    pub type Medium = crate::propagation::Medium<f32>;
    pub type PropagationGrid = crate::propagation::PropagationGrid<f32>;
    pub type FieldHistory = crate::propagation::FieldHistory<f32>;
}
