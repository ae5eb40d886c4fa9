//! Fringe visibility of a trapped ion probing an optical standing wave.
//!
//! Three descriptions of the same measurement are implemented side by side:
//!
//! * [`spatial`]: the ion's position density acts as an apparatus function
//!   convolved with the point-probe fringe.
//! * [`doppler`]: the oscillating ion phase-modulates the two interfering
//!   partial waves.
//! * [`quantum`]: photon recoil leaves which-way information in the motional
//!   state.
//!
//! All three give `V = exp(-2 (k sigma)^2)` for a thermal state. [`analysis`]
//! inverts that relation, fits sampled fringes and cross-checks the models.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`). The aliases below
//! fix `f64`, which is what the accuracy targets in the tests assume.
//!
//! ```
//! use ionscope::{analysis, spatial};
//!
//! let lambda = 493e-9;
//! let k = ionscope::domain::wavenumber_from_wavelength(lambda).unwrap();
//! let v = spatial::visibility_gaussian(k, 32e-9).unwrap();
//! let sigma: f64 = analysis::sigma_from_visibility(v, lambda).unwrap();
//! assert!((sigma - 32e-9).abs() < 1e-20);
//! ```

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod analysis;
pub mod domain;
pub mod doppler;
pub mod error;
pub mod numerics;
pub mod quantum;
pub mod scalar;
pub mod spatial;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type StandingWaveField = domain::StandingWaveField<f64>;
pub type TrapState = domain::TrapState<f64>;
pub type LambDicke = domain::LambDicke<f64>;
pub type ExperimentPreset = domain::ExperimentPreset<f64>;
pub type FringeSignal = domain::FringeSignal<f64>;
pub type PositionDensity = spatial::PositionDensity<f64>;
pub type ClassicalOscillation = doppler::ClassicalOscillation<f64>;
pub type QuadratureSpec = numerics::QuadratureSpec<f64>;
pub type FitResult = analysis::FitResult<f64>;
pub type CrossCheckParams = analysis::CrossCheckParams<f64>;
pub type CrossCheckConfig = analysis::CrossCheckConfig<f64>;
pub type VisibilityReport = analysis::VisibilityReport<f64>;
pub type WhichWayReport = quantum::WhichWayReport<f64>;

pub type StandingWaveFieldF32 = domain::StandingWaveField<f32>;
pub type TrapStateF32 = domain::TrapState<f32>;
pub type PositionDensityF32 = spatial::PositionDensity<f32>;
pub type QuadratureSpecF32 = numerics::QuadratureSpec<f32>;
