//! Special functions, quadrature and seeded sampling used by the models.

pub mod bessel;
pub mod laguerre;
pub mod quadrature;
pub mod sampler;
pub mod wavefunction;

pub use bessel::bessel_j0;
pub use laguerre::{assoc_laguerre, laguerre, MAX_DEGREE};
pub use quadrature::{integrate, integrate_pieces, QuadratureSpec};
pub use sampler::{derive_seed, sample_rayleigh, SeededSampler};
pub use wavefunction::{ho_wavefunction, ho_wavefunctions};
