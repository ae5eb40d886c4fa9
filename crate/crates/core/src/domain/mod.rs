//! Physical parameter types and derived quantities shared by every model.
//!
//! Everything is SI: meters, kilograms, radians per second. Unit conversion
//! for human-facing input happens at the CLI boundary only.

mod preset;
mod signal;

pub use preset::{ExperimentPreset, PresetName, SignalKind};
pub use signal::{FringeSignal, PositionAxis, SignalModel};

use crate::error::{Error, Result};
use crate::numerics::MAX_DEGREE;
use crate::scalar::Scalar;

/// CODATA 2018 constants.
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Planck constant, J s.
    pub const PLANCK: f64 = 6.626_070_15e-34;
    /// Unified atomic mass unit, kg.
    pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
    /// Speed of light in vacuum, m/s.
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
}

/// Geometric tail mass that thermal sums are allowed to drop.
pub const THERMAL_TAIL: f64 = 1e-12;

fn require_positive<T: Scalar>(name: &str, value: T) -> Result<T> {
    if value > T::zero() && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

fn require_non_negative<T: Scalar>(name: &str, value: T) -> Result<T> {
    if value >= T::zero() && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}

/// `k = 2 pi / lambda`.
pub fn wavenumber_from_wavelength<T: Scalar>(wavelength: T) -> Result<T> {
    require_positive("wavelength", wavelength)?;
    Ok(T::TAU() / wavelength)
}

/// Ground-state rms extent `sqrt(hbar / (2 M Omega_t))`.
pub fn ground_state_extent<T: Scalar>(mass: T, trap_frequency: T) -> Result<T> {
    require_positive("ion mass", mass)?;
    require_positive("trap frequency", trap_frequency)?;
    Ok((T::lit(constants::HBAR) / (T::lit(2.0) * mass * trap_frequency)).sqrt())
}

/// Thermal rms extent `sigma0 sqrt(2 nbar + 1)`.
pub fn thermal_extent<T: Scalar>(ground_extent: T, nbar: T) -> Result<T> {
    require_non_negative("ground-state extent", ground_extent)?;
    require_non_negative("mean occupation", nbar)?;
    Ok(ground_extent * (T::lit(2.0) * nbar + T::one()).sqrt())
}

/// Thermal (geometric) occupation probability `nbar^n / (nbar + 1)^(n+1)`.
pub fn boltzmann_weight<T: Scalar>(n: usize, nbar: T) -> Result<T> {
    require_non_negative("mean occupation", nbar)?;
    let ratio = nbar / (nbar + T::one());
    let exponent = i32::try_from(n).map_err(|_| Error::invalid("occupation index too large"))?;
    Ok(ratio.powi(exponent) / (nbar + T::one()))
}

/// Highest level kept in thermal sums: the smallest `N` with
/// `(nbar/(nbar+1))^N <= THERMAL_TAIL`, i.e. the tail from `N` on is already
/// negligible and levels `0..=N` are summed.
pub fn thermal_truncation<T: Scalar>(nbar: T) -> Result<usize> {
    require_non_negative("mean occupation", nbar)?;
    if nbar == T::zero() {
        return Ok(0);
    }
    // ln(nbar / (nbar + 1)) without cancellation for large nbar
    let ln_ratio = -(nbar.recip()).ln_1p().as_f64();
    let n = (THERMAL_TAIL.ln() / ln_ratio).ceil();
    if n > MAX_DEGREE as f64 {
        return Err(Error::Capacity {
            requested: if n < usize::MAX as f64 { n as usize } else { usize::MAX },
            max: MAX_DEGREE,
        });
    }
    Ok(n as usize)
}

/// `(n, P(n))` for `n = 0..=thermal_truncation(nbar)`, generated by the
/// constant ratio `P(n+1)/P(n) = nbar/(nbar+1)`.
pub fn thermal_weights<T: Scalar>(nbar: T) -> Result<impl Iterator<Item = (usize, T)>> {
    let last = thermal_truncation(nbar)?;
    let ratio = nbar / (nbar + T::one());
    let first = (nbar + T::one()).recip();
    Ok((0..=last).scan(first, move |p, n| {
        let out = (n, *p);
        *p = *p * ratio;
        Some(out)
    }))
}

/// Optical standing wave probed by the ion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandingWaveField<T> {
    wavelength: T,
    wavenumber: T,
    mean_signal: T,
    optical_frequency: T,
}

impl<T: Scalar> StandingWaveField<T> {
    /// `mean_signal` is the fringe-averaged detector level (any positive scale).
    pub fn new(wavelength: T, mean_signal: T) -> Result<Self> {
        let wavenumber = wavenumber_from_wavelength(wavelength)?;
        require_non_negative("mean signal", mean_signal)?;
        Ok(Self {
            wavelength,
            wavenumber,
            mean_signal,
            optical_frequency: wavenumber * T::lit(constants::SPEED_OF_LIGHT),
        })
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn wavenumber(&self) -> T {
        self.wavenumber
    }

    pub fn mean_signal(&self) -> T {
        self.mean_signal
    }

    /// Angular optical frequency. Informational: every observable here is a
    /// long time average in which it cancels.
    pub fn optical_frequency(&self) -> T {
        self.optical_frequency
    }

    pub fn with_mean_signal(self, mean_signal: T) -> Result<Self> {
        Self::new(self.wavelength, mean_signal)
    }
}

/// Thermal motional state of the ion in a harmonic trap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapState<T> {
    trap_frequency: T,
    mass: T,
    nbar: T,
    ground_extent: T,
    thermal_extent: T,
}

impl<T: Scalar> TrapState<T> {
    /// `trap_frequency` is the angular frequency `Omega_t` in rad/s.
    pub fn new(trap_frequency: T, mass: T, nbar: T) -> Result<Self> {
        let ground_extent = ground_state_extent(mass, trap_frequency)?;
        let thermal_extent = thermal_extent(ground_extent, nbar)?;
        Ok(Self {
            trap_frequency,
            mass,
            nbar,
            ground_extent,
            thermal_extent,
        })
    }

    pub fn trap_frequency(&self) -> T {
        self.trap_frequency
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn nbar(&self) -> T {
        self.nbar
    }

    pub fn ground_extent(&self) -> T {
        self.ground_extent
    }

    pub fn thermal_extent(&self) -> T {
        self.thermal_extent
    }
}

/// Lamb-Dicke parameter `eta = k sigma0`.
///
/// Zero is accepted and means "no recoil" (a point-like probe).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LambDicke<T>(T);

impl<T: Scalar> LambDicke<T> {
    pub fn new(eta: T) -> Result<Self> {
        require_non_negative("Lamb-Dicke parameter", eta).map(Self)
    }

    pub fn from_parts(field: &StandingWaveField<T>, trap: &TrapState<T>) -> Self {
        Self(field.wavenumber() * trap.ground_extent())
    }

    pub fn value(self) -> T {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NM: f64 = 1e-9;
    const MHZ_ANGULAR: f64 = 2.0 * std::f64::consts::PI * 1e6;

    #[test]
    fn wavenumbers() {
        assert!((wavenumber_from_wavelength(std::f64::consts::TAU).unwrap() - 1.0).abs() < 1e-15);
        let k493 = wavenumber_from_wavelength(493.0 * NM).unwrap();
        assert!((k493 - std::f64::consts::TAU / 493e-9).abs() < 1e-8);
        assert!((k493 / 1.27445e7 - 1.0).abs() < 5e-5);
        let k729 = wavenumber_from_wavelength(729.0 * NM).unwrap();
        assert!((k729 / 8.6181e6 - 1.0).abs() < 1e-4);
        assert!(wavenumber_from_wavelength(0.0f64).is_err());
        assert!(wavenumber_from_wavelength(-1.0f64).is_err());
    }

    #[test]
    fn field_invariants() {
        let f = StandingWaveField::new(493.0 * NM, 1e4).unwrap();
        assert!((f.wavenumber() * f.wavelength() / std::f64::consts::TAU - 1.0).abs() < 1e-12);
        assert!(StandingWaveField::new(493.0 * NM, -1.0).is_err());
        assert!(f.optical_frequency() > 3.8e15);
    }

    #[test]
    fn ground_state_extents() {
        let ca = ground_state_extent(40.0 * constants::ATOMIC_MASS_UNIT, MHZ_ANGULAR).unwrap();
        assert!((ca / NM - 11.24).abs() < 0.1, "{}", ca / NM);
        let quad = ground_state_extent(40.0 * constants::ATOMIC_MASS_UNIT, 4.0 * MHZ_ANGULAR).unwrap();
        assert!((quad / ca - 0.5).abs() < 1e-14);
        let ba = ground_state_extent(138.0 * constants::ATOMIC_MASS_UNIT, MHZ_ANGULAR).unwrap();
        assert!((ba / NM - 6.05).abs() < 0.01, "{}", ba / NM);
        assert!(ground_state_extent(0.0, MHZ_ANGULAR).is_err());
        assert!(ground_state_extent(1e-25, -1.0).is_err());
    }

    #[test]
    fn thermal_extents() {
        assert_eq!(thermal_extent(5.0, 0.0).unwrap(), 5.0);
        assert!((thermal_extent(5.0f64, 4.0).unwrap() - 15.0).abs() < 1e-14);
        assert!((thermal_extent(11.24 * NM, 0.513).unwrap() / NM - 16.0).abs() < 0.1);
        assert!(thermal_extent(1.0, -0.1).is_err());
    }

    #[test]
    fn trap_state_consistency() {
        let t = TrapState::new(MHZ_ANGULAR, 40.0 * constants::ATOMIC_MASS_UNIT, 3.7).unwrap();
        let lhs = t.thermal_extent().powi(2);
        let rhs = t.ground_extent().powi(2) * (2.0 * 3.7 + 1.0);
        assert!((lhs / rhs - 1.0).abs() < 1e-15);
        assert!(t.thermal_extent() >= t.ground_extent());
    }

    #[test]
    fn boltzmann_weights() {
        assert_eq!(boltzmann_weight(0, 0.0).unwrap(), 1.0);
        assert_eq!(boltzmann_weight(3, 0.0).unwrap(), 0.0);
        assert_eq!(boltzmann_weight(0, 1.0).unwrap(), 0.5);
        assert_eq!(boltzmann_weight(1, 1.0).unwrap(), 0.25);
        assert!(boltzmann_weight(0, -1.0f64).is_err());
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(thermal_truncation(0.0).unwrap(), 0);
        for nbar in [0.01f64, 0.1, 0.513, 1.0, 5.0, 20.0, 50.0] {
            let n = thermal_truncation(nbar).unwrap();
            let ratio = nbar / (nbar + 1.0);
            // geometric tail beyond N
            let tail = ratio.powi(n as i32 + 1);
            assert!(tail < THERMAL_TAIL, "nbar={nbar}");
            assert!(ratio.powi(n as i32) <= THERMAL_TAIL);
            assert!(ratio.powi(n as i32 - 1) > THERMAL_TAIL, "not minimal for nbar={nbar}");
            let total: f64 = thermal_weights(nbar).unwrap().map(|(_, p)| p).sum();
            assert!(total >= 1.0 - 1e-12);
        }
        assert!(matches!(thermal_truncation(100.0f64), Err(Error::Capacity { .. })));
    }

    #[test]
    fn weights_iterator_matches_closed_form() {
        for (n, p) in thermal_weights(2.5f64).unwrap().take(40) {
            let direct = boltzmann_weight(n, 2.5).unwrap();
            assert!((p - direct).abs() <= 1e-14 * direct.max(1e-300));
        }
    }

    #[test]
    fn lamb_dicke() {
        let field = StandingWaveField::new(729.0 * NM, 1.0).unwrap();
        let trap = TrapState::new(MHZ_ANGULAR, 40.0 * constants::ATOMIC_MASS_UNIT, 0.0).unwrap();
        let eta = LambDicke::from_parts(&field, &trap);
        assert!((eta.value() - field.wavenumber() * trap.ground_extent()).abs() < 1e-16);
        assert!(LambDicke::new(0.0).is_ok());
        assert!(LambDicke::new(-0.1).is_err());
    }
}
