//! Phase-modulation picture. The two partial waves reaching the detector are
//! phase-modulated in opposite senses by the oscillating ion; after time
//! averaging the fringe contrast is `J0(2 k x_c)` for a fixed amplitude and
//! `exp(-2 (k sigma)^2)` once the amplitude is Rayleigh-distributed.
//!
//! The scan coordinate is the mirror distance `L`; for the cavity
//! experiments `2kL` is replaced by `2k x0` with no other change.

use num_complex::Complex;

use crate::domain::{FringeSignal, PositionAxis, SignalModel, StandingWaveField};
use crate::error::{Error, Result};
use crate::numerics::bessel::j0;
use crate::numerics::{integrate, integrate_pieces, sample_rayleigh, QuadratureSpec, SeededSampler};
use crate::scalar::{CompensatedSum, Scalar};
use crate::spatial::{breakpoints, fringe, gaussian_pdf, PositionDensity, GAUSSIAN_CUTOFF};

/// Classical oscillation `x(t) = offset + amplitude sin(Omega_t t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalOscillation<T> {
    amplitude: T,
    trap_frequency: T,
    offset: T,
}

impl<T: Scalar> ClassicalOscillation<T> {
    /// `offset` is the trap-centre position or mirror distance.
    pub fn new(amplitude: T, trap_frequency: T, offset: T) -> Result<Self> {
        if !(amplitude >= T::zero() && amplitude.is_finite()) {
            return Err(Error::invalid(format!(
                "amplitude must be non-negative, got {amplitude}"
            )));
        }
        if !(trap_frequency > T::zero() && trap_frequency.is_finite()) {
            return Err(Error::invalid(format!(
                "trap frequency must be positive, got {trap_frequency}"
            )));
        }
        if !offset.is_finite() {
            return Err(Error::invalid("offset must be finite"));
        }
        Ok(Self {
            amplitude,
            trap_frequency,
            offset,
        })
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn trap_frequency(&self) -> T {
        self.trap_frequency
    }

    pub fn offset(&self) -> T {
        self.offset
    }
}

/// Brute-force time average of `|e^{i phi(t)} + e^{2ikL} e^{-i phi(t)}|^2`,
/// `phi(t) = k x_c sin(Omega_t t)`, over a whole number of trap periods,
/// scaled so a resting ion at an antinode gives `2 S`.
///
/// Rectangle rule on `steps_per_period` samples per period; for a periodic
/// integrand this converges geometrically.
pub fn time_domain_signal<T: Scalar>(
    osc: &ClassicalOscillation<T>,
    field: &StandingWaveField<T>,
    periods: usize,
    steps_per_period: usize,
) -> Result<T> {
    if periods < 1 {
        return Err(Error::invalid("time average needs at least one trap period"));
    }
    if steps_per_period < 16 {
        return Err(Error::invalid("time average needs at least 16 steps per period"));
    }
    let k = field.wavenumber();
    let omega = osc.trap_frequency();
    let dt = T::TAU() / (omega * T::from_usize_lossy(steps_per_period));
    let path_phase = Complex::from_polar(T::one(), T::lit(2.0) * k * osc.offset());
    let depth = k * osc.amplitude();

    let total = periods * steps_per_period;
    let mut acc = CompensatedSum::new();
    for j in 0..total {
        let t = T::from_usize_lossy(j) * dt;
        let phi = depth * (omega * t).sin();
        let direct = Complex::from_polar(T::one(), phi);
        let reflected = path_phase * Complex::from_polar(T::one(), -phi);
        acc.add((direct + reflected).norm_sqr());
    }
    let mean = acc.value() / T::from_usize_lossy(total);
    Ok(field.mean_signal() * mean / T::lit(2.0))
}

/// Fringe contrast of a classical oscillator of fixed amplitude, `J0(2 k x_c)`.
pub fn classical_visibility<T: Scalar>(amplitude: T, k: T) -> Result<T> {
    if !(amplitude >= T::zero() && amplitude.is_finite()) {
        return Err(Error::invalid(format!(
            "amplitude must be non-negative, got {amplitude}"
        )));
    }
    if !k.is_finite() {
        return Err(Error::invalid("wavenumber must be finite"));
    }
    Ok(j0(T::lit(2.0) * k * amplitude))
}

/// Closed-form time average `S (1 + J0(2 k x_c) cos 2kL)`.
pub fn classical_signal<T: Scalar>(amplitude: T, k: T, mirror_distance: T, mean_signal: T) -> Result<T> {
    let v = classical_visibility(amplitude, k)?;
    Ok(mean_signal * (T::one() + v * (T::lit(2.0) * k * mirror_distance).cos()))
}

/// How [`rayleigh_visibility`] evaluates the thermal average.
#[derive(Debug)]
pub enum RayleighMode<'a, T> {
    Analytic,
    Quadrature(QuadratureSpec<T>),
    MonteCarlo {
        sampler: &'a mut SeededSampler,
        samples: usize,
    },
}

/// Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub samples: usize,
}

fn check_thermal_args<T: Scalar>(k: T, sigma: T) -> Result<()> {
    if !(k > T::zero() && k.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    if !(sigma >= T::zero() && sigma.is_finite()) {
        return Err(Error::invalid(format!("rms extent must be non-negative, got {sigma}")));
    }
    Ok(())
}

/// Rayleigh density of the oscillation amplitude, `(x / s^2) exp(-x^2 / 2 s^2)`.
pub fn rayleigh_pdf<T: Scalar>(x: T, sigma: T) -> T {
    if x < T::zero() {
        return T::zero();
    }
    let z = x / sigma;
    z / sigma * (-z * z / T::lit(2.0)).exp()
}

/// Thermal visibility: `J0(2 k x_c)` averaged over Rayleigh amplitudes of
/// parameter `sigma`.
pub fn rayleigh_visibility<T: Scalar>(k: T, sigma: T, mode: RayleighMode<'_, T>) -> Result<T> {
    check_thermal_args(k, sigma)?;
    if sigma == T::zero() {
        return Ok(T::one());
    }
    match mode {
        RayleighMode::Analytic => {
            let ks = k * sigma;
            Ok((-T::lit(2.0) * ks * ks).exp())
        }
        RayleighMode::Quadrature(spec) => {
            let h = T::lit(GAUSSIAN_CUTOFF) * sigma;
            let pts = breakpoints(T::zero(), h, T::PI() / (T::lit(2.0) * k));
            integrate_pieces(|x| rayleigh_pdf(x, sigma) * j0(T::lit(2.0) * k * x), &pts, &spec)
        }
        RayleighMode::MonteCarlo { sampler, samples } => {
            rayleigh_visibility_mc(k, sigma, sampler, samples).map(|e| e.mean)
        }
    }
}

/// Monte Carlo variant of [`rayleigh_visibility`] that also reports the
/// standard error.
pub fn rayleigh_visibility_mc<T: Scalar>(
    k: T,
    sigma: T,
    sampler: &mut SeededSampler,
    samples: usize,
) -> Result<McEstimate<T>> {
    check_thermal_args(k, sigma)?;
    if samples < 2 {
        return Err(Error::invalid("Monte Carlo needs at least 2 samples"));
    }
    if sigma == T::zero() {
        return Ok(McEstimate {
            mean: T::one(),
            std_error: T::zero(),
            samples,
        });
    }
    let two_k = T::lit(2.0) * k;
    let mut sum = CompensatedSum::new();
    let mut sum_sq = CompensatedSum::new();
    for _ in 0..samples {
        let v = j0(two_k * sample_rayleigh(sampler, sigma)?);
        sum.add(v);
        sum_sq.add(v * v);
    }
    let n = T::from_usize_lossy(samples);
    let mean = sum.value() / n;
    let var = ((sum_sq.value() - n * mean * mean) / (n - T::one())).max(T::zero());
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}

/// Spatial density of a classical oscillator with amplitude `x_c`.
pub fn classical_position_density<T: Scalar>(amplitude: T) -> Result<PositionDensity<T>> {
    PositionDensity::arcsine(amplitude)
}

/// Position density of a thermal oscillator at `x`: the arcsine density
/// averaged over Rayleigh amplitudes,
/// `integral_{|x|}^inf P(x_c) / (pi sqrt(x_c^2 - x^2)) dx_c`.
///
/// Integrated in `u = sqrt(x_c^2 - x^2)`, which cancels the inverse square
/// root; the `u` range is cut at `GAUSSIAN_CUTOFF * sigma`.
pub fn thermal_position_density_at<T: Scalar>(sigma: T, x: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(sigma > T::zero() && sigma.is_finite()) {
        return Err(Error::invalid(format!("rms extent must be positive, got {sigma}")));
    }
    let x = x.abs();
    let integrand = |u: T| {
        let amplitude = (x * x + u * u).sqrt();
        let arcsine = (T::PI() * u).recip();
        let jacobian = u / amplitude;
        rayleigh_pdf(amplitude, sigma) * arcsine * jacobian
    };
    integrate(integrand, T::zero(), T::lit(GAUSSIAN_CUTOFF) * sigma, spec)
}

/// [`thermal_position_density_at`] over a grid of positions.
pub fn thermal_position_density<T: Scalar>(sigma: T, grid: &[T], spec: &QuadratureSpec<T>) -> Result<Vec<T>> {
    grid.iter()
        .map(|&x| thermal_position_density_at(sigma, x, spec))
        .collect()
}

/// The Gaussian that [`thermal_position_density`] should reproduce.
pub fn gaussian_density<T: Scalar>(x: T, sigma: T) -> T {
    gaussian_pdf(x, sigma)
}

/// Thermal fringe against mirror distance, `S (1 + V cos 2kL)` with `V` the
/// Rayleigh average evaluated in `mode`.
pub fn scan<T: Scalar>(
    field: &StandingWaveField<T>,
    sigma: T,
    distances: &[T],
    mode: RayleighMode<'_, T>,
) -> Result<FringeSignal<T>> {
    let k = field.wavenumber();
    let v = rayleigh_visibility(k, sigma, mode)?;
    let signals = distances
        .iter()
        .map(|&l| fringe(l, k, field.mean_signal(), v))
        .collect();
    Ok(FringeSignal::new(
        distances.to_vec(),
        signals,
        SignalModel::Doppler,
        PositionAxis::MirrorDistance,
    )?
    .with_parameter("wavelength_m", field.wavelength().as_f64())
    .with_parameter("mean_signal", field.mean_signal().as_f64())
    .with_parameter("visibility", v.as_f64())
    .with_parameter("sigma_m", sigma.as_f64()))
}
