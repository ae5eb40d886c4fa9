//! Which-way picture. Scattering from either travelling wave applies the
//! recoil operator `exp(±ikx)` to the motional state; the fringe visibility
//! equals the thermally averaged overlap `<n| exp(2ikx) |n>` of the two
//! possible final states.
//!
//! With `x = sigma0 (a + a^†)` and `eta = k sigma0`, the recoil is the
//! displacement `D(i eta)`, so
//! `<n| exp(2ikx) |n> = exp(-2 eta^2) L_n(4 eta^2)` and
//! `|<m| exp(ikx) |n>|^2 = (n_<! / n_>!) eta^(2d) exp(-eta^2) [L_{n_<}^(d)(eta^2)]^2`
//! with `d = |m - n|`. Only diagonal elements enter observables, so the
//! phase convention of the off-diagonal ones never matters.

use num_complex::Complex;
use serde::Serialize;

use crate::domain::{thermal_weights, FringeSignal, LambDicke, PositionAxis, SignalModel, StandingWaveField};
use crate::error::{Error, Result};
use crate::numerics::laguerre::{assoc_laguerre_scaled, check_degree, LaguerreSeq};
use crate::numerics::wavefunction::fill_wavefunctions;
use crate::numerics::{integrate_pieces, QuadratureSpec};
use crate::scalar::{CompensatedSum, Scalar};
use crate::spatial::{breakpoints, fringe};

/// Completeness deficit tolerated by [`travelling_wave_rate`].
pub const BASIS_TOLERANCE: f64 = 1e-6;

/// `eta` at and above which the recoil is treated as fully revealing the
/// path: `2 eta^2 = 10`, ground-state visibility `e^-10`.
pub const SHALLOW_TRAP_ETA: f64 = 2.236_067_977_499_79;

/// Motional state of the ion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MotionalState<T> {
    Number(usize),
    Thermal { nbar: T },
}

impl<T: Scalar> MotionalState<T> {
    /// `(n, P(n))` pairs; thermal states are truncated by the domain rule.
    pub fn populations(&self) -> Result<Vec<(usize, T)>> {
        match *self {
            MotionalState::Number(n) => {
                check_degree(n)?;
                Ok(vec![(n, T::one())])
            }
            MotionalState::Thermal { nbar } => normalized_weights(nbar),
        }
    }
}

/// Truncated Boltzmann weights rescaled to unit total mass.
fn normalized_weights<T: Scalar>(nbar: T) -> Result<Vec<(usize, T)>> {
    let mut w: Vec<(usize, T)> = thermal_weights(nbar)?.collect();
    let mut total = CompensatedSum::new();
    w.iter().for_each(|&(_, p)| total.add(p));
    let total = total.value();
    w.iter_mut().for_each(|(_, p)| *p = *p / total);
    Ok(w)
}

/// Overlap `<n| exp(2ikx) |n> = exp(-2 eta^2) L_n(4 eta^2)` of the two
/// recoiled final states.
pub fn kick_overlap<T: Scalar>(n: usize, eta: LambDicke<T>) -> Result<T> {
    check_degree(n)?;
    let e2 = eta.value() * eta.value();
    let lag = LaguerreSeq::new(T::zero(), T::lit(4.0) * e2)
        .nth(n)
        .expect("infinite sequence");
    Ok((-T::lit(2.0) * e2).exp() * lag)
}

/// `|<m| exp(±ikx) |n>|^2`.
pub fn recoil_probability<T: Scalar>(m: usize, n: usize, eta: LambDicke<T>) -> Result<T> {
    check_degree(m.max(n))?;
    let ln_fact = ln_factorials(m.max(n));
    Ok(recoil_probability_with(m, n, eta.value(), &ln_fact))
}

fn ln_factorials<T: Scalar>(n_max: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = CompensatedSum::new();
    out.push(T::zero());
    for j in 1..=n_max {
        acc.add(T::from_usize_lossy(j).ln());
        out.push(acc.value());
    }
    out
}

fn recoil_probability_with<T: Scalar>(m: usize, n: usize, eta: T, ln_fact: &[T]) -> T {
    let (lo, hi) = if m < n { (m, n) } else { (n, m) };
    let d = hi - lo;
    if eta == T::zero() {
        return if d == 0 { T::one() } else { T::zero() };
    }
    let e2 = eta * eta;
    let (mantissa, ln_scale) = assoc_laguerre_scaled(lo, T::from_usize_lossy(d), e2);
    if mantissa == T::zero() {
        return T::zero();
    }
    let ln_p = ln_fact[lo] - ln_fact[hi] + T::from_usize_lossy(2 * d) * eta.ln() - e2
        + T::lit(2.0) * (mantissa.abs().ln() + ln_scale);
    ln_p.exp()
}

/// Scattering rate from a single travelling wave,
/// `S_rest * sum_n P(n) sum_{m <= cutoff} |<m| exp(ikx) |n>|^2`.
///
/// By completeness the exact value is `S_rest`; the computed value measures
/// how well `0..=basis_cutoff` captures the recoiled states. A deficit above
/// [`BASIS_TOLERANCE`] is an error.
pub fn travelling_wave_rate<T: Scalar>(nbar: T, eta: LambDicke<T>, rest_rate: T, basis_cutoff: usize) -> Result<T> {
    check_degree(basis_cutoff)?;
    let weights = normalized_weights(nbar)?;
    let n_max = weights.last().map_or(0, |w| w.0);
    let ln_fact = ln_factorials(n_max.max(basis_cutoff));
    let mut total = CompensatedSum::new();
    for &(n, p) in &weights {
        let mut row = CompensatedSum::new();
        for m in 0..=basis_cutoff {
            row.add(recoil_probability_with(m, n, eta.value(), &ln_fact));
        }
        total.add(p * row.value());
    }
    let captured = total.value();
    let deficit = T::one() - captured;
    if deficit > T::lit(BASIS_TOLERANCE) {
        return Err(Error::InsufficientBasis {
            cutoff: basis_cutoff,
            deficit: deficit.as_f64(),
        });
    }
    Ok(rest_rate * captured)
}

/// Thermally averaged overlap `sum_n P(n) exp(-2 eta^2) L_n(4 eta^2)`, which
/// is the fringe visibility.
pub fn thermal_visibility<T: Scalar>(nbar: T, eta: LambDicke<T>) -> Result<T> {
    let e2 = eta.value() * eta.value();
    let damping = (-T::lit(2.0) * e2).exp();
    let mut acc = CompensatedSum::new();
    for ((_, p), lag) in normalized_weights(nbar)?
        .into_iter()
        .zip(LaguerreSeq::new(T::zero(), T::lit(4.0) * e2))
    {
        acc.add(p * lag);
    }
    Ok((damping * acc.value()).max(T::zero()).min(T::one()))
}

/// Standing-wave scattering rate at trap position `x0`,
/// `2 S_rest (1 + V cos 2k x0)`, using that `<n| cos 2k(x - x0) |n>`
/// factorises into `cos(2k x0) <n| cos 2kx |n>` by parity.
pub fn standing_wave_signal<T: Scalar>(x0: T, nbar: T, eta: LambDicke<T>, k: T, rest_rate: T) -> Result<T> {
    let v = thermal_visibility(nbar, eta)?;
    Ok(fringe(x0, k, T::lit(2.0) * rest_rate, v))
}

/// Standing-wave scan with `S_rest` set to half the field's mean signal.
pub fn scan<T: Scalar>(
    field: &StandingWaveField<T>,
    nbar: T,
    eta: LambDicke<T>,
    positions: &[T],
) -> Result<FringeSignal<T>> {
    let k = field.wavenumber();
    let v = thermal_visibility(nbar, eta)?;
    let signals = positions
        .iter()
        .map(|&x| fringe(x, k, field.mean_signal(), v))
        .collect();
    Ok(FringeSignal::new(
        positions.to_vec(),
        signals,
        SignalModel::Quantum,
        PositionAxis::TrapPosition,
    )?
    .with_parameter("wavelength_m", field.wavelength().as_f64())
    .with_parameter("mean_signal", field.mean_signal().as_f64())
    .with_parameter("visibility", v.as_f64())
    .with_parameter("nbar", nbar.as_f64())
    .with_parameter("eta", eta.value().as_f64()))
}

/// Thermal position density `sum_n P(n) |psi_n(x)|^2` in 1/m; `x` and
/// `ground_extent` in meters.
pub fn thermal_density<T: Scalar>(x: T, nbar: T, ground_extent: T) -> Result<T> {
    if !(ground_extent > T::zero() && ground_extent.is_finite()) {
        return Err(Error::invalid(format!(
            "ground-state extent must be positive, got {ground_extent}"
        )));
    }
    let weights = normalized_weights(nbar)?;
    let n_max = weights.last().map_or(0, |w| w.0);
    let scale = T::SQRT_2() * ground_extent;
    let mut psi = Vec::with_capacity(n_max + 1);
    fill_wavefunctions(n_max, x / scale, &mut psi);
    let mut acc = CompensatedSum::new();
    for (n, p) in weights {
        acc.add(p * psi[n] * psi[n]);
    }
    Ok(acc.value() / scale)
}

/// `<n| exp(2ikx) |n>` by direct quadrature of `psi_n^2 exp(2ikx)`.
///
/// Independent of the Laguerre closed form; the imaginary part must vanish
/// by parity and is returned so callers can check it.
pub fn kick_overlap_by_quadrature<T: Scalar>(
    n: usize,
    eta: LambDicke<T>,
    spec: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    check_degree(n)?;
    // 2kx in the dimensionless coordinate xi = x / (sqrt 2 sigma0)
    let freq = T::lit(2.0) * T::SQRT_2() * eta.value();
    let reach = (T::from_usize_lossy(2 * n + 1)).sqrt() + T::lit(12.0);
    let period = if freq > T::zero() { T::PI() / freq } else { reach };
    let pts = breakpoints(-reach, reach, period.min(T::one()));
    let mut psi = Vec::with_capacity(n + 1);
    let mut density = |xi: T| {
        fill_wavefunctions(n, xi, &mut psi);
        psi[n] * psi[n]
    };
    let re = integrate_pieces(|xi| density(xi) * (freq * xi).cos(), &pts, spec)?;
    let mut psi = Vec::with_capacity(n + 1);
    let mut density = |xi: T| {
        fill_wavefunctions(n, xi, &mut psi);
        psi[n] * psi[n]
    };
    let im = integrate_pieces(|xi| density(xi) * (freq * xi).sin(), &pts, spec)?;
    Ok(Complex::new(re, im))
}

/// How much path information the recoil leaves in the motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WhichWay {
    /// No recoil (`eta = 0`): final states identical, full contrast.
    None,
    Partial,
    /// Shallow-trap limit: recoil distinguishes the paths almost surely.
    Full,
}

impl WhichWay {
    pub fn describe(self) -> &'static str {
        match self {
            WhichWay::None => "no which-way information",
            WhichWay::Partial => "partial which-way information",
            WhichWay::Full => "full which-way information",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LevelOverlap<T> {
    pub n: usize,
    pub weight: T,
    pub overlap: T,
}

/// Per-level overlaps, their thermal average and the visibility, which are
/// the same number under two names.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WhichWayReport<T> {
    pub nbar: T,
    pub eta: T,
    pub levels: Vec<LevelOverlap<T>>,
    pub thermal_overlap: T,
    pub visibility: T,
    /// `thermal_overlap == visibility` to within rounding.
    pub overlap_equals_visibility: bool,
    /// `1 - exp(-2 eta^2)`: the contrast lost even in the motional ground state.
    pub ground_state_deficit: T,
    pub which_way: WhichWay,
    pub shallow_trap: bool,
}

pub fn which_way_report<T: Scalar>(nbar: T, eta: LambDicke<T>) -> Result<WhichWayReport<T>> {
    let mut levels = Vec::new();
    let mut avg = CompensatedSum::new();
    for (n, weight) in normalized_weights(nbar)? {
        let overlap = kick_overlap(n, eta)?;
        avg.add(weight * overlap);
        levels.push(LevelOverlap { n, weight, overlap });
    }
    let thermal_overlap = avg.value();
    let visibility = thermal_visibility(nbar, eta)?;
    let shallow_trap = eta.value() >= T::lit(SHALLOW_TRAP_ETA);
    let which_way = if eta.value() == T::zero() {
        WhichWay::None
    } else if shallow_trap {
        WhichWay::Full
    } else {
        WhichWay::Partial
    };
    let e2 = eta.value() * eta.value();
    Ok(WhichWayReport {
        nbar,
        eta: eta.value(),
        levels,
        thermal_overlap,
        visibility,
        overlap_equals_visibility: (thermal_overlap - visibility).abs()
            <= T::lit(1e-12).max(T::epsilon() * T::lit(64.0)),
        ground_state_deficit: T::one() - (-T::lit(2.0) * e2).exp(),
        which_way,
        shallow_trap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta(v: f64) -> LambDicke<f64> {
        LambDicke::new(v).unwrap()
    }

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::new(1e-13, 1e-12, 4000).unwrap()
    }

    #[test]
    fn no_recoil_means_perfect_overlap() {
        for n in [0, 1, 7, 300] {
            assert_eq!(kick_overlap(n, eta(0.0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn ground_state_overlap_is_gaussian() {
        for e in [0.05f64, 0.14, 0.5, 1.3] {
            let closed = (-2.0 * e * e).exp();
            assert!((kick_overlap(0, eta(e)).unwrap() - closed).abs() < 1e-15);
            let quad = kick_overlap_by_quadrature(0, eta(e), &spec()).unwrap();
            assert!((quad.re - closed).abs() < 1e-10);
            assert!(quad.im.abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_matches_wavefunction_quadrature() {
        for (n, e) in [(3usize, 0.2f64), (1, 0.7), (10, 0.3), (25, 0.1)] {
            let closed = kick_overlap(n, eta(e)).unwrap();
            let quad = kick_overlap_by_quadrature(n, eta(e), &spec()).unwrap();
            assert!((closed - quad.re).abs() < 1e-9, "n={n} eta={e}");
            assert!(quad.im.abs() < 1e-12);
        }
    }

    #[test]
    fn recoil_probabilities() {
        // |<0|D|m>|^2 is Poisson with mean eta^2
        let e = 0.4f64;
        let mut fact = 1.0;
        for m in 0..10 {
            if m > 0 {
                fact *= m as f64;
            }
            let poisson = (-e * e).exp() * (e * e).powi(m as i32) / fact;
            let p = recoil_probability(m, 0, eta(e)).unwrap();
            assert!((p - poisson).abs() < 1e-15);
            assert_eq!(p, recoil_probability(0, m, eta(e)).unwrap());
        }
        // diagonal element squared equals the single-kick overlap with eta/2
        let diag = recoil_probability(5, 5, eta(e)).unwrap();
        let half_overlap = kick_overlap(5, eta(e / 2.0)).unwrap();
        assert!((diag - half_overlap.powi(2)).abs() < 1e-14);
    }

    #[test]
    fn completeness_in_lamb_dicke_regime() {
        let r = travelling_wave_rate(0.0, eta(0.1), 7.0, 20).unwrap();
        assert!((r - 7.0).abs() < 1e-10 * 7.0);
        let r = travelling_wave_rate(2.0, eta(0.5), 1.0, 140).unwrap();
        assert!((r - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tiny_basis_is_rejected() {
        match travelling_wave_rate(5.0, eta(1.0), 1.0, 2) {
            Err(Error::InsufficientBasis { cutoff: 2, deficit }) => assert!(deficit > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn thermal_sum_closed_form() {
        for nbar in [0.0f64, 0.1, 1.0, 5.0, 20.0, 50.0] {
            for e in [0.05f64, 0.14, 0.5] {
                let v = thermal_visibility(nbar, eta(e)).unwrap();
                let closed = (-2.0 * e * e * (2.0 * nbar + 1.0)).exp();
                assert!((v - closed).abs() < 1e-10, "nbar={nbar} eta={e}: {v} vs {closed}");
            }
        }
        assert_eq!(thermal_visibility(0.0, eta(0.3)).unwrap(), (-2.0f64 * 0.09).exp());
    }

    #[test]
    fn standing_wave_limits() {
        let k = 1e7;
        let s = standing_wave_signal(0.0, 0.0, eta(0.0), k, 3.0).unwrap();
        assert_eq!(s, 12.0);
        // maxima at antinodes
        let v_at = |x: f64| standing_wave_signal(x, 1.0, eta(0.2), k, 1.0).unwrap();
        let lambda = std::f64::consts::TAU / k;
        for m in 0..4 {
            let x = m as f64 * lambda / 2.0;
            assert!(v_at(x) >= v_at(x + 1e-3 * lambda));
            assert!(v_at(x) >= v_at(x - 1e-3 * lambda));
        }
    }

    #[test]
    fn thermal_density_ground_state() {
        let s0 = 10e-9;
        for x in [-30e-9, -3e-9, 0.0, 12e-9] {
            let xi = x / (2f64.sqrt() * s0);
            let psi0 = crate::numerics::ho_wavefunction(0, xi).unwrap();
            let want = psi0 * psi0 / (2f64.sqrt() * s0);
            assert!((thermal_density(x, 0.0, s0).unwrap() - want).abs() < 1e-12 * want.max(1.0));
        }
        assert!(thermal_density(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn report_regimes() {
        let r = which_way_report(0.0, eta(0.0)).unwrap();
        assert_eq!(r.which_way, WhichWay::None);
        assert_eq!(r.visibility, 1.0);
        let shallow = which_way_report(0.0, eta(5f64.sqrt())).unwrap();
        assert!(shallow.shallow_trap);
        assert_eq!(shallow.which_way, WhichWay::Full);
        assert!(shallow.visibility < 5e-5);
        let warm = which_way_report(3.0, eta(0.2)).unwrap();
        assert!(warm.overlap_equals_visibility);
        assert_eq!(warm.which_way, WhichWay::Partial);
        assert!(warm.ground_state_deficit > 0.0);
        assert_eq!(warm.levels.len(), crate::domain::thermal_truncation(3.0).unwrap() + 1);
    }
}
