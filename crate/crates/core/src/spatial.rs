//! Apparatus-function picture: the ion's position density is convolved with
//! the point-probe signal, so the fringe contrast is the density's Fourier
//! component at spatial frequency `2k`.

use std::fmt;
use std::sync::Arc;

use crate::domain::{FringeSignal, PositionAxis, SignalModel, StandingWaveField};
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_pieces, QuadratureSpec};
use crate::scalar::Scalar;

/// Half-width, in units of sigma, at which Gaussian-like integrands are cut.
pub const GAUSSIAN_CUTOFF: f64 = 8.0;

/// Integration domain of a custom density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support<T> {
    /// Density vanishes outside `[-half_width, half_width]`.
    Finite { half_width: T },
    /// Density decays at least like a Gaussian of this rms width; integrals
    /// are cut at `GAUSSIAN_CUTOFF * sigma`.
    GaussianEnvelope { sigma: T },
}

impl<T: Scalar> Support<T> {
    pub fn half_width(&self) -> T {
        match *self {
            Support::Finite { half_width } => half_width,
            Support::GaussianEnvelope { sigma } => T::lit(GAUSSIAN_CUTOFF) * sigma,
        }
    }
}

type DensityFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// User-supplied symmetric density, validated at construction.
#[derive(Clone)]
pub struct CustomDensity<T> {
    pdf: DensityFn<T>,
    support: Support<T>,
}

impl<T> fmt::Debug for CustomDensity<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> CustomDensity<T> {
    /// Checks non-negativity and symmetry on a probe grid and normalisation
    /// to `1e-9` (scaled by epsilon for narrower types) by quadrature.
    pub fn new<F>(pdf: F, support: Support<T>, spec: &QuadratureSpec<T>) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        let h = support.half_width();
        if !(h > T::zero() && h.is_finite()) {
            return Err(Error::invalid("density support must have positive finite width"));
        }
        let probes = 64;
        let mut peak = T::zero();
        for i in 0..=probes {
            let x = h * T::from_usize_lossy(i) / T::from_usize_lossy(probes);
            let (right, left) = (pdf(x), pdf(-x));
            if !(right >= T::zero() && left >= T::zero()) || !right.is_finite() || !left.is_finite() {
                return Err(Error::invalid(format!(
                    "density must be finite and non-negative (at x = ±{x})"
                )));
            }
            peak = peak.max(right);
        }
        let sym_tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        for i in 0..=probes {
            let x = h * T::from_usize_lossy(i) / T::from_usize_lossy(probes);
            if (pdf(x) - pdf(-x)).abs() > sym_tol * peak {
                return Err(Error::invalid(format!(
                    "density must be symmetric about 0 (fails at x = {x})"
                )));
            }
        }
        let mass = integrate(&pdf, -h, h, spec)?;
        let norm_tol = T::lit(1e-9).max(T::epsilon() * T::lit(1e4));
        if (mass - T::one()).abs() > norm_tol {
            return Err(Error::invalid(format!("density must integrate to 1, got {mass}")));
        }
        Ok(Self {
            pdf: Arc::new(pdf),
            support,
        })
    }

    pub fn support(&self) -> Support<T> {
        self.support
    }

    pub fn eval(&self, x: T) -> T {
        (self.pdf)(x)
    }
}

/// Probability density of the ion position relative to the trap centre.
#[derive(Clone, Debug)]
pub enum PositionDensity<T> {
    /// Delta function; the ideal probe.
    PointLike,
    /// Thermal or ground-state wave packet with rms width `sigma`.
    Gaussian {
        sigma: T,
    },
    /// Classical oscillator of fixed amplitude: `1 / (pi sqrt(a^2 - x^2))`.
    Arcsine {
        amplitude: T,
    },
    Custom(CustomDensity<T>),
}

impl<T: Scalar> PositionDensity<T> {
    /// Gaussian of rms width `sigma`; zero width gives [`PositionDensity::PointLike`].
    pub fn gaussian(sigma: T) -> Result<Self> {
        if sigma == T::zero() {
            Ok(PositionDensity::PointLike)
        } else if sigma > T::zero() && sigma.is_finite() {
            Ok(PositionDensity::Gaussian { sigma })
        } else {
            Err(Error::invalid(format!(
                "Gaussian width must be non-negative, got {sigma}"
            )))
        }
    }

    pub fn arcsine(amplitude: T) -> Result<Self> {
        if amplitude > T::zero() && amplitude.is_finite() {
            Ok(PositionDensity::Arcsine { amplitude })
        } else {
            Err(Error::invalid(format!(
                "oscillation amplitude must be positive, got {amplitude}"
            )))
        }
    }

    /// Pointwise density; `None` for the delta-like point probe.
    pub fn eval(&self, x: T) -> Option<T> {
        match self {
            PositionDensity::PointLike => None,
            PositionDensity::Gaussian { sigma } => Some(gaussian_pdf(x, *sigma)),
            PositionDensity::Arcsine { amplitude } => {
                let a = *amplitude;
                Some(if x.abs() < a {
                    (T::PI() * (a * a - x * x).sqrt()).recip()
                } else {
                    T::zero()
                })
            }
            PositionDensity::Custom(c) => Some(c.eval(x)),
        }
    }

    /// Second moment `<x^2>`: closed form for the built-in shapes, quadrature
    /// for custom densities.
    pub fn second_moment(&self, spec: &QuadratureSpec<T>) -> Result<T> {
        match self {
            PositionDensity::PointLike => Ok(T::zero()),
            PositionDensity::Gaussian { sigma } => Ok(*sigma * *sigma),
            PositionDensity::Arcsine { amplitude } => Ok(*amplitude * *amplitude / T::lit(2.0)),
            PositionDensity::Custom(c) => {
                let h = c.support().half_width();
                integrate(|x| x * x * c.eval(x), -h, h, spec)
            }
        }
    }
}

pub(crate) fn gaussian_pdf<T: Scalar>(x: T, sigma: T) -> T {
    let z = x / sigma;
    (-z * z / T::lit(2.0)).exp() / (sigma * T::TAU().sqrt())
}

/// Break points splitting `[a, b]` into pieces no longer than `period`.
pub(crate) fn breakpoints<T: Scalar>(a: T, b: T, period: T) -> Vec<T> {
    let pieces = if period > T::zero() {
        ((b - a) / period).ceil().to_usize().unwrap_or(1).clamp(1, 4096)
    } else {
        1
    };
    let step = (b - a) / T::from_usize_lossy(pieces);
    let mut out: Vec<T> = (0..pieces).map(|i| a + step * T::from_usize_lossy(i)).collect();
    out.push(b);
    out
}

fn check_wavenumber<T: Scalar>(k: T) -> Result<()> {
    if k > T::zero() && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("wavenumber must be positive, got {k}")))
    }
}

/// Point-probe signal `2 S cos^2(kx) = S (1 + cos 2kx)`.
pub fn ideal_signal<T: Scalar>(x: T, field: &StandingWaveField<T>) -> T {
    let s = field.mean_signal();
    s * (T::one() + (T::lit(2.0) * field.wavenumber() * x).cos())
}

/// Fringe visibility `integral rho(x) cos(2kx) dx` by quadrature.
///
/// Gaussian integrals are cut at `GAUSSIAN_CUTOFF` widths; the arcsine
/// density is integrated after `x = a sin(theta)`, which removes its endpoint
/// singularities.
pub fn visibility_from_density<T: Scalar>(density: &PositionDensity<T>, k: T, spec: &QuadratureSpec<T>) -> Result<T> {
    check_wavenumber(k)?;
    let two_k = T::lit(2.0) * k;
    let v = match density {
        PositionDensity::PointLike => T::one(),
        PositionDensity::Gaussian { sigma } => {
            let sigma = *sigma;
            let h = T::lit(GAUSSIAN_CUTOFF) * sigma;
            let pts = breakpoints(T::zero(), h, T::PI() / two_k);
            T::lit(2.0) * integrate_pieces(|x| gaussian_pdf(x, sigma) * (two_k * x).cos(), &pts, spec)?
        }
        PositionDensity::Arcsine { amplitude } => {
            let a = *amplitude;
            let half_pi = T::FRAC_PI_2();
            let pts = breakpoints(T::zero(), half_pi, T::PI() / (two_k * a).max(T::one()));
            let integral = integrate_pieces(|theta: T| (two_k * a * theta.sin()).cos(), &pts, spec)?;
            T::lit(2.0) * integral / T::PI()
        }
        PositionDensity::Custom(c) => {
            let h = c.support().half_width();
            let pts = breakpoints(-h, h, T::PI() / two_k);
            integrate_pieces(|x| c.eval(x) * (two_k * x).cos(), &pts, spec)?
        }
    };
    Ok(v.max(-T::one()).min(T::one()))
}

/// Closed-form Gaussian visibility `exp(-2 (k sigma)^2)`.
pub fn visibility_gaussian<T: Scalar>(k: T, sigma: T) -> Result<T> {
    check_wavenumber(k)?;
    if !(sigma >= T::zero() && sigma.is_finite()) {
        return Err(Error::invalid(format!("rms extent must be non-negative, got {sigma}")));
    }
    let ks = k * sigma;
    Ok((-T::lit(2.0) * ks * ks).exp())
}

/// Observed signal `S (1 + V cos 2k x0)` for a trap centred at `x0`.
pub fn observed_signal<T: Scalar>(x0: T, field: &StandingWaveField<T>, visibility: T) -> Result<T> {
    if !(visibility >= T::zero() && visibility <= T::one()) {
        return Err(Error::invalid(format!(
            "visibility must lie in [0, 1], got {visibility}"
        )));
    }
    Ok(fringe(x0, field.wavenumber(), field.mean_signal(), visibility))
}

/// `S (1 + V cos 2kx)`; `V` may be negative (contrast reversal).
pub(crate) fn fringe<T: Scalar>(x: T, k: T, mean: T, visibility: T) -> T {
    (mean * (T::one() + visibility * (T::lit(2.0) * k * x).cos())).max(T::zero())
}

/// Scan of the observed signal over trap positions.
pub fn scan<T: Scalar>(
    field: &StandingWaveField<T>,
    density: &PositionDensity<T>,
    positions: &[T],
    spec: &QuadratureSpec<T>,
) -> Result<FringeSignal<T>> {
    let v = visibility_from_density(density, field.wavenumber(), spec)?;
    let signals = positions
        .iter()
        .map(|&x| fringe(x, field.wavenumber(), field.mean_signal(), v))
        .collect();
    let model = match density {
        PositionDensity::PointLike => SignalModel::PointLike,
        _ => SignalModel::Spatial,
    };
    let mut out = FringeSignal::new(positions.to_vec(), signals, model, PositionAxis::TrapPosition)?
        .with_parameter("wavelength_m", field.wavelength().as_f64())
        .with_parameter("mean_signal", field.mean_signal().as_f64())
        .with_parameter("visibility", v.as_f64());
    match density {
        PositionDensity::Gaussian { sigma } => out = out.with_parameter("sigma_m", sigma.as_f64()),
        PositionDensity::Arcsine { amplitude } => out = out.with_parameter("amplitude_m", amplitude.as_f64()),
        PositionDensity::PointLike => out = out.with_parameter("sigma_m", 0.0),
        PositionDensity::Custom(_) => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel_j0;

    const NM: f64 = 1e-9;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::new(1e-13, 1e-12, 2000).unwrap()
    }

    #[test]
    fn ideal_signal_landmarks() {
        let f = StandingWaveField::new(500.0 * NM, 3.0).unwrap();
        let lambda = f.wavelength();
        assert!((ideal_signal(0.0, &f) - 6.0).abs() < 1e-15);
        assert!(ideal_signal(lambda / 4.0, &f).abs() < 1e-14);
        assert!((ideal_signal(lambda / 8.0, &f) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn point_like_is_full_contrast() {
        assert_eq!(
            visibility_from_density(&PositionDensity::PointLike, 1e7, &spec()).unwrap(),
            1.0
        );
        assert!(matches!(
            PositionDensity::gaussian(0.0f64).unwrap(),
            PositionDensity::PointLike
        ));
        assert!(PositionDensity::gaussian(-1.0f64).is_err());
    }

    #[test]
    fn gaussian_quadrature_matches_closed_form() {
        let k = std::f64::consts::TAU / (493.0 * NM);
        let rho = PositionDensity::gaussian(32.0 * NM).unwrap();
        let v = visibility_from_density(&rho, k, &spec()).unwrap();
        let closed = visibility_gaussian(k, 32.0 * NM).unwrap();
        assert!((v - closed).abs() < 1e-6);
        assert!((v - 0.717).abs() < 1e-3);
    }

    #[test]
    fn arcsine_gives_bessel() {
        let k = std::f64::consts::TAU / (493.0 * NM);
        for a_nm in [5.0, 40.0, 94.3, 150.0, 400.0] {
            let a = a_nm * NM;
            let v = visibility_from_density(&PositionDensity::arcsine(a).unwrap(), k, &spec()).unwrap();
            let want = bessel_j0(2.0 * k * a).unwrap();
            assert!((v - want).abs() < 1e-8, "a={a_nm} nm: {v} vs {want}");
        }
    }

    #[test]
    fn published_visibilities() {
        let k = |l: f64| std::f64::consts::TAU / (l * NM);
        assert!((visibility_gaussian(k(493.0), 32.0 * NM).unwrap() - 0.72).abs() < 0.005);
        assert!((visibility_gaussian(k(397.0), 43.0 * NM).unwrap() - 0.40).abs() < 0.005);
        assert!((visibility_gaussian(k(729.0), 16.0 * NM).unwrap() - 0.963).abs() < 0.002);
        assert!(visibility_gaussian(k(729.0), -1.0).is_err());
    }

    #[test]
    fn observed_signal_landmarks() {
        let f = StandingWaveField::new(600.0 * NM, 2.0).unwrap();
        let v = 0.6;
        assert!((observed_signal(0.0, &f, v).unwrap() - 2.0 * 1.6).abs() < 1e-15);
        assert!((observed_signal(f.wavelength() / 4.0, &f, v).unwrap() - 2.0 * 0.4).abs() < 1e-14);
        for i in 0..50 {
            let x = i as f64 * 7.3 * NM;
            assert!((observed_signal(x, &f, 1.0).unwrap() - ideal_signal(x, &f)).abs() < 1e-14);
        }
        assert!(observed_signal(0.0, &f, 1.2).is_err());
        assert!(observed_signal(0.0, &f, -0.1).is_err());
    }

    #[test]
    fn point_like_scan_extremes() {
        let f = StandingWaveField::new(493.0 * NM, 5.0).unwrap();
        let xs: Vec<f64> = (0..101).map(|i| i as f64 * f.wavelength() / 2.0 / 100.0).collect();
        let s = scan(&f, &PositionDensity::PointLike, &xs, &spec()).unwrap();
        let max = s.signals().iter().cloned().fold(f64::MIN, f64::max);
        let min = s.signals().iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - 10.0).abs() < 1e-12);
        assert!(min.abs() < 1e-12);
        assert_eq!(s.model, SignalModel::PointLike);
    }

    #[test]
    fn ca729_contrast_ratio() {
        let f = StandingWaveField::new(729.0 * NM, 1.0).unwrap();
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 * f.wavelength() / 200.0).collect();
        let s = scan(&f, &PositionDensity::gaussian(16.0 * NM).unwrap(), &xs, &spec()).unwrap();
        let max = s.signals().iter().cloned().fold(f64::MIN, f64::max);
        let min = s.signals().iter().cloned().fold(f64::MAX, f64::min);
        assert!((max / min / 53.0 - 1.0).abs() < 0.05, "{}", max / min);
    }

    #[test]
    fn custom_density_validation() {
        let sigma = 20.0 * NM;
        let ok = CustomDensity::new(
            move |x: f64| gaussian_pdf(x, sigma),
            Support::GaussianEnvelope { sigma },
            &spec(),
        );
        assert!(ok.is_ok());
        // unnormalised
        assert!(CustomDensity::new(
            move |x: f64| 2.0 * gaussian_pdf(x, sigma),
            Support::GaussianEnvelope { sigma },
            &spec()
        )
        .is_err());
        // asymmetric
        assert!(CustomDensity::new(
            move |x: f64| gaussian_pdf(x - 0.1 * sigma, sigma),
            Support::GaussianEnvelope { sigma },
            &spec()
        )
        .is_err());
        // uniform box on [-h, h]
        let h = 50.0 * NM;
        let boxed = CustomDensity::new(
            move |x: f64| if x.abs() <= h { 0.5 / h } else { 0.0 },
            Support::Finite { half_width: h },
            &spec(),
        )
        .unwrap();
        let k = 1e7;
        let v = visibility_from_density(&PositionDensity::Custom(boxed), k, &spec()).unwrap();
        let want = (2.0 * k * h).sin() / (2.0 * k * h);
        assert!((v - want).abs() < 1e-10);
    }

    #[test]
    fn second_moments() {
        let c = PositionDensity::arcsine(3.0f64).unwrap();
        assert_eq!(c.second_moment(&spec()).unwrap(), 4.5);
        assert_eq!(
            PositionDensity::gaussian(2.0f64)
                .unwrap()
                .second_moment(&spec())
                .unwrap(),
            4.0
        );
    }
}
