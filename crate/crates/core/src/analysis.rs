//! Inverse problems and estimators: rms extent from a measured visibility,
//! occupation and thermal energy from the extent, fringe fitting, and the
//! cross-model equivalence report.

use serde::Serialize;

use crate::domain::{
    constants::PLANCK, ground_state_extent, wavenumber_from_wavelength, ExperimentPreset, FringeSignal, LambDicke,
    StandingWaveField,
};
use crate::doppler::{
    classical_visibility, rayleigh_visibility, rayleigh_visibility_mc, time_domain_signal, ClassicalOscillation,
    RayleighMode,
};
use crate::error::{Error, Result};
use crate::numerics::{QuadratureSpec, SeededSampler};
use crate::quantum::thermal_visibility;
use crate::scalar::Scalar;
use crate::spatial::{visibility_from_density, PositionDensity};

/// Gaussian rms extent that would produce visibility `v` at wavelength
/// `lambda`, `sqrt(-ln V) / (k sqrt 2)`.
///
/// Any other contrast loss (laser linewidth, imperfect mode overlap, drifts)
/// also lowers `V`, so the result is an upper limit on the true extent.
pub fn sigma_from_visibility<T: Scalar>(v: T, wavelength: T) -> Result<T> {
    if !(v > T::zero() && v <= T::one()) {
        return Err(Error::invalid(format!("visibility must lie in (0, 1], got {v}")));
    }
    let k = wavenumber_from_wavelength(wavelength)?;
    if v == T::one() {
        return Ok(T::zero());
    }
    Ok((-v.ln()).sqrt() / (k * T::SQRT_2()))
}

/// Mean occupation `(sigma^2 / sigma0^2 - 1) / 2` of the thermal state with
/// rms extent `sigma`.
pub fn nbar_from_sigma<T: Scalar>(sigma: T, ground_extent: T) -> Result<T> {
    if !(ground_extent > T::zero() && ground_extent.is_finite()) {
        return Err(Error::invalid(format!(
            "ground-state extent must be positive, got {ground_extent}"
        )));
    }
    if !sigma.is_finite() || sigma < ground_extent {
        return Err(Error::invalid(format!(
            "rms extent {sigma} is below the ground-state extent {ground_extent}"
        )));
    }
    let r = sigma / ground_extent;
    Ok(((r * r - T::one()) / T::lit(2.0)).max(T::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermalEnergy<T> {
    pub joules: T,
    /// `E / h`.
    pub hertz: T,
}

/// `E_th = M Omega_t^2 sigma^2`.
pub fn thermal_energy<T: Scalar>(mass: T, trap_frequency: T, sigma: T) -> Result<ThermalEnergy<T>> {
    for (name, v) in [
        ("mass", mass),
        ("trap frequency", trap_frequency),
        ("rms extent", sigma),
    ] {
        if !(v > T::zero() && v.is_finite()) {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let joules = mass * trap_frequency * trap_frequency * sigma * sigma;
    Ok(ThermalEnergy {
        joules,
        hertz: joules / T::lit(PLANCK),
    })
}

/// `(S_max - S_min) / (S_max + S_min)` over the samples.
///
/// Biased low when the grid misses the fringe extrema; [`fit_fringe`] is not.
pub fn estimate_visibility_minmax<T: Scalar>(signal: &FringeSignal<T>, k: T) -> Result<T> {
    if !(k > T::zero() && k.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    let period = T::PI() / k;
    if signal.len() < 2 || signal.span() < period * (T::one() - T::lit(1e-9)) {
        return Err(Error::InsufficientCoverage(format!(
            "{} samples spanning {:e} m; one fringe period is {:e} m",
            signal.len(),
            signal.span().as_f64(),
            period.as_f64()
        )));
    }
    let (lo, hi) = signal
        .signals()
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    if hi + lo == T::zero() {
        return Ok(T::zero());
    }
    Ok((hi - lo) / (hi + lo))
}

/// Least-squares estimate of `S (1 + V cos(2kx + phi))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult<T> {
    pub mean: T,
    pub visibility: T,
    pub phase: T,
    pub mean_std_error: T,
    pub visibility_std_error: T,
    pub phase_std_error: T,
    /// Euclidean norm of the residual vector.
    pub residual_norm: T,
    pub samples: usize,
}

/// Fits the fringe model at known `k` through the linear parameters
/// `(S, S V cos phi, S V sin phi)` against `[1, cos 2kx, -sin 2kx]`, solved by
/// a thin QR decomposition.
///
/// Standard errors come from the residual variance and first-order
/// propagation. `V` is reported as `min(|V|, 1)`.
pub fn fit_fringe<T: Scalar>(signal: &FringeSignal<T>, k: T) -> Result<FitResult<T>> {
    if !(k > T::zero() && k.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    let n = signal.len();
    if n < 4 {
        return Err(Error::Fit(format!("need at least 4 samples, got {n}")));
    }
    let two_k = T::lit(2.0) * k;
    let x0 = signal.positions()[0];
    let mut cols: [Vec<T>; 3] = [vec![T::one(); n], Vec::with_capacity(n), Vec::with_capacity(n)];
    for &x in signal.positions() {
        // phase is measured from x = 0; shifting by x0 keeps the arguments small
        let (s, c) = (two_k * (x - x0)).sin_cos();
        cols[1].push(c);
        cols[2].push(-s);
    }
    let y = signal.signals();

    // modified Gram-Schmidt
    let mut r = [[T::zero(); 3]; 3];
    for j in 0..3 {
        let norm0 = dot(&cols[j], &cols[j]).sqrt();
        for i in 0..j {
            let (qi, cj) = split_pair(&mut cols, i, j);
            let rij = dot(qi, cj);
            r[i][j] = rij;
            for (c, q) in cj.iter_mut().zip(qi) {
                *c = *c - rij * *q;
            }
        }
        let norm = dot(&cols[j], &cols[j]).sqrt();
        if !(norm > T::lit(1e-8) * norm0) {
            return Err(Error::Fit(format!(
                "design matrix is rank deficient; the {n} positions do not resolve the fringe phase"
            )));
        }
        r[j][j] = norm;
        cols[j].iter_mut().for_each(|c| *c = *c / norm);
    }
    let qty: Vec<T> = cols.iter().map(|q| dot(q, y)).collect();
    let mut beta = [T::zero(); 3];
    for i in (0..3).rev() {
        let mut acc = qty[i];
        for j in i + 1..3 {
            acc = acc - r[i][j] * beta[j];
        }
        beta[i] = acc / r[i][i];
    }
    let [c0, c1_shifted, c2_shifted] = beta;
    // undo the x0 shift: cos(2k(x-x0) + psi) = cos(2kx + psi - 2k x0)
    let amp = (c1_shifted * c1_shifted + c2_shifted * c2_shifted).sqrt();
    let psi = c2_shifted.atan2(c1_shifted);
    let phase = wrap_phase(psi - two_k * x0);

    let mut rss = T::zero();
    for (&x, &yi) in signal.positions().iter().zip(y) {
        let (s, c) = (two_k * (x - x0)).sin_cos();
        let e = yi - (c0 + c1_shifted * c - c2_shifted * s);
        rss = rss + e * e;
    }
    let residual_norm = rss.sqrt();
    if !(c0 > T::zero()) {
        return Err(Error::Fit(format!("fitted mean signal {c0} is not positive")));
    }

    // covariance s^2 (R^T R)^-1 = s^2 R^-1 R^-T
    let s2 = rss / T::from_usize_lossy(n - 3);
    let rinv = invert_upper(&r);
    let mut cov = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = T::zero();
            for m in 0..3 {
                acc = acc + rinv[i][m] * rinv[j][m];
            }
            cov[i][j] = s2 * acc;
        }
    }
    let visibility = amp / c0;
    // gradients of V = amp / c0 and psi = atan2(c2, c1)
    let (gv, gp) = if amp > T::zero() {
        (
            [-visibility / c0, c1_shifted / (c0 * amp), c2_shifted / (c0 * amp)],
            [T::zero(), -c2_shifted / (amp * amp), c1_shifted / (amp * amp)],
        )
    } else {
        ([T::zero(); 3], [T::zero(); 3])
    };
    let quad = |g: [T; 3]| {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + g[i] * cov[i][j] * g[j];
            }
        }
        acc.max(T::zero()).sqrt()
    };
    let phase_std_error = if amp > T::zero() { quad(gp) } else { T::PI() };
    Ok(FitResult {
        mean: c0,
        visibility: visibility.min(T::one()),
        phase,
        mean_std_error: cov[0][0].max(T::zero()).sqrt(),
        visibility_std_error: quad(gv),
        phase_std_error,
        residual_norm,
        samples: n,
    })
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn split_pair<T>(cols: &mut [Vec<T>; 3], i: usize, j: usize) -> (&Vec<T>, &mut Vec<T>) {
    debug_assert!(i < j);
    let (head, tail) = cols.split_at_mut(j);
    (&head[i], &mut tail[0])
}

fn invert_upper<T: Scalar>(r: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    let mut inv = [[T::zero(); 3]; 3];
    for j in 0..3 {
        inv[j][j] = T::one() / r[j][j];
        for i in (0..j).rev() {
            let mut acc = T::zero();
            for m in i + 1..=j {
                acc = acc + r[i][m] * inv[m][j];
            }
            inv[i][j] = -acc / r[i][i];
        }
    }
    inv
}

fn wrap_phase<T: Scalar>(p: T) -> T {
    let tau = T::TAU();
    let w = p - tau * ((p + T::PI()) / tau).floor();
    if w >= T::PI() {
        w - tau
    } else {
        w
    }
}

/// Parameters shared by all model paths: wavenumber, occupation and
/// Lamb-Dicke parameter. The rms extent is `(eta / k) sqrt(2 nbar + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossCheckParams<T> {
    pub wavenumber: T,
    pub nbar: T,
    pub eta: T,
}

impl<T: Scalar> CrossCheckParams<T> {
    pub fn new(wavenumber: T, nbar: T, eta: T) -> Result<Self> {
        if !(wavenumber > T::zero() && wavenumber.is_finite()) {
            return Err(Error::invalid(format!("wavenumber must be positive, got {wavenumber}")));
        }
        if !(nbar >= T::zero() && nbar.is_finite()) {
            return Err(Error::invalid(format!(
                "mean occupation must be non-negative, got {nbar}"
            )));
        }
        LambDicke::new(eta)?;
        Ok(Self { wavenumber, nbar, eta })
    }

    /// Ground-state description of a Gaussian of rms `sigma`: `nbar = 0`,
    /// `eta = k sigma`.
    pub fn from_sigma(wavenumber: T, sigma: T) -> Result<Self> {
        if !(sigma >= T::zero() && sigma.is_finite()) {
            return Err(Error::invalid(format!("rms extent must be non-negative, got {sigma}")));
        }
        Self::new(wavenumber, T::zero(), wavenumber * sigma)
    }

    /// Preset at its published rms extent, in a trap of angular frequency
    /// `trap_frequency`.
    pub fn from_preset(preset: &ExperimentPreset<T>, trap_frequency: T) -> Result<Self> {
        let k = wavenumber_from_wavelength(preset.wavelength)?;
        let sigma0 = ground_state_extent(preset.ion_mass, trap_frequency)?;
        let nbar = nbar_from_sigma(preset.published_sigma, sigma0)?;
        Self::new(k, nbar, k * sigma0)
    }

    pub fn sigma(&self) -> T {
        self.eta / self.wavenumber * (T::lit(2.0) * self.nbar + T::one()).sqrt()
    }
}

/// Pass thresholds for [`cross_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossCheckTolerances {
    pub spatial_doppler: f64,
    pub spatial_quantum: f64,
    pub doppler_quantum: f64,
    /// Monte Carlo deviation allowed in standard errors.
    pub mc_sigmas: f64,
    /// Absolute Monte Carlo tolerance; replaces the standard-error bound when set.
    pub mc_absolute: Option<f64>,
}

impl Default for CrossCheckTolerances {
    fn default() -> Self {
        Self {
            spatial_doppler: 1e-9,
            spatial_quantum: 1e-10,
            doppler_quantum: 1e-10,
            mc_sigmas: 3.0,
            mc_absolute: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrossCheckConfig<T> {
    pub quadrature: QuadratureSpec<T>,
    pub mc_samples: usize,
    pub seed: u64,
    pub tolerances: CrossCheckTolerances,
}

impl<T: Scalar> Default for CrossCheckConfig<T> {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default(),
            mc_samples: 10_000,
            seed: 0,
            tolerances: CrossCheckTolerances::default(),
        }
    }
}

/// Result of one model path; errors are kept, not propagated.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum PathOutcome<T> {
    Ok { visibility: T },
    Failed { error: String },
}

impl<T: Scalar> PathOutcome<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(visibility) => PathOutcome::Ok { visibility },
            Err(e) => PathOutcome::Failed { error: e.to_string() },
        }
    }

    pub fn value(&self) -> Option<T> {
        match self {
            PathOutcome::Ok { visibility } => Some(*visibility),
            PathOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Analytic,
    Statistical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub pair: &'static str,
    pub kind: CheckKind,
    /// `None` when either side failed.
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub samples: usize,
    pub seed: u64,
    pub std_error: Option<f64>,
}

/// Which Bessel argument a brute-force time average supports for a
/// fixed-amplitude oscillation of amplitude `sigma`: `J0(2 k x_c)` or the
/// commonly quoted `J0(k x_c)`. Informational; not part of the verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselArgumentCheck<T> {
    pub amplitude: T,
    pub time_average: T,
    pub j0_2kx: T,
    pub j0_kx: T,
    /// The time average matches `J0(2 k x_c)` to 1e-9.
    pub supports_2kx: bool,
}

fn bessel_argument_check<T: Scalar>(k: T, amplitude: T) -> Result<BesselArgumentCheck<T>> {
    let field = StandingWaveField::new(T::TAU() / k, T::one())?;
    let osc = ClassicalOscillation::new(amplitude, T::one(), T::zero())?;
    // at L = 0 the signal is S (1 + V)
    let time_average = time_domain_signal(&osc, &field, 1, 512)? - T::one();
    let j0_2kx = classical_visibility(amplitude, k)?;
    let j0_kx = classical_visibility(amplitude / T::lit(2.0), k)?;
    Ok(BesselArgumentCheck {
        amplitude,
        time_average,
        j0_2kx,
        j0_kx,
        supports_2kx: (time_average - j0_2kx).abs() <= T::lit(1e-9),
    })
}

/// Visibility by every model path with pairwise deviations and verdicts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VisibilityReport<T> {
    pub params: CrossCheckParams<T>,
    pub sigma: T,
    pub closed_form: T,
    pub spatial: PathOutcome<T>,
    pub doppler_analytic: PathOutcome<T>,
    pub doppler_mc: PathOutcome<T>,
    pub quantum: PathOutcome<T>,
    pub monte_carlo: MonteCarloSummary,
    pub bessel_argument: Option<BesselArgumentCheck<T>>,
    pub checks: Vec<PairCheck>,
    pub analytic_passed: bool,
    pub statistical_passed: bool,
    pub passed: bool,
}

/// Visibility by spatial quadrature of the Gaussian density, by quadrature
/// of `J0` over Rayleigh amplitudes, by Monte Carlo over the same amplitudes,
/// and by the thermal Laguerre sum.
pub fn cross_check<T: Scalar>(params: &CrossCheckParams<T>, config: &CrossCheckConfig<T>) -> VisibilityReport<T> {
    let k = params.wavenumber;
    let sigma = params.sigma();
    let ks = k * sigma;
    let closed_form = (-T::lit(2.0) * ks * ks).exp();

    let spatial = PathOutcome::from_result(
        PositionDensity::gaussian(sigma).and_then(|rho| visibility_from_density(&rho, k, &config.quadrature)),
    );
    let doppler_analytic = PathOutcome::from_result(rayleigh_visibility(
        k,
        sigma,
        RayleighMode::Quadrature(config.quadrature),
    ));
    let mut sampler = SeededSampler::new(config.seed);
    let mc = rayleigh_visibility_mc(k, sigma, &mut sampler, config.mc_samples);
    let mc_se = mc.as_ref().ok().map(|e| e.std_error.as_f64());
    let doppler_mc = PathOutcome::from_result(mc.map(|e| e.mean));
    let quantum =
        PathOutcome::from_result(LambDicke::new(params.eta).and_then(|eta| thermal_visibility(params.nbar, eta)));

    let tol = &config.tolerances;
    let pair = |name: &'static str, kind, a: &PathOutcome<T>, b: &PathOutcome<T>, tolerance: f64| {
        let deviation = match (a.value(), b.value()) {
            (Some(x), Some(y)) => Some((x - y).abs().as_f64()),
            _ => None,
        };
        PairCheck {
            pair: name,
            kind,
            deviation,
            tolerance,
            passed: deviation.is_some_and(|d| d <= tolerance),
        }
    };
    let mc_tolerance = tol.mc_absolute.unwrap_or_else(|| tol.mc_sigmas * mc_se.unwrap_or(0.0));
    let checks = vec![
        pair(
            "spatial-doppler",
            CheckKind::Analytic,
            &spatial,
            &doppler_analytic,
            tol.spatial_doppler,
        ),
        pair(
            "spatial-quantum",
            CheckKind::Analytic,
            &spatial,
            &quantum,
            tol.spatial_quantum,
        ),
        pair(
            "doppler-quantum",
            CheckKind::Analytic,
            &doppler_analytic,
            &quantum,
            tol.doppler_quantum,
        ),
        pair(
            "doppler_mc-spatial",
            CheckKind::Statistical,
            &doppler_mc,
            &spatial,
            mc_tolerance,
        ),
    ];
    let verdict = |kind| checks.iter().filter(|c| c.kind == kind).all(|c| c.passed);
    let analytic_passed = verdict(CheckKind::Analytic);
    let statistical_passed = verdict(CheckKind::Statistical);
    VisibilityReport {
        params: *params,
        sigma,
        closed_form,
        spatial,
        doppler_analytic,
        doppler_mc,
        quantum,
        monte_carlo: MonteCarloSummary {
            samples: config.mc_samples,
            seed: config.seed,
            std_error: mc_se,
        },
        bessel_argument: bessel_argument_check(k, sigma).ok(),
        checks,
        analytic_passed,
        statistical_passed,
        passed: analytic_passed && statistical_passed,
    }
}
