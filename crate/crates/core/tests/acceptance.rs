//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::Instant;

use ionscope::analysis::{cross_check, fit_fringe, sigma_from_visibility, CrossCheckConfig, CrossCheckParams};
use ionscope::domain::{wavenumber_from_wavelength, PositionAxis, PresetName, SignalModel};
use ionscope::doppler::{
    classical_signal, classical_visibility, gaussian_density, rayleigh_visibility, rayleigh_visibility_mc,
    thermal_position_density, time_domain_signal, RayleighMode,
};
use ionscope::numerics::{derive_seed, SeededSampler};
use ionscope::quantum::{thermal_density, thermal_visibility, travelling_wave_rate, which_way_report};
use ionscope::spatial::{visibility_from_density, visibility_gaussian, CustomDensity, Support};
use ionscope::{
    ClassicalOscillation, ExperimentPreset, FringeSignal, LambDicke, PositionDensity, QuadratureSpec, StandingWaveField,
};
use rand_distr::{Distribution, Normal};

const NM: f64 = 1e-9;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn eta(v: f64) -> LambDicke {
    LambDicke::new(v).unwrap()
}

fn ac1_published_extents() -> Check {
    let mut worst: f64 = 0.0;
    let mut got = Vec::new();
    for (v, lambda, want) in [(0.72, 493.0, 32.0), (0.40, 397.0, 43.0), (0.963, 729.0, 16.0)] {
        let s = sigma_from_visibility(v, lambda * NM).map_err(|e| e.to_string())? / NM;
        worst = worst.max((s - want).abs());
        got.push(format!("{s:.2}"));
    }
    ensure(
        worst <= 0.5,
        format!("sigma = [{}] nm, max |dev| = {worst:.3} nm (tol 0.5)", got.join(", ")),
    )
}

fn ac2_three_pictures() -> Check {
    let config = CrossCheckConfig::default();
    let (mut sd, mut sq) = (0.0f64, 0.0f64);
    for nbar in [0.0, 5.0, 10.0, 15.0, 20.0] {
        for e in [0.02, 0.19, 0.36, 0.53, 0.7] {
            let params = CrossCheckParams::new(TAU / (493.0 * NM), nbar, e).map_err(|e| e.to_string())?;
            let r = cross_check(&params, &config);
            let (Some(s), Some(d), Some(q)) = (r.spatial.value(), r.doppler_analytic.value(), r.quantum.value()) else {
                return Err(format!("a model path failed at nbar={nbar} eta={e}: {r:?}"));
            };
            sd = sd.max((s - d).abs());
            sq = sq.max((s - q).abs());
        }
    }
    ensure(
        sd < 1e-9 && sq < 1e-10,
        format!(
            "25 (nbar, eta): max |spatial-doppler| = {sd:.2e} (tol 1e-9), max |spatial-quantum| = {sq:.2e} (tol 1e-10)"
        ),
    )
}

fn ac3_time_average() -> Check {
    let field = StandingWaveField::new(493.0 * NM, 1.0).unwrap();
    let k = field.wavenumber();
    let mut sampler = SeededSampler::new(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let xc = 300.0 * NM * sampler.uniform_open0();
        let l = field.wavelength() * sampler.uniform_open0();
        let osc = ClassicalOscillation::new(xc, TAU * 1e6, l).map_err(|e| e.to_string())?;
        let brute = time_domain_signal(&osc, &field, 10_000, 256).map_err(|e| e.to_string())?;
        let closed = classical_signal(xc, k, l, 1.0).map_err(|e| e.to_string())?;
        worst = worst.max(((brute - closed) / closed).abs());
    }
    ensure(
        worst < 1e-8,
        format!("20 random (x_c, L), 1e4 periods x 256 steps: max rel dev = {worst:.2e} (tol 1e-8)"),
    )
}

fn ac4_rayleigh_gaussian() -> Check {
    let k = TAU / (493.0 * NM);
    let spec = QuadratureSpec::default();
    let mut worst_v: f64 = 0.0;
    for ks in [0.1, 0.4, 0.7, 1.5, 3.0] {
        let sigma = ks / k;
        let quad = rayleigh_visibility(k, sigma, RayleighMode::Quadrature(spec)).map_err(|e| e.to_string())?;
        worst_v = worst_v.max((quad - (-2.0 * ks * ks).exp()).abs());
    }
    let mut worst_rho: f64 = 0.0;
    for sigma in [10.0 * NM, 32.0 * NM, 80.0 * NM] {
        let grid: Vec<f64> = (-40..=40).map(|i| i as f64 * sigma / 10.0).collect();
        let rho = thermal_position_density(sigma, &grid, &spec).map_err(|e| e.to_string())?;
        let peak = gaussian_density(0.0, sigma);
        for (&x, &r) in grid.iter().zip(&rho) {
            worst_rho = worst_rho.max((r - gaussian_density(x, sigma)).abs() / peak);
        }
    }
    ensure(
        worst_v < 1e-9 && worst_rho < 1e-6,
        format!("max |V_quad - exp(-2(k sigma)^2)| = {worst_v:.2e} (tol 1e-9), max density dev / peak = {worst_rho:.2e} (tol 1e-6)"),
    )
}

fn ac5_thermal_sum() -> Check {
    let mut worst: f64 = 0.0;
    for nbar in [0.0, 0.5, 3.0, 12.0, 50.0] {
        for e in [0.03, 0.15, 0.4] {
            let v = thermal_visibility(nbar, eta(e)).map_err(|e| e.to_string())?;
            worst = worst.max((v - (-2.0 * e * e * (2.0 * nbar + 1.0)).exp()).abs());
        }
    }
    ensure(
        worst < 1e-10,
        format!("15 (nbar, eta) incl. nbar = 50: max |dev| = {worst:.2e} (tol 1e-10)"),
    )
}

fn ac6_unitarity() -> Check {
    let rest = 2.5;
    let mut worst: f64 = 0.0;
    for nbar in [0.0, 1.0, 8.0] {
        for e in [0.05, 0.2, 0.5] {
            let n_max = ionscope::domain::thermal_truncation(nbar).map_err(|e| e.to_string())?;
            let cutoff = n_max + 60;
            let r = travelling_wave_rate(nbar, eta(e), rest, cutoff).map_err(|e| e.to_string())?;
            worst = worst.max(((r - rest) / rest).abs());
        }
    }
    ensure(
        worst < 1e-6,
        format!("9 (nbar, eta): max rel |rate - S_rest| = {worst:.2e} (tol 1e-6)"),
    )
}

fn ac7_fourier_pair() -> Check {
    let k = TAU / (729.0 * NM);
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for (nbar, e) in [
        (0.0, 0.05),
        (0.0, 0.3),
        (1.0, 0.1),
        (2.5, 0.2),
        (6.0, 0.08),
        (15.0, 0.05),
    ] {
        let sigma0 = e / k;
        let envelope = sigma0 * (2.0 * nbar + 1.0f64).sqrt();
        let rho = CustomDensity::new(
            move |x| thermal_density(x, nbar, sigma0).unwrap(),
            Support::GaussianEnvelope { sigma: envelope },
            &spec,
        )
        .map_err(|e| e.to_string())?;
        let v_spatial = visibility_from_density(&PositionDensity::Custom(rho), k, &spec).map_err(|e| e.to_string())?;
        let v_quantum = thermal_visibility(nbar, eta(e)).map_err(|e| e.to_string())?;
        worst = worst.max((v_spatial - v_quantum).abs());
    }
    ensure(
        worst < 1e-7,
        format!("6 (nbar, eta): max |V[rho_thermal] - V_quantum| = {worst:.2e} (tol 1e-7)"),
    )
}

fn fringe_scan(
    k: f64,
    mean: f64,
    v: f64,
    phase: f64,
    xs: &[f64],
    noise: Option<(&Normal<f64>, &mut SeededSampler)>,
) -> FringeSignal {
    let mut ys: Vec<f64> = xs
        .iter()
        .map(|&x| mean * (1.0 + v * (2.0 * k * x + phase).cos()))
        .collect();
    if let Some((dist, rng)) = noise {
        for y in &mut ys {
            *y = (*y + dist.sample(rng)).max(0.0);
        }
    }
    FringeSignal::new(xs.to_vec(), ys, SignalModel::External, PositionAxis::TrapPosition).unwrap()
}

fn ac8_fit_calibration() -> Check {
    let lambda = 493.0 * NM;
    let k = TAU / lambda;
    let (mean, v, phase) = (4.0, 0.72, 0.3);
    let xs50: Vec<f64> = (0..50).map(|i| i as f64 * lambda / 37.0).collect();
    let fit = fit_fringe(&fringe_scan(k, mean, v, phase, &xs50, None), k).map_err(|e| e.to_string())?;
    let exact_dev = (fit.mean - mean)
        .abs()
        .max((fit.visibility - v).abs())
        .max((fit.phase - phase).abs());

    let xs200: Vec<f64> = (0..200).map(|i| i as f64 * lambda / 53.0).collect();
    let noise = Normal::new(0.0, 0.02 * mean).unwrap();
    let trials = 500;
    let mut estimates = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = SeededSampler::new(derive_seed(8, t as u64));
        let s = fringe_scan(k, mean, v, phase, &xs200, Some((&noise, &mut rng)));
        estimates.push(fit_fringe(&s, k).map_err(|e| e.to_string())?.visibility);
    }
    let n = trials as f64;
    let avg = estimates.iter().sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e - avg).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    let bias = avg - v;
    ensure(
        exact_dev < 1e-9 && bias.abs() < 3.0 * se,
        format!(
            "noiseless max |dev| = {exact_dev:.2e} (tol 1e-9); 500 noisy trials: bias = {bias:.2e}, 3 SE = {:.2e}",
            3.0 * se
        ),
    )
}

fn ac9_monte_carlo() -> Check {
    let preset = ExperimentPreset::get(PresetName::MirrorBa493);
    let k = wavenumber_from_wavelength(preset.wavelength).unwrap();
    let sigma = preset.published_sigma;
    let run = || rayleigh_visibility_mc(k, sigma, &mut SeededSampler::new(9), 1_000_000).map_err(|e| e.to_string());
    let (a, b) = (run()?, run()?);
    let analytic = rayleigh_visibility(k, sigma, RayleighMode::Analytic).map_err(|e| e.to_string())?;
    let dev = (a.mean - analytic).abs();
    let same = a.mean.to_bits() == b.mean.to_bits();
    ensure(
        dev < 0.002 && same,
        format!(
            "N = 1e6: V_mc = {:.5}, analytic = {analytic:.5}, |dev| = {dev:.1e} (tol 0.002), repeatable = {same}",
            a.mean
        ),
    )
}

fn ac10_limits() -> Check {
    let k = TAU / (493.0 * NM);
    let spec = QuadratureSpec::default();
    let mut sampler = SeededSampler::new(10);
    let at_rest = [
        visibility_from_density(&PositionDensity::gaussian(0.0).unwrap(), k, &spec),
        visibility_gaussian(k, 0.0),
        classical_visibility(0.0, k),
        rayleigh_visibility(k, 0.0, RayleighMode::Analytic),
        rayleigh_visibility(k, 0.0, RayleighMode::Quadrature(spec)),
        rayleigh_visibility(
            k,
            0.0,
            RayleighMode::MonteCarlo {
                sampler: &mut sampler,
                samples: 100,
            },
        ),
        thermal_visibility(0.0, eta(0.0)),
        thermal_visibility(7.0, eta(0.0)),
    ];
    let at_rest: Vec<f64> = at_rest
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let all_one = at_rest.iter().all(|&v| v == 1.0);

    let shallow = which_way_report(0.0, eta(5.0f64.sqrt())).map_err(|e| e.to_string())?;
    let ground_ok = [0.01, 0.1, 0.5, 1.0].iter().all(|&e| {
        let v = thermal_visibility(0.0, eta(e)).unwrap();
        v < 1.0 && (v - (-2.0 * e * e).exp()).abs() < 1e-15
    });
    ensure(
        all_one && shallow.visibility < 5e-5 && ground_ok,
        format!(
            "sigma = 0 gives V = 1 on {} paths: {all_one}; 2 eta^2 = 10 gives V = {:.2e} (tol 5e-5); ground state V = exp(-2 eta^2) < 1: {ground_ok}",
            at_rest.len(),
            shallow.visibility
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("published rms extents from measured visibility", ac1_published_extents),
        ("spatial, doppler and quantum visibilities agree", ac2_three_pictures),
        ("bessel closed form matches brute-force time average", ac3_time_average),
        ("rayleigh average of J0 is gaussian", ac4_rayleigh_gaussian),
        ("thermal laguerre sum matches closed form", ac5_thermal_sum),
        ("travelling-wave kick is unitary", ac6_unitarity),
        (
            "visibility is the fourier transform of the thermal density",
            ac7_fourier_pair,
        ),
        ("fringe fit is exact and unbiased", ac8_fit_calibration),
        ("monte carlo agrees with analytic and is repeatable", ac9_monte_carlo),
        ("degenerate and limiting cases", ac10_limits),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("AC{:<2} {tag} {name}: {detail} [{ms:.0} ms]", i + 1);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
