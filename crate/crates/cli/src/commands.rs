use std::fmt::Write as _;

use ionscope::analysis::{fit_fringe, nbar_from_sigma, sigma_from_visibility, thermal_energy, ThermalEnergy};
use ionscope::domain::{ground_state_extent, wavenumber_from_wavelength};
use ionscope::doppler::{rayleigh_visibility, RayleighMode};
use ionscope::quantum::thermal_visibility;
use ionscope::spatial::{visibility_from_density, PositionDensity};
use ionscope::{ExperimentPreset, FitResult, QuadratureSpec, VisibilityReport};
use serde::Serialize;

use crate::args::{ModelChoice, ScanModel};
use crate::config::{Command, Failure, InvertInput, OutputFormat, Resolved, RunConfig};
use crate::{scanfile, SCHEMA_VERSION};

const NM: f64 = 1e-9;

/// Rendered command output.
pub struct Outcome {
    pub document: String,
    /// Printed to stdout when the document goes to a file.
    pub summary: Option<String>,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(document: String) -> Self {
        Self {
            document,
            summary: None,
            exit_code: 0,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, Failure> {
    match &config.command {
        Command::Visibility { runs, model } => visibility(runs, *model, config.format),
        Command::Scan {
            source,
            model,
            field,
            positions,
        } => {
            let spec = QuadratureSpec::default();
            let signal = match model {
                ScanModel::PointLike => ionscope::spatial::scan(field, &PositionDensity::PointLike, positions, &spec)?,
                ScanModel::Spatial => {
                    let rho = PositionDensity::gaussian(source.state()?.sigma)?;
                    ionscope::spatial::scan(field, &rho, positions, &spec)?
                }
                ScanModel::Doppler => {
                    ionscope::doppler::scan(field, source.state()?.sigma, positions, RayleighMode::Quadrature(spec))?
                }
                ScanModel::Quantum => {
                    let s = source.state()?;
                    ionscope::quantum::scan(field, s.nbar, source.lamb_dicke()?, positions)?
                }
            };
            Ok(Outcome::ok(match config.format {
                OutputFormat::Json => scanfile::to_json(&signal),
                _ => scanfile::to_csv(&signal)?,
            }))
        }
        Command::Invert {
            input,
            wavelength,
            trap,
        } => invert(input, *wavelength, *trap, config.format),
        Command::Xcheck { runs, config: cc } => {
            let reports: Vec<LabelledReport> = runs
                .iter()
                .map(|r| {
                    Ok(LabelledReport {
                        label: r.label.clone(),
                        wavelength_m: r.wavelength,
                        report: ionscope::analysis::cross_check(&r.cross_check_params()?, cc),
                    })
                })
                .collect::<Result<_, Failure>>()?;
            let passed = reports.iter().all(|r| r.report.passed);
            let doc = XcheckDocument {
                schema_version: SCHEMA_VERSION,
                command: "xcheck",
                seed: config.seed,
                mc_samples: cc.mc_samples,
                tolerances: cc.tolerances,
                runs: reports,
                passed,
            };
            let mut summary = String::new();
            for r in &doc.runs {
                let _ = write!(summary, "{}: {}", r.label, verdict(r.report.passed));
                for c in r.report.checks.iter().filter(|c| !c.passed) {
                    let dev = c.deviation.map_or("path failed".to_owned(), |d| format!("{d:.3e}"));
                    let _ = write!(
                        summary,
                        "; {} ({:?}) deviation {dev} > {:.3e}",
                        c.pair, c.kind, c.tolerance
                    );
                }
                summary.push('\n');
            }
            Ok(Outcome {
                document: serde_json::to_string_pretty(&doc).expect("report serialises") + "\n",
                summary: Some(summary),
                exit_code: if passed { 0 } else { 3 },
            })
        }
        Command::PresetList => Ok(Outcome::ok(preset_list(config.format))),
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct LabelledReport {
    label: String,
    wavelength_m: f64,
    report: VisibilityReport,
}

#[derive(Serialize)]
struct XcheckDocument {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    mc_samples: usize,
    tolerances: ionscope::analysis::CrossCheckTolerances,
    runs: Vec<LabelledReport>,
    passed: bool,
}

#[derive(Serialize, Default)]
struct ModelVisibilities {
    #[serde(skip_serializing_if = "Option::is_none")]
    spatial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    doppler: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum: Option<f64>,
}

#[derive(Serialize)]
struct VisibilityRun {
    label: String,
    wavelength_m: f64,
    sigma_m: f64,
    nbar: f64,
    eta: f64,
    visibility: ModelVisibilities,
}

fn visibility(runs: &[Resolved], model: ModelChoice, format: OutputFormat) -> Result<Outcome, Failure> {
    let spec = QuadratureSpec::default();
    let want = |m: ModelChoice| model == ModelChoice::All || model == m;
    let mut out = Vec::new();
    for r in runs {
        let s = r.state()?;
        let k = r.wavenumber;
        let mut v = ModelVisibilities::default();
        if want(ModelChoice::Spatial) {
            v.spatial = Some(visibility_from_density(&PositionDensity::gaussian(s.sigma)?, k, &spec)?);
        }
        if want(ModelChoice::Doppler) {
            v.doppler = Some(rayleigh_visibility(k, s.sigma, RayleighMode::Quadrature(spec))?);
        }
        if want(ModelChoice::Quantum) {
            v.quantum = Some(thermal_visibility(s.nbar, r.lamb_dicke()?)?);
        }
        out.push(VisibilityRun {
            label: r.label.clone(),
            wavelength_m: r.wavelength,
            sigma_m: s.sigma,
            nbar: s.nbar,
            eta: s.eta,
            visibility: v,
        });
    }
    if format == OutputFormat::Json {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema_version: u32,
            command: &'static str,
            runs: &'a [VisibilityRun],
        }
        let doc = Doc {
            schema_version: SCHEMA_VERSION,
            command: "visibility",
            runs: &out,
        };
        return Ok(Outcome::ok(
            serde_json::to_string_pretty(&doc).expect("serialises") + "\n",
        ));
    }
    let mut text = String::new();
    for r in &out {
        let _ = writeln!(
            text,
            "{}: lambda = {} nm, sigma = {:.4} nm, nbar = {:.4}, eta = {:.6}",
            r.label,
            trim_float(r.wavelength_m / NM),
            r.sigma_m / NM,
            r.nbar,
            r.eta
        );
        for (name, v) in [
            ("spatial", r.visibility.spatial),
            ("doppler", r.visibility.doppler),
            ("quantum", r.visibility.quantum),
        ] {
            if let Some(v) = v {
                let _ = writeln!(text, "  {name:<8} V = {v:.10}");
            }
        }
    }
    Ok(Outcome::ok(text))
}

fn trim_float(x: f64) -> String {
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

#[derive(Serialize)]
struct InvertDocument {
    schema_version: u32,
    command: &'static str,
    wavelength_m: f64,
    visibility: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FitResult>,
    /// Every quantity below is an upper limit: other contrast losses also lower V.
    sigma_upper_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_extent_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nbar_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thermal_energy_upper: Option<ThermalEnergy<f64>>,
}

fn invert(
    input: &InvertInput,
    wavelength: Option<f64>,
    trap: Option<(f64, f64)>,
    format: OutputFormat,
) -> Result<Outcome, Failure> {
    let (v, fit, wavelength) = match input {
        InvertInput::Visibility(v) => (*v, None, wavelength.expect("checked at parse time")),
        InvertInput::File(path) => {
            let signal = scanfile::read(path)?;
            let wavelength = match wavelength.or_else(|| signal.parameters.get("wavelength_m").copied()) {
                Some(w) => w,
                None => {
                    return Err(Failure::validation(
                        "the scan file records no wavelength; pass --lambda-nm",
                    ))
                }
            };
            let fit = fit_fringe(&signal, wavenumber_from_wavelength(wavelength)?)?;
            (fit.visibility, Some(fit), wavelength)
        }
    };
    let sigma = sigma_from_visibility(v, wavelength)?;
    let (mut sigma0, mut nbar, mut energy) = (None, None, None);
    if let Some((mass, omega)) = trap {
        let s0 = ground_state_extent(mass, omega)?;
        sigma0 = Some(s0);
        nbar = Some(nbar_from_sigma(sigma, s0)?);
        energy = Some(thermal_energy(mass, omega, sigma)?);
    }
    let doc = InvertDocument {
        schema_version: SCHEMA_VERSION,
        command: "invert",
        wavelength_m: wavelength,
        visibility: v,
        fit,
        sigma_upper_m: sigma,
        ground_extent_m: sigma0,
        nbar_upper: nbar,
        thermal_energy_upper: energy,
    };
    if format == OutputFormat::Json {
        return Ok(Outcome::ok(
            serde_json::to_string_pretty(&doc).expect("serialises") + "\n",
        ));
    }
    let mut t = String::new();
    let _ = writeln!(t, "wavelength        {} nm", trim_float(wavelength / NM));
    if let Some(f) = &doc.fit {
        let _ = writeln!(
            t,
            "fit               {} samples, residual norm {:.3e}",
            f.samples, f.residual_norm
        );
        let _ = writeln!(t, "  mean signal     {:.10} +/- {:.2e}", f.mean, f.mean_std_error);
        let _ = writeln!(t, "  phase           {:.6} rad +/- {:.2e}", f.phase, f.phase_std_error);
        let _ = writeln!(
            t,
            "visibility        {:.10} +/- {:.2e}",
            f.visibility, f.visibility_std_error
        );
    } else {
        let _ = writeln!(t, "visibility        {v}");
    }
    let _ = writeln!(t, "sigma             <= {:.4} nm", sigma / NM);
    if let (Some(s0), Some(n), Some(e)) = (sigma0, nbar, energy) {
        let _ = writeln!(t, "ground extent     {:.4} nm", s0 / NM);
        let _ = writeln!(t, "nbar              <= {n:.4}");
        let _ = writeln!(t, "thermal energy    <= {:.4e} J ({:.4} MHz)", e.joules, e.hertz / 1e6);
    }
    let _ = writeln!(
        t,
        "(upper limits: any other loss of contrast also lowers the visibility)"
    );
    Ok(Outcome::ok(t))
}

fn preset_list(format: OutputFormat) -> String {
    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        wavelength_m: f64,
        ion_mass_kg: f64,
        measured_visibility: f64,
        published_sigma_m: f64,
        wave_packet_estimate_m: Option<f64>,
        mirror_delay_s: Option<f64>,
        signal_kind: ionscope::domain::SignalKind,
    }
    let rows: Vec<Row> = ExperimentPreset::all()
        .iter()
        .map(|p| Row {
            name: p.name.as_str(),
            wavelength_m: p.wavelength,
            ion_mass_kg: p.ion_mass,
            measured_visibility: p.measured_visibility,
            published_sigma_m: p.published_sigma,
            wave_packet_estimate_m: p.wave_packet_estimate,
            mirror_delay_s: p.mirror_delay,
            signal_kind: p.signal_kind,
        })
        .collect();
    if format == OutputFormat::Json {
        return serde_json::to_string_pretty(&rows).expect("serialises") + "\n";
    }
    let mut t = format!(
        "{:<26}{:>8}{:>9}{:>8}{:>10}  {}\n",
        "name", "lambda", "mass", "V", "sigma", "signal"
    );
    for r in &rows {
        let kind = serde_json::to_value(r.signal_kind).expect("serialises");
        let _ = writeln!(
            t,
            "{:<26}{:>5} nm{:>7.0} u{:>8}{:>7} nm  {}",
            r.name,
            trim_float(r.wavelength_m / NM),
            r.ion_mass_kg / ionscope::domain::constants::ATOMIC_MASS_UNIT,
            r.measured_visibility,
            trim_float(r.published_sigma_m / NM),
            kind.as_str().unwrap_or_default()
        );
    }
    t
}
