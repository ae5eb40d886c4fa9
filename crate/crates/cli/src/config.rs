//! Turns parsed arguments into a validated [`RunConfig`] with SI units.

use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;

use ionscope::analysis::{nbar_from_sigma, CrossCheckTolerances};
use ionscope::domain::constants::ATOMIC_MASS_UNIT;
use ionscope::domain::{ground_state_extent, thermal_extent, wavenumber_from_wavelength, PresetName};
use ionscope::{CrossCheckConfig, CrossCheckParams, ExperimentPreset, LambDicke, StandingWaveField};

use crate::args::{
    CliCommand, InvertArgs, ModelChoice, ParamArgs, PresetAction, ReportFormat, ScanArgs, ScanFormat, ScanModel,
    VisibilityArgs, XcheckArgs,
};

const NM_PER_M: f64 = 1e9;
const DEFAULT_TRAP_MHZ: f64 = 1.0;
const DEFAULT_LAMBDA_NM: f64 = 493.0;

/// Failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<ionscope::Error> for Failure {
    fn from(e: ionscope::Error) -> Self {
        Self {
            code: if e.is_validation() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Physical parameters resolved to SI.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub label: String,
    pub wavelength: f64,
    pub wavenumber: f64,
    /// `None` when only a wavelength was given.
    pub state: Option<MotionalParams>,
}

/// rms extent with a consistent `(nbar, eta)` pair for the quantum path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionalParams {
    pub sigma: f64,
    pub nbar: f64,
    pub eta: f64,
    /// `(mass kg, Omega_t rad/s)` when the trap is specified.
    pub trap: Option<(f64, f64)>,
}

impl Resolved {
    pub fn state(&self) -> Result<MotionalParams, Failure> {
        self.state.ok_or_else(|| {
            Failure::validation(format!(
                "{}: an rms extent is needed (--sigma-nm, --eta, or --mass-u with --trap-mhz and --nbar)",
                self.label
            ))
        })
    }

    pub fn lamb_dicke(&self) -> Result<LambDicke, Failure> {
        Ok(LambDicke::new(self.state()?.eta)?)
    }

    pub fn cross_check_params(&self) -> Result<CrossCheckParams, Failure> {
        let s = self.state()?;
        Ok(CrossCheckParams::new(self.wavenumber, s.nbar, s.eta)?)
    }
}

#[derive(Clone, Debug)]
pub enum Command {
    Visibility {
        runs: Vec<Resolved>,
        model: ModelChoice,
    },
    Scan {
        source: Resolved,
        model: ScanModel,
        field: StandingWaveField,
        positions: Vec<f64>,
    },
    Invert {
        input: InvertInput,
        wavelength: Option<f64>,
        trap: Option<(f64, f64)>,
    },
    Xcheck {
        runs: Vec<Resolved>,
        config: CrossCheckConfig,
    },
    PresetList,
}

#[derive(Clone, Debug)]
pub enum InvertInput {
    Visibility(f64),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl From<ReportFormat> for OutputFormat {
    fn from(f: ReportFormat) -> Self {
        match f {
            ReportFormat::Text => OutputFormat::Text,
            ReportFormat::Json => OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn from_cli(command: CliCommand) -> Result<Self, Failure> {
        match command {
            CliCommand::Visibility(a) => visibility(a),
            CliCommand::Scan(a) => scan(a),
            CliCommand::Invert(a) => invert(a),
            CliCommand::Xcheck(a) => xcheck(a),
            CliCommand::Preset {
                action: PresetAction::List { format },
            } => Ok(RunConfig {
                command: Command::PresetList,
                format: format.into(),
                output: None,
                seed: 0,
            }),
        }
    }
}

fn visibility(a: VisibilityArgs) -> Result<RunConfig, Failure> {
    let runs = resolve_all(&a.params)?;
    for r in &runs {
        r.state()?;
    }
    Ok(RunConfig {
        command: Command::Visibility { runs, model: a.model },
        format: a.format.into(),
        output: a.output,
        seed: 0,
    })
}

fn scan(a: ScanArgs) -> Result<RunConfig, Failure> {
    let source = resolve(&a.params)?;
    if a.model != ScanModel::PointLike {
        source.state()?;
    }
    if a.points < 2 {
        return Err(Failure::validation(format!(
            "a scan needs at least 2 points, got {}",
            a.points
        )));
    }
    let from = finite("--from-nm", a.from_nm)? / NM_PER_M;
    let to = match a.to_nm {
        Some(v) => finite("--to-nm", v)? / NM_PER_M,
        None => from + source.wavelength / 2.0,
    };
    if from >= to {
        return Err(Failure::validation(format!(
            "scan range is empty: from {} nm to {} nm",
            from * NM_PER_M,
            to * NM_PER_M
        )));
    }
    let field = StandingWaveField::new(source.wavelength, a.mean_signal)?;
    let step = (to - from) / (a.points - 1) as f64;
    let mut positions: Vec<f64> = (0..a.points).map(|i| from + i as f64 * step).collect();
    positions[a.points - 1] = to;
    Ok(RunConfig {
        command: Command::Scan {
            source,
            model: a.model,
            field,
            positions,
        },
        format: match a.format {
            ScanFormat::Csv => OutputFormat::Csv,
            ScanFormat::Json => OutputFormat::Json,
        },
        output: a.output,
        seed: 0,
    })
}

fn invert(a: InvertArgs) -> Result<RunConfig, Failure> {
    let input = match (a.visibility, a.input) {
        (Some(v), None) => {
            if a.lambda_nm.is_none() {
                return Err(Failure::validation("--visibility needs --lambda-nm"));
            }
            InvertInput::Visibility(v)
        }
        (None, Some(path)) => InvertInput::File(path),
        _ => return Err(Failure::validation("give either --visibility or --input")),
    };
    let wavelength = a
        .lambda_nm
        .map(|l| positive("--lambda-nm", l).map(|l| l / NM_PER_M))
        .transpose()?;
    let trap = match (a.mass_u, a.trap_mhz) {
        (Some(m), Some(f)) => Some((
            positive("--mass-u", m)? * ATOMIC_MASS_UNIT,
            positive("--trap-mhz", f)? * TAU * 1e6,
        )),
        _ => None,
    };
    Ok(RunConfig {
        command: Command::Invert {
            input,
            wavelength,
            trap,
        },
        format: a.format.into(),
        output: a.output,
        seed: 0,
    })
}

fn xcheck(a: XcheckArgs) -> Result<RunConfig, Failure> {
    let runs = resolve_all(&a.params)?;
    for r in &runs {
        r.cross_check_params()?;
    }
    for (name, t) in [
        ("--tol-spatial-doppler", a.tol_spatial_doppler),
        ("--tol-spatial-quantum", a.tol_spatial_quantum),
        ("--tol-doppler-quantum", a.tol_doppler_quantum),
        ("--mc-sigmas", a.mc_sigmas),
    ] {
        positive(name, t)?;
    }
    if let Some(t) = a.mc_tolerance {
        positive("--mc-tolerance", t)?;
    }
    let config = CrossCheckConfig {
        mc_samples: a.mc_samples,
        seed: a.seed,
        tolerances: CrossCheckTolerances {
            spatial_doppler: a.tol_spatial_doppler,
            spatial_quantum: a.tol_spatial_quantum,
            doppler_quantum: a.tol_doppler_quantum,
            mc_sigmas: a.mc_sigmas,
            mc_absolute: a.mc_tolerance,
        },
        ..CrossCheckConfig::default()
    };
    Ok(RunConfig {
        command: Command::Xcheck { runs, config },
        format: OutputFormat::Json,
        output: a.output,
        seed: a.seed,
    })
}

fn finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::validation(format!("{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::validation(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<f64, Failure> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::validation(format!("{name} must be non-negative, got {v}")))
    }
}

/// Like [`resolve`] but `--preset all` expands to every preset.
fn resolve_all(p: &ParamArgs) -> Result<Vec<Resolved>, Failure> {
    if p.preset.as_deref().is_some_and(|n| n.eq_ignore_ascii_case("all")) {
        PresetName::ALL
            .iter()
            .map(|n| {
                let mut one = p.clone();
                one.preset = Some(n.as_str().to_owned());
                resolve(&one)
            })
            .collect()
    } else {
        resolve(p).map(|r| vec![r])
    }
}

pub fn resolve(p: &ParamArgs) -> Result<Resolved, Failure> {
    if let Some(name) = &p.preset {
        let extra = [
            ("--lambda-nm", p.lambda_nm.is_some()),
            ("--sigma-nm", p.sigma_nm.is_some()),
            ("--mass-u", p.mass_u.is_some()),
            ("--nbar", p.nbar.is_some()),
            ("--eta", p.eta.is_some()),
        ];
        if let Some((flag, _)) = extra.iter().find(|f| f.1) {
            return Err(Failure::validation(format!("{flag} cannot be combined with --preset")));
        }
        if name.eq_ignore_ascii_case("all") {
            return Err(Failure::validation(
                "--preset all is only accepted by visibility and xcheck",
            ));
        }
        let preset = ExperimentPreset::by_name(name)?;
        let omega = positive("--trap-mhz", p.trap_mhz.unwrap_or(DEFAULT_TRAP_MHZ))? * TAU * 1e6;
        let k = wavenumber_from_wavelength(preset.wavelength)?;
        let sigma0 = ground_state_extent(preset.ion_mass, omega)?;
        let sigma = preset.published_sigma;
        return Ok(Resolved {
            label: preset.name.as_str().to_owned(),
            wavelength: preset.wavelength,
            wavenumber: k,
            state: Some(MotionalParams {
                sigma,
                nbar: nbar_from_sigma(sigma, sigma0)?,
                eta: k * sigma0,
                trap: Some((preset.ion_mass, omega)),
            }),
        });
    }

    let lambda_nm = match (p.lambda_nm, p.eta) {
        (Some(l), _) => l,
        (None, Some(_)) => DEFAULT_LAMBDA_NM,
        (None, None) => return Err(Failure::validation("give --preset or --lambda-nm")),
    };
    let wavelength = positive("--lambda-nm", lambda_nm)? / NM_PER_M;
    let k = wavenumber_from_wavelength(wavelength)?;
    let label = format!("lambda={lambda_nm}nm");

    let state = match (p.sigma_nm, p.eta, p.mass_u, p.trap_mhz) {
        (Some(s), None, None, None) => {
            if p.nbar.is_some() {
                return Err(Failure::validation("--nbar cannot be combined with --sigma-nm"));
            }
            let sigma = non_negative("--sigma-nm", s)? / NM_PER_M;
            Some(MotionalParams {
                sigma,
                nbar: 0.0,
                eta: k * sigma,
                trap: None,
            })
        }
        (None, Some(e), None, None) => {
            let eta = non_negative("--eta", e)?;
            let nbar = non_negative("--nbar", p.nbar.unwrap_or(0.0))?;
            let sigma0 = eta / k;
            Some(MotionalParams {
                sigma: sigma0 * (2.0 * nbar + 1.0).sqrt(),
                nbar,
                eta,
                trap: None,
            })
        }
        (None, None, Some(m), Some(f)) => {
            let mass = positive("--mass-u", m)? * ATOMIC_MASS_UNIT;
            let omega = positive("--trap-mhz", f)? * TAU * 1e6;
            let nbar = non_negative("--nbar", p.nbar.unwrap_or(0.0))?;
            let sigma0 = ground_state_extent(mass, omega)?;
            Some(MotionalParams {
                sigma: thermal_extent(sigma0, nbar)?,
                nbar,
                eta: k * sigma0,
                trap: Some((mass, omega)),
            })
        }
        (None, None, None, None) => {
            if p.nbar.is_some() {
                return Err(Failure::validation("--nbar needs --eta, or --mass-u with --trap-mhz"));
            }
            None
        }
        _ => {
            return Err(Failure::validation(
                "give exactly one of --sigma-nm, --eta, or --mass-u with --trap-mhz",
            ))
        }
    };
    Ok(Resolved {
        label,
        wavelength,
        wavenumber: k,
        state,
    })
}
