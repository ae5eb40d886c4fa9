use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Fringe visibility of a trapped ion probing an optical standing wave.
#[derive(Debug, Parser)]
#[command(name = "ionscope", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Visibility predicted by each model.
    Visibility(VisibilityArgs),
    /// Sampled fringe signal written as CSV or JSON.
    Scan(ScanArgs),
    /// rms extent (and occupation, thermal energy) from a measured visibility or a scan file.
    Invert(InvertArgs),
    /// Cross-check all model paths against each other.
    Xcheck(XcheckArgs),
    /// Built-in experiment presets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    /// List the presets.
    List {
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

/// Physical parameters. Either a preset, or a wavelength with one of: an rms
/// extent, a Lamb-Dicke parameter, or mass, trap frequency and occupation.
#[derive(Debug, Args, Clone, Default)]
pub struct ParamArgs {
    /// Preset name (see `preset list`); `all` where several runs make sense.
    #[arg(long)]
    pub preset: Option<String>,
    /// Standing-wave wavelength in nm.
    #[arg(long)]
    pub lambda_nm: Option<f64>,
    /// rms spatial extent of the ion in nm.
    #[arg(long)]
    pub sigma_nm: Option<f64>,
    /// Ion mass in atomic mass units.
    #[arg(long)]
    pub mass_u: Option<f64>,
    /// Trap frequency Omega_t / 2pi in MHz.
    #[arg(long)]
    pub trap_mhz: Option<f64>,
    /// Mean motional occupation.
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Lamb-Dicke parameter k sigma0.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    All,
    Spatial,
    Doppler,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanModel {
    PointLike,
    Spatial,
    Doppler,
    Quantum,
}

#[derive(Debug, Args)]
pub struct VisibilityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = ModelChoice::All)]
    pub model: ModelChoice,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = ScanModel::Spatial)]
    pub model: ScanModel,
    /// First position in nm.
    #[arg(long, default_value_t = 0.0)]
    pub from_nm: f64,
    /// Last position in nm [default: half a wavelength].
    #[arg(long)]
    pub to_nm: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Mean detector signal S.
    #[arg(long, default_value_t = 1.0)]
    pub mean_signal: f64,
    #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
    pub format: ScanFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Measured visibility.
    #[arg(long, conflicts_with = "input")]
    pub visibility: Option<f64>,
    /// Scan file (CSV or JSON as written by `scan`) to fit first.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Wavelength in nm; read from the scan file when omitted.
    #[arg(long)]
    pub lambda_nm: Option<f64>,
    /// Ion mass in atomic mass units, for occupation and thermal energy.
    #[arg(long, requires = "trap_mhz")]
    pub mass_u: Option<f64>,
    /// Trap frequency Omega_t / 2pi in MHz.
    #[arg(long, requires = "mass_u")]
    pub trap_mhz: Option<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct XcheckArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 10_000)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_spatial_doppler: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_spatial_quantum: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_doppler_quantum: f64,
    /// Allowed Monte Carlo deviation in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub mc_sigmas: f64,
    /// Absolute Monte Carlo tolerance; overrides --mc-sigmas.
    #[arg(long)]
    pub mc_tolerance: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
