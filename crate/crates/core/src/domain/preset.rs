use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::constants::ATOMIC_MASS_UNIT;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The three published standing-wave probing experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresetName {
    /// Ba+ fluorescence back-reflected by a distant mirror, 493 nm.
    #[serde(rename = "mirror-Ba493")]
    MirrorBa493,
    /// Ca+ scattering cavity light, 397 nm.
    #[serde(rename = "cavity-scatter-Ca397")]
    CavityScatterCa397,
    /// Ca+ quadrupole transition driven by cavity light, 729 nm.
    #[serde(rename = "cavity-quadrupole-Ca729")]
    CavityQuadrupoleCa729,
}

impl PresetName {
    pub const ALL: [PresetName; 3] = [
        PresetName::MirrorBa493,
        PresetName::CavityScatterCa397,
        PresetName::CavityQuadrupoleCa729,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::MirrorBa493 => "mirror-Ba493",
            PresetName::CavityScatterCa397 => "cavity-scatter-Ca397",
            PresetName::CavityQuadrupoleCa729 => "cavity-quadrupole-Ca729",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresetName::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = PresetName::ALL.iter().map(|p| p.as_str()).collect();
                Error::invalid(format!("unknown preset '{s}' (known: {})", names.join(", ")))
            })
    }
}

/// What the detector signal physically is in a given experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    /// Fluorescence photon count rate; the two paths are direct and mirror-reflected emission.
    MirrorFluorescence,
    /// Count rate of cavity light scattered by the ion.
    CavityScattering,
    /// Upper-state excitation probability, saturation neglected.
    ExcitationProbability,
}

/// Parameter bundle for one published experiment. Lengths in meters, mass in kg.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentPreset<T> {
    pub name: PresetName,
    pub wavelength: T,
    pub ion_mass: T,
    pub measured_visibility: T,
    /// rms extent inferred from the measured visibility; an upper limit.
    pub published_sigma: T,
    /// Separate wave-packet estimate with optical aberrations excluded, where one was given.
    pub wave_packet_estimate: Option<T>,
    /// Mirror round-trip delay; recorded only, the signal model treats it as zero.
    pub mirror_delay: Option<T>,
    pub signal_kind: SignalKind,
}

impl<T: Scalar> ExperimentPreset<T> {
    pub fn get(name: PresetName) -> Self {
        let nm = |x: f64| T::lit(x / 1e9);
        let amu = |x: f64| T::lit(x * ATOMIC_MASS_UNIT);
        match name {
            PresetName::MirrorBa493 => Self {
                name,
                wavelength: nm(493.0),
                ion_mass: amu(138.0),
                measured_visibility: T::lit(0.72),
                published_sigma: nm(32.0),
                wave_packet_estimate: Some(nm(21.0)),
                mirror_delay: Some(T::lit(1.7e-9)),
                signal_kind: SignalKind::MirrorFluorescence,
            },
            PresetName::CavityScatterCa397 => Self {
                name,
                wavelength: nm(397.0),
                ion_mass: amu(40.0),
                measured_visibility: T::lit(0.40),
                published_sigma: nm(43.0),
                wave_packet_estimate: None,
                mirror_delay: None,
                signal_kind: SignalKind::CavityScattering,
            },
            PresetName::CavityQuadrupoleCa729 => Self {
                name,
                wavelength: nm(729.0),
                ion_mass: amu(40.0),
                measured_visibility: T::lit(0.963),
                published_sigma: nm(16.0),
                wave_packet_estimate: None,
                mirror_delay: None,
                signal_kind: SignalKind::ExcitationProbability,
            },
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        name.parse().map(Self::get)
    }

    pub fn all() -> [Self; 3] {
        PresetName::ALL.map(Self::get)
    }
}
