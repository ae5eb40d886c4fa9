use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which model produced a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalModel {
    PointLike,
    Spatial,
    Doppler,
    Quantum,
    /// Loaded from a file or measured; provenance unknown.
    External,
}

impl SignalModel {
    pub fn as_str(self) -> &'static str {
        match self {
            SignalModel::PointLike => "point-like",
            SignalModel::Spatial => "spatial",
            SignalModel::Doppler => "doppler",
            SignalModel::Quantum => "quantum",
            SignalModel::External => "external",
        }
    }
}

/// Meaning of the scan coordinate. The two are interchangeable in every
/// formula (`2kL` plays the role of `2k x0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositionAxis {
    /// Trap centre relative to an antinode, `x0`.
    TrapPosition,
    /// Distance between trap centre and mirror, `L`.
    MirrorDistance,
}

/// Detector signal sampled along a scan.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeSignal<T> {
    positions: Vec<T>,
    signals: Vec<T>,
    pub model: SignalModel,
    pub axis: PositionAxis,
    /// Free-form numeric parameters (SI) recorded alongside the samples.
    pub parameters: BTreeMap<String, f64>,
}

impl<T: Scalar> FringeSignal<T> {
    /// Positions must be strictly increasing, signals finite and non-negative.
    pub fn new(positions: Vec<T>, signals: Vec<T>, model: SignalModel, axis: PositionAxis) -> Result<Self> {
        if positions.len() != signals.len() {
            return Err(Error::invalid(format!(
                "{} positions but {} signal values",
                positions.len(),
                signals.len()
            )));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("positions must be finite"));
        }
        if positions.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("positions must be strictly increasing"));
        }
        if let Some(s) = signals.iter().find(|s| !(s.is_finite() && **s >= T::zero())) {
            return Err(Error::invalid(format!(
                "signal values must be finite and non-negative, got {s}"
            )));
        }
        Ok(Self {
            positions,
            signals,
            model,
            axis,
            parameters: BTreeMap::new(),
        })
    }

    pub fn with_parameter(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_owned(), value);
        self
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn signals(&self) -> &[T] {
        &self.signals
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.positions.iter().copied().zip(self.signals.iter().copied())
    }

    /// Distance from first to last sample.
    pub fn span(&self) -> T {
        match (self.positions.first(), self.positions.last()) {
            (Some(&a), Some(&b)) => b - a,
            _ => T::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_samples() {
        let ok = FringeSignal::new(
            vec![0.0, 1.0],
            vec![1.0, 2.0],
            SignalModel::External,
            PositionAxis::TrapPosition,
        );
        assert!(ok.is_ok());
        let cases = [
            (vec![0.0, 0.0], vec![1.0, 1.0]),
            (vec![1.0, 0.0], vec![1.0, 1.0]),
            (vec![0.0, 1.0], vec![-1.0, 1.0]),
            (vec![0.0, 1.0], vec![1.0]),
            (vec![0.0, f64::NAN], vec![1.0, 1.0]),
        ];
        for (x, s) in cases {
            assert!(FringeSignal::new(x, s, SignalModel::External, PositionAxis::TrapPosition).is_err());
        }
    }

    #[test]
    fn span_and_parameters() {
        let s = FringeSignal::new(
            vec![1.0, 2.0, 4.0],
            vec![0.0; 3],
            SignalModel::Spatial,
            PositionAxis::TrapPosition,
        )
        .unwrap()
        .with_parameter("wavelength_m", 493e-9);
        assert_eq!(s.span(), 3.0);
        assert_eq!(s.parameters["wavelength_m"], 493e-9);
        assert_eq!(s.iter().count(), 3);
    }
}
