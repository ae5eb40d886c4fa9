//! Scan files: CSV with `#` metadata lines, or versioned JSON.

use std::collections::BTreeMap;
use std::path::Path;

use ionscope::domain::{PositionAxis, SignalModel};
use ionscope::FringeSignal;
use serde::{Deserialize, Serialize};

use crate::config::Failure;
use crate::SCHEMA_VERSION;

const NM_PER_M: f64 = 1e9;

#[derive(Debug, Serialize, Deserialize)]
pub struct ScanDocument {
    pub schema_version: u32,
    pub model: SignalModel,
    pub axis: PositionAxis,
    pub parameters: BTreeMap<String, f64>,
    pub positions_m: Vec<f64>,
    pub signals: Vec<f64>,
}

fn axis_column(axis: PositionAxis) -> &'static str {
    match axis {
        PositionAxis::TrapPosition => "position",
        PositionAxis::MirrorDistance => "mirror_distance",
    }
}

fn axis_name(axis: PositionAxis) -> &'static str {
    match axis {
        PositionAxis::TrapPosition => "trap-position",
        PositionAxis::MirrorDistance => "mirror-distance",
    }
}

pub fn to_csv(signal: &FringeSignal) -> Result<String, Failure> {
    let mut out = String::new();
    out.push_str(&format!("# schema_version = {SCHEMA_VERSION}\n"));
    out.push_str(&format!("# model = {}\n", signal.model.as_str()));
    out.push_str(&format!("# axis = {}\n", axis_name(signal.axis)));
    for (k, v) in &signal.parameters {
        out.push_str(&format!("# {k} = {v:e}\n"));
    }
    let col = axis_column(signal.axis);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::validation(format!("CSV encoding failed: {e}"));
    w.write_record([format!("{col}_m"), format!("{col}_nm"), "signal".to_owned()])
        .map_err(io)?;
    for (x, s) in signal.iter() {
        w.write_record([format!("{x:e}"), format!("{:e}", x * NM_PER_M), format!("{s:e}")])
            .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::validation(format!("CSV encoding failed: {e}")))?;
    out.push_str(&String::from_utf8(bytes).expect("CSV output is ASCII"));
    Ok(out)
}

pub fn to_json(signal: &FringeSignal) -> String {
    let doc = ScanDocument {
        schema_version: SCHEMA_VERSION,
        model: signal.model,
        axis: signal.axis,
        parameters: signal.parameters.clone(),
        positions_m: signal.positions().to_vec(),
        signals: signal.signals().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("scan document serialises") + "\n"
}

pub fn read(path: &Path) -> Result<FringeSignal, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') {
        from_json(&text)
    } else {
        from_csv(&text)
    };
    parsed.map_err(|e| Failure::validation(format!("{}: {}", path.display(), e.message)))
}

fn from_json(text: &str) -> Result<FringeSignal, Failure> {
    let doc: ScanDocument =
        serde_json::from_str(text).map_err(|e| Failure::validation(format!("invalid scan JSON: {e}")))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Failure::validation(format!(
            "unsupported schema_version {}",
            doc.schema_version
        )));
    }
    let mut s = FringeSignal::new(doc.positions_m, doc.signals, SignalModel::External, doc.axis)?;
    s.parameters = doc.parameters;
    Ok(s)
}

fn from_csv(text: &str) -> Result<FringeSignal, Failure> {
    let mut parameters = BTreeMap::new();
    let mut axis = PositionAxis::TrapPosition;
    for line in text.lines().filter_map(|l| l.strip_prefix('#')) {
        let Some((k, v)) = line.split_once('=') else { continue };
        let (k, v) = (k.trim(), v.trim());
        match k {
            "axis" if v == "mirror-distance" => axis = PositionAxis::MirrorDistance,
            "axis" | "model" | "schema_version" => {}
            _ => {
                if let Ok(x) = v.parse::<f64>() {
                    parameters.insert(k.to_owned(), x);
                }
            }
        }
    }
    let bad = |msg: String| Failure::validation(msg);
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| bad(format!("invalid CSV header: {e}")))?
        .clone();
    let pos_col = headers
        .iter()
        .position(|h| h.ends_with("_m"))
        .ok_or_else(|| bad("CSV needs a position column in meters (name ending in _m)".into()))?;
    let sig_col = headers
        .iter()
        .position(|h| h == "signal")
        .ok_or_else(|| bad("CSV needs a 'signal' column".into()))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(format!("invalid CSV row {}: {e}", i + 1)))?;
        let field = |c: usize| -> Result<f64, Failure> {
            rec.get(c)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(format!("row {}: column {} is not a number", i + 1, c + 1)))
        };
        xs.push(field(pos_col)?);
        ys.push(field(sig_col)?);
    }
    let mut s = FringeSignal::new(xs, ys, SignalModel::External, axis)?;
    s.parameters = parameters;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FringeSignal {
        let xs = vec![0.0, 1.234_567_890_123_456_7e-7, 2.5e-7];
        let ys = vec![1.963, 0.1 + 0.2, 0.037];
        FringeSignal::new(xs, ys, SignalModel::Quantum, PositionAxis::TrapPosition)
            .unwrap()
            .with_parameter("wavelength_m", 729e-9)
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = sample();
        let text = to_csv(&s).unwrap();
        assert!(text.contains("position_m,position_nm,signal\n"));
        let back = from_csv(&text).unwrap();
        assert_eq!(back.positions(), s.positions());
        assert_eq!(back.signals(), s.signals());
        assert_eq!(back.parameters["wavelength_m"], 729e-9);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = sample();
        let back = from_json(&to_json(&s)).unwrap();
        assert_eq!(back.positions(), s.positions());
        assert_eq!(back.signals(), s.signals());
    }

    #[test]
    fn malformed_csv() {
        assert!(from_csv("a,b\n1,2\n").is_err());
        assert!(from_csv("position_m,signal\n1,x\n").is_err());
    }
}
