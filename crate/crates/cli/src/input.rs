//! State and setting ingestion: JSON documents from disk plus the inline
//! `family:tag[:param]` shorthand.

use std::path::Path;

use nonlocality::bell::MeasurementSetting;
use nonlocality::linalg::DensityMatrix;
use nonlocality::states::{named_state, NamedFamily, StateSpec};

use crate::Failure;

/// Resolves `--state`: an inline family spec when the value starts with
/// `family:`, otherwise a path to a JSON state document.
pub fn load_state(spec: &str) -> Result<DensityMatrix, Failure> {
    if let Some(inline) = spec.strip_prefix("family:") {
        let (tag, parameter) = match inline.split_once(':') {
            Some((tag, raw)) => {
                let value: f64 = raw
                    .parse()
                    .map_err(|_| Failure::input(format!("`{raw}` is not a number")))?;
                (tag, Some(value))
            }
            None => (inline, None),
        };
        return Ok(named_state(NamedFamily::parse(tag, parameter)?)?);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read state file `{spec}`: {e}")))?;
    Ok(StateSpec::from_json(&text)?.to_density()?)
}

/// Measurement-direction document: four Bloch vectors, normalized on load so
/// hand-written files may carry rounded entries.
#[derive(serde::Deserialize)]
struct SettingFile {
    a0: [f64; 3],
    a1: [f64; 3],
    b0: [f64; 3],
    b1: [f64; 3],
}

pub fn load_setting(path: &Path) -> Result<MeasurementSetting, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read setting file `{}`: {e}", path.display())))?;
    let file: SettingFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("setting file `{}`: {e}", path.display())))?;
    Ok(MeasurementSetting::normalized(file.a0, file.a1, file.b0, file.b1)?)
}

/// Parses `--plane` when given.
pub fn parse_plane(text: Option<&str>) -> Result<Option<nonlocality::bell::Plane>, Failure> {
    match text {
        None => Ok(None),
        Some(t) => Ok(Some(nonlocality::bell::Plane::parse(t)?)),
    }
}
