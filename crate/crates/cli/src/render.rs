//! Output formatting. Human-readable text rounds to six significant digits;
//! CSV and JSON carry the full shortest round-trip decimal so downstream
//! consumers can reproduce every bit.

use std::io::Write;
use std::path::Path;

use crate::Failure;

/// Six significant digits: plain decimal for moderate magnitudes, scientific
/// notation once the exponent would pad with zeros.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// Full-precision cell: the shortest decimal that parses back to the same
/// bits. Empty for absent optional quantities.
pub fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

/// Joins header and rows into an LF-terminated CSV document.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes a file as raw bytes so line endings stay LF on every platform.
pub fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| Failure::input(format!("cannot create `{}`: {e}", path.display())))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write `{}`: {e}", path.display())))?;
    Ok(())
}

/// Sends a finished document to a file when a path was given, else stdout.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
