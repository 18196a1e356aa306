//! Deterministic CSV output: UTF-8, header row, '.' decimal, `inf` for
//! infinities, shortest-roundtrip float formatting.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

pub fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    let mut file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(buf.as_bytes()).map_err(|e| CliError::io(path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}
