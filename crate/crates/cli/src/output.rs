//! File and console output helpers. Files are written to a temporary name
//! and renamed into place, so an interrupted command never leaves a partial
//! file behind.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut file = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir),
        None => tempfile::NamedTempFile::new_in("."),
    }
    .with_context(|| format!("creating temporary file for {}", path.display()))?;
    file.write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    file.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    json
}

/// Aligned text rendering of a labeled symmetric matrix, three decimals.
pub fn matrix_table(labels: &[String], cells: &[Vec<f64>]) -> String {
    let width = labels.iter().map(String::len).max().unwrap_or(0).max(6);
    let mut out = String::new();
    let _ = write!(out, "{:<width$}", "");
    for label in labels {
        let _ = write!(out, " {label:>width$}");
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(cells) {
        let _ = write!(out, "{label:<width$}");
        for cell in row {
            let _ = write!(out, " {cell:>width$.3}");
        }
        out.push('\n');
    }
    out
}

/// Per-boundary table of one document's gaps and depth scores.
pub fn boundary_table(set: &cohesion::BoundarySet) -> String {
    let mut out = String::from("gap   depth\n");
    for gap in &set.gaps {
        let _ = writeln!(out, "{gap:<5} {:.6}", set.depths[gap]);
    }
    out
}
