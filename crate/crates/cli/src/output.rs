use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::analysis::{KsSummary, Snapshot, CSV_HEADER};
use crate::error::Result;

pub const EIGENVALUES_FILE: &str = "eigenvalues.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const KS_FILE: &str = "ks_by_pass.csv";
pub const TW_FILE: &str = "tw_summary.json";
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_eigenvalues(path: &Path, snapshots: &[Snapshot]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for s in snapshots {
        for (i, x) in s.eigenvalues.iter().enumerate() {
            writeln!(w, "{},{},{},{}", s.chain, s.pass, i, fmt_f64(*x))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_ks(path: &Path, summary: &KsSummary) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "pass,ks")?;
    for p in &summary.passes {
        writeln!(w, "{},{}", p.pass, fmt_f64(p.ks))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn mark_incomplete(dir: &Path, reason: &str) -> Result<()> {
    fs::write(dir.join(INCOMPLETE_MARKER), format!("{reason}\n"))?;
    Ok(())
}

pub fn clear_incomplete(dir: &Path) -> Result<()> {
    match fs::remove_file(dir.join(INCOMPLETE_MARKER)) {
        Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
        _ => Ok(()),
    }
}
