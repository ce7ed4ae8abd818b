//! File emission: CSV and JSON writers with deterministic formatting.
//!
//! Floats are printed with 12 significant digits in scientific notation so
//! re-runs are byte-identical; wall-time columns are the only fields that
//! vary between runs with the same seed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use apsyn_core::{ArrayGeometry, PatternGrid, RunTrace};

/// 12 significant digits, scientific notation.
pub fn sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// `index,subarray_row,subarray_col,x_wavelengths,y_wavelengths`, one row per
/// element in the frozen subarray-major, element-minor order.
pub fn write_geometry_csv(path: &Path, geometry: &ArrayGeometry) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "index,subarray_row,subarray_col,x_wavelengths,y_wavelengths")?;
    let n = geometry.config().subarrays_per_side;
    let per_subarray = geometry.config().elements_per_subarray();
    for (i, p) in geometry.flatten_positions().iter().enumerate() {
        let subarray = i / per_subarray;
        writeln!(
            w,
            "{},{},{},{},{}",
            i,
            subarray / n,
            subarray % n,
            sig12(p[0]),
            sig12(p[1])
        )?;
    }
    Ok(())
}

fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (20.0 * ratio.log10()).max(apsyn_core::pattern::DB_FLOOR)
    } else {
        apsyn_core::pattern::DB_FLOOR
    }
}

/// `u,v,af_linear,af_db`: magnitudes normalized to the exact main peak.
pub fn write_pattern_csv(path: &Path, pattern: &PatternGrid) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "u,v,af_linear,af_db")?;
    for (s, &m) in pattern.samples.iter().zip(&pattern.magnitudes) {
        let ratio = m / pattern.main_peak;
        writeln!(w, "{},{},{},{}", sig12(s[0]), sig12(s[1]), sig12(ratio), sig12(to_db(ratio)))?;
    }
    Ok(())
}

/// `iteration,best_fitness_linear,best_psll_db,evaluations,elapsed_seconds`.
/// The elapsed column is wall time and is excluded from reproducibility
/// comparisons.
pub fn write_trace_csv(path: &Path, trace: &RunTrace) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "iteration,best_fitness_linear,best_psll_db,evaluations,elapsed_seconds")?;
    for row in &trace.rows {
        writeln!(
            w,
            "{},{},{},{},{:.3}",
            row.iteration,
            sig12(row.best_fitness),
            sig12(row.best_psll_db),
            row.evaluations,
            row.elapsed_seconds
        )?;
    }
    Ok(())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Generic CSV table from a header and preformatted rows.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    Ok(())
}
