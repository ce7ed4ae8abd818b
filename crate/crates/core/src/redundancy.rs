//! Baseline enumeration and the redundancy ratio.
//!
//! Every ordered pair of elements forms a baseline vector; redundancy means
//! two pairs quantize to the same vector. An array of `P` elements has at
//! most `S_id = P (P - 1)` distinct baselines (the ordered-pair count, so
//! both signs of every vector are counted); the ratio `R = S_id / S_re >= 1`
//! measures how uniform the layout is — lower is less redundant.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::RedundancyError;
use crate::geometry::ArrayGeometry;

/// Default quantization resolution (wavelengths). At this value uniform
/// lattices with pitches that are multiples of it reproduce the closed-form
/// count `(2P - 1)^2 - 1` exactly.
pub const DEFAULT_BASELINE_RESOLUTION: f64 = 0.05;

/// Baseline counts and redundancy ratio. Field names match the JSON report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RedundancyReport {
    /// Element count `P`.
    pub elements: usize,
    /// Ideal distinct-baseline count `P (P - 1)`.
    pub s_id: u64,
    /// Actual distinct quantized baselines.
    pub s_re: u64,
    /// `s_id / s_re`.
    pub ratio: f64,
    pub resolution_wavelengths: f64,
}

/// Count distinct quantized baseline vectors over all ordered element pairs.
pub fn count_baselines(
    positions: &[[f64; 2]],
    resolution: f64,
) -> Result<RedundancyReport, RedundancyError> {
    let p = positions.len();
    if p < 2 {
        return Err(RedundancyError::TooFewElements(p));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(RedundancyError::InvalidResolution(resolution));
    }
    let quantize = |x: f64| (x / resolution).round() as i64;
    let mut distinct: HashSet<(i64, i64)> = HashSet::with_capacity(p * p);
    for (i, a) in positions.iter().enumerate() {
        for (j, b) in positions.iter().enumerate() {
            if i == j {
                continue;
            }
            distinct.insert((quantize(a[0] - b[0]), quantize(a[1] - b[1])));
        }
    }
    let s_id = (p as u64) * (p as u64 - 1);
    let s_re = distinct.len() as u64;
    Ok(RedundancyReport {
        elements: p,
        s_id,
        s_re,
        ratio: s_id as f64 / s_re as f64,
        resolution_wavelengths: resolution,
    })
}

/// Redundancy of a geometry's flattened element positions.
pub fn redundancy_of(
    geometry: &ArrayGeometry,
    resolution: f64,
) -> Result<RedundancyReport, RedundancyError> {
    count_baselines(&geometry.flatten_positions(), resolution)
}
