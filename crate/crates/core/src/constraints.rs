//! Multi-constraint feasibility checks and repair.
//!
//! A geometry is feasible when (a) every pair of flattened elements is at
//! least half a wavelength apart — enforced globally, since dislocated
//! neighbour subarrays can push elements together, (b) within-subarray pair
//! spacing stays below `2 * sqrt(L_a)`, (c) every dislocation component stays
//! within `delta_s / 2`, and (d) all elements stay inside the aperture square.
//! Bounds are closed: a dislocation of exactly `delta_s / 2` is feasible.

use std::collections::HashMap;

use rand::Rng;

use crate::error::RepairError;
use crate::geometry::ArrayGeometry;

/// Global minimum element spacing (wavelengths).
pub const MIN_SPACING: f64 = 0.5;

/// Slack absorbing floating-point rounding in spacing and containment checks
/// (about a nanometer at 10 GHz).
pub const SPACING_TOLERANCE: f64 = 1e-9;

/// Attempt budget for offset re-draws before falling back to zero offsets.
const REPAIR_ATTEMPTS: usize = 100;

/// One violated constraint, indexed into the flattened element order.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Pair of flattened elements closer than [`MIN_SPACING`].
    MinSpacing { first: usize, second: usize, spacing: f64 },
    /// Pair of within-subarray element slots further apart than `2 sqrt(L_a)`.
    SubarraySpread { first: usize, second: usize, spacing: f64, limit: f64 },
    /// Dislocation component outside `delta_s / 2`.
    DislocationBound { subarray: usize, magnitude: f64, bound: f64 },
    /// Element outside the `[0, L_a]` aperture square.
    ApertureBound { element: usize, x: f64, y: f64 },
}

/// Outcome of [`check_constraints`]: infeasibility is a report, not an error.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub feasible: bool,
    /// Global minimum pairwise spacing (infinite for fewer than two elements).
    pub min_spacing: f64,
    pub violations: Vec<Violation>,
}

/// Upper bound on within-subarray pair spacing, `2 * sqrt(L_a)` in wavelength
/// units; never binding at ordinary scales.
pub fn max_subarray_spacing(aperture: f64) -> f64 {
    2.0 * aperture.sqrt()
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Report every violated constraint of a geometry.
pub fn check_constraints(geometry: &ArrayGeometry) -> ConstraintReport {
    let config = geometry.config();
    let positions = geometry.flatten_positions();
    let mut violations = Vec::new();

    // (a) global minimum pairwise spacing over all flattened elements.
    let mut min_spacing = f64::INFINITY;
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let s = dist(positions[i], positions[j]);
            if s < min_spacing {
                min_spacing = s;
            }
            if s < MIN_SPACING - SPACING_TOLERANCE {
                violations.push(Violation::MinSpacing { first: i, second: j, spacing: s });
            }
        }
    }

    // (b) within-subarray spread; the layout is shared, so one scan suffices.
    let limit = max_subarray_spacing(config.aperture());
    let local = geometry.element_positions();
    for i in 0..local.len() {
        for j in (i + 1)..local.len() {
            let s = dist(local[i], local[j]);
            if s > limit + SPACING_TOLERANCE {
                violations.push(Violation::SubarraySpread { first: i, second: j, spacing: s, limit });
            }
        }
    }

    // (c) dislocation bounds.
    let bound = config.dislocation_bound();
    for (k, t) in geometry.dislocations().iter().enumerate() {
        let magnitude = t[0].abs().max(t[1].abs());
        if magnitude > bound + SPACING_TOLERANCE {
            violations.push(Violation::DislocationBound { subarray: k, magnitude, bound });
        }
    }

    // (d) aperture containment.
    let aperture = config.aperture();
    for (k, p) in positions.iter().enumerate() {
        let inside = p[0] >= -SPACING_TOLERANCE
            && p[1] >= -SPACING_TOLERANCE
            && p[0] <= aperture + SPACING_TOLERANCE
            && p[1] <= aperture + SPACING_TOLERANCE;
        if !inside {
            violations.push(Violation::ApertureBound { element: k, x: p[0], y: p[1] });
        }
    }

    ConstraintReport {
        feasible: violations.is_empty(),
        min_spacing,
        violations,
    }
}

/// Neighbour-bucket scan for element pairs closer than `limit`.
/// Returns pairs `(i, j, spacing)` with `i < j`, sorted, i.e. deterministic.
fn spacing_violations(positions: &[[f64; 2]], limit: f64) -> Vec<(usize, usize, f64)> {
    let cell = limit.max(1e-6);
    let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    for (i, p) in positions.iter().enumerate() {
        buckets.entry(key(*p)).or_default().push(i as u32);
    }
    let mut out = Vec::new();
    for (i, p) in positions.iter().enumerate() {
        let (kx, ky) = key(*p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = buckets.get(&(kx + dx, ky + dy)) {
                    for &j in ids {
                        let j = j as usize;
                        if j <= i {
                            continue;
                        }
                        let s = dist(*p, positions[j]);
                        if s < limit {
                            out.push((i, j, s));
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    out
}

/// Within-subarray spread violations on the shared local layout.
fn spread_violations(local: &[[f64; 2]], limit: f64) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..local.len() {
        for j in (i + 1)..local.len() {
            let s = dist(local[i], local[j]);
            if s > limit + SPACING_TOLERANCE {
                out.push((i, j, s));
            }
        }
    }
    out
}

/// Pick which element offset to modify for a violating pair: the member with
/// the larger current offset, ties to the lower slot index.
fn offender(first: usize, second: usize, per_subarray: usize, offsets: &[[f64; 2]]) -> usize {
    let a = first % per_subarray;
    let b = second % per_subarray;
    if a == b {
        return a;
    }
    let mag = |e: usize| offsets[e][0].hypot(offsets[e][1]);
    let (ma, mb) = (mag(a), mag(b));
    if ma > mb {
        a
    } else if mb > ma {
        b
    } else {
        a.min(b)
    }
}

/// Repair a possibly infeasible geometry.
///
/// Dislocations and element offsets are clamped to their bounds; spacing and
/// spread violations are then fixed by re-drawing the offending element
/// offset uniformly inside its lattice cell, up to [`REPAIR_ATTEMPTS`] times.
/// Remaining offenders fall back to the zero offset, which is feasible by
/// construction at `d >= lambda/2`. Coordinates that are already feasible are
/// left untouched. Deterministic given the rng stream.
pub fn repair(geometry: &ArrayGeometry, rng: &mut impl Rng) -> Result<ArrayGeometry, RepairError> {
    let config = geometry.config();
    let kind = config.structure;

    let mut dislocations = geometry.dislocations().to_vec();
    if kind.has_dislocations() {
        let b = config.dislocation_bound();
        for t in dislocations.iter_mut() {
            t[0] = t[0].clamp(-b, b);
            t[1] = t[1].clamp(-b, b);
        }
    }

    let mut offsets = geometry.element_offsets().to_vec();
    let offset_bound = config.offset_bound();
    if kind.has_element_offsets() {
        for o in offsets.iter_mut() {
            o[0] = o[0].clamp(-offset_bound, offset_bound);
            o[1] = o[1].clamp(-offset_bound, offset_bound);
        }
    }

    let spacing_limit = MIN_SPACING - SPACING_TOLERANCE;
    let spread_limit = max_subarray_spacing(config.aperture());
    let per_subarray = config.elements_per_subarray();

    let candidate = |d: &Vec<[f64; 2]>, o: &Vec<[f64; 2]>| geometry.with_parts(d.clone(), o.clone());

    let violating_offsets = |geom: &ArrayGeometry| -> Vec<usize> {
        let flat = geom.flatten_positions();
        let local = geom.element_positions();
        let mut slots: Vec<usize> = spacing_violations(&flat, spacing_limit)
            .iter()
            .map(|&(i, j, _)| offender(i, j, per_subarray, geom.element_offsets()))
            .chain(
                spread_violations(&local, spread_limit)
                    .iter()
                    .map(|&(i, j, _)| offender(i, j, per_subarray, geom.element_offsets())),
            )
            .collect();
        slots.sort_unstable();
        slots.dedup();
        slots
    };

    let mut attempts = 0;
    loop {
        let geom = candidate(&dislocations, &offsets);
        let slots = violating_offsets(&geom);
        if slots.is_empty() {
            return Ok(geom);
        }
        if !kind.has_element_offsets() || attempts >= REPAIR_ATTEMPTS {
            break;
        }
        attempts += 1;
        for slot in slots {
            offsets[slot] = [
                rng.gen_range(-offset_bound..=offset_bound),
                rng.gen_range(-offset_bound..=offset_bound),
            ];
        }
    }

    // Fallback: zero out offending offsets; each pass kills at least one
    // non-zero offset, and the all-zero layout is feasible for valid configs.
    if kind.has_element_offsets() {
        for _ in 0..=per_subarray {
            let geom = candidate(&dislocations, &offsets);
            let slots = violating_offsets(&geom);
            if slots.is_empty() {
                return Ok(geom);
            }
            let mut progressed = false;
            for slot in slots {
                if offsets[slot] != [0.0, 0.0] {
                    offsets[slot] = [0.0, 0.0];
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
    }

    let geom = candidate(&dislocations, &offsets);
    if violating_offsets(&geom).is_empty() {
        Ok(geom)
    } else {
        Err(RepairError { attempts: REPAIR_ATTEMPTS })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ArrayConfig, StructureKind};
    use crate::geometry::{build_geometry, random_feasible_geometry, DesignVector};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(m: usize, n: usize, d: f64, ds: f64, kind: StructureKind) -> ArrayConfig {
        ArrayConfig::new(m, n, d, ds, 10.0e9, kind).unwrap()
    }

    #[test]
    fn coincident_elements_are_flagged() {
        let config = cfg(2, 1, 0.5, 0.0, StructureKind::Usre);
        // Push elements 0 and 1 onto the same point: slot 0 moves +0.25 in x,
        // slot 1 moves -0.25 in x.
        let design = DesignVector(vec![0.25, 0.0, -0.25, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let geometry = build_geometry(&config, &design).unwrap();
        let report = check_constraints(&geometry);
        assert!(!report.feasible);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MinSpacing { first: 0, second: 1, .. })));
        assert!(report.min_spacing < 1e-12);
    }

    #[test]
    fn dislocation_at_exact_bound_is_feasible() {
        let config = cfg(2, 2, 1.0, 0.6, StructureKind::Dsue);
        let mut coords = vec![0.0; config.design_len()];
        coords[0] = 0.3; // exactly delta_s / 2
        let geometry = build_geometry(&config, &DesignVector(coords)).unwrap();
        let report = check_constraints(&geometry);
        assert!(report.feasible, "violations: {:?}", report.violations);
    }

    #[test]
    fn dislocation_beyond_bound_is_reported_and_clamped() {
        let config = cfg(2, 2, 1.0, 0.6, StructureKind::Dsue);
        let mut coords = vec![0.0; config.design_len()];
        coords[2] = 0.36; // 0.6 * delta_s, above the 0.3 bound
        let geometry = build_geometry(&config, &DesignVector(coords)).unwrap();
        let report = check_constraints(&geometry);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DislocationBound { subarray: 1, .. })));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let repaired = repair(&geometry, &mut rng).unwrap();
        assert_relative_eq!(repaired.dislocations()[1][0], 0.3);
        assert!(check_constraints(&repaired).feasible);
    }

    #[test]
    fn uniform_12x12_reports_unit_spacing() {
        let config = cfg(3, 4, 1.0, 0.0, StructureKind::Uniform);
        let geometry = build_geometry(&config, &DesignVector::zeros(&config)).unwrap();
        let report = check_constraints(&geometry);
        assert!(report.feasible);
        assert_relative_eq!(report.min_spacing, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn repair_is_identity_on_feasible_input() {
        let config = cfg(3, 2, 0.8, 0.7, StructureKind::Dsre);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let feasible = random_feasible_geometry(&config, &mut rng).unwrap();
        let before = rng.clone();
        let again = repair(&feasible, &mut rng).unwrap();
        assert_eq!(again, feasible);
        // No draws consumed.
        assert_eq!(rng, before);
    }

    #[test]
    fn repair_fixes_close_offsets() {
        // Two elements pushed to 0.3 wavelengths apart; repair must restore
        // the half-wavelength floor.
        let config = cfg(2, 1, 0.8, 0.0, StructureKind::Usre);
        let mut coords = vec![0.0; config.design_len()];
        coords[0] = 0.25; // slot 0 toward slot 1
        coords[2] = -0.25; // slot 1 toward slot 0
        let geometry = build_geometry(&config, &DesignVector(coords)).unwrap();
        assert!(!check_constraints(&geometry).feasible);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let repaired = repair(&geometry, &mut rng).unwrap();
        let report = check_constraints(&repaired);
        assert!(report.feasible, "violations: {:?}", report.violations);
        assert!(report.min_spacing >= MIN_SPACING - SPACING_TOLERANCE);
    }

    #[test]
    fn repair_is_deterministic_given_the_stream() {
        let config = cfg(3, 3, 0.6, 0.8, StructureKind::Dsre);
        let design = {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            DesignVector::random(&config, &mut rng)
        };
        let geometry = build_geometry(&config, &design).unwrap();
        let a = repair(&geometry, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = repair(&geometry, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn over_constrained_config_fails_repair() {
        // A single huge subarray: the lattice diagonal (9.9 wavelengths)
        // exceeds the 2*sqrt(L_a) spread limit (5.7) no matter where the
        // offsets land, so repair must give up.
        let config = cfg(8, 1, 1.0, 0.0, StructureKind::Usre);
        let geometry = build_geometry(&config, &DesignVector::zeros(&config)).unwrap();
        assert!(!check_constraints(&geometry).feasible);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(repair(&geometry, &mut rng).is_err());
    }
}
