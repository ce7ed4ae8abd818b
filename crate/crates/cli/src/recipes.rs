//! Experiment recipes: optimization runs, structure comparison, dislocation /
//! scan / frequency sweeps, and redundancy reports.
//!
//! Seeding: the master seed splits per sweep point (where applicable) and per
//! repetition with counter-based derivation, so adding repetitions or sweep
//! points never perturbs earlier ones. Optimized geometries are always
//! re-measured on the fine reporting grid; traces carry the coarse
//! optimization-grid fitness.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use apsyn_core::seed::{STREAM_AGENT, STREAM_AUX, STREAM_REPETITION};
use apsyn_core::{
    build_geometry, derive_seed, iba_optimize, pso_optimize, psll_report, random_feasible_geometry,
    redundancy_of, sample_pattern, scan_sweep, frequency_sweep, ArrayConfig, ArrayGeometry,
    DesignVector, DirectionGrid, OptimizeOutcome, Steering, StructureKind,
};

use crate::emit::{sig12, write_csv, write_geometry_csv, write_json, write_pattern_csv, write_trace_csv};
use crate::spec::{Algorithm, ExperimentSpec, RecipeKind};

/// What a run produced, for logging and tests.
#[derive(Debug)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    /// One line per headline result, already formatted.
    pub lines: Vec<String>,
}

struct Grids {
    fine: DirectionGrid,
    coarse: DirectionGrid,
}

fn grids(spec: &ExperimentSpec) -> Result<Grids> {
    Ok(Grids {
        fine: DirectionGrid::disk(spec.grid.fine_du)?,
        coarse: DirectionGrid::disk(spec.grid.coarse_du)?,
    })
}

fn steering(deg: &crate::spec::SteeringDeg) -> Result<Steering> {
    Ok(Steering::from_degrees(deg.theta, deg.phi)?)
}

fn rep_dir(base: &Path, rep: usize) -> PathBuf {
    base.join(format!("rep{rep:03}"))
}

fn optimize_once(
    spec: &ExperimentSpec,
    config: &ArrayConfig,
    steer: &Steering,
    coarse: &DirectionGrid,
    run_seed: u64,
) -> Result<OptimizeOutcome> {
    let outcome = match spec.optimizer.algorithm {
        Algorithm::Iba => {
            let params = spec.optimizer.iba.to_params(run_seed);
            iba_optimize(config, &params, steer, coarse)?
        }
        Algorithm::Pso => {
            let params = spec.optimizer.pso.to_params(run_seed);
            pso_optimize(config, &params, steer, coarse)?
        }
    };
    Ok(outcome)
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Run one experiment; every recipe first echoes the resolved configuration.
pub fn run(spec: &ExperimentSpec) -> Result<RunSummary> {
    let out = &spec.output_dir;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_json(&out.join("resolved_config.json"), spec)?;

    let lines = match spec.recipe {
        RecipeKind::Optimize => run_optimize(spec, out)?,
        RecipeKind::StructureComparison => run_structure_comparison(spec, out)?,
        RecipeKind::DislocationSweep => run_dislocation_sweep(spec, out)?,
        RecipeKind::ScanSweep => run_scan_sweep(spec, out)?,
        RecipeKind::FrequencySweep => run_frequency_sweep(spec, out)?,
        RecipeKind::Redundancy => run_redundancy(spec, out)?,
    };

    Ok(RunSummary { output_dir: out.clone(), lines })
}

/// Emit the per-repetition artifacts of an optimized geometry and return the
/// fine-grid peak sidelobe level.
fn emit_optimized(
    dir: &Path,
    outcome: &OptimizeOutcome,
    steer: &Steering,
    fine: &DirectionGrid,
) -> Result<f64> {
    write_geometry_csv(&dir.join("geometry.csv"), &outcome.geometry)?;
    write_trace_csv(&dir.join("trace.csv"), &outcome.trace)?;
    let pattern = sample_pattern(&outcome.geometry, steer, fine);
    write_pattern_csv(&dir.join("pattern.csv"), &pattern)?;
    let report = psll_report(&outcome.geometry, steer, fine)?;
    write_json(&dir.join("psll.json"), &report)?;
    Ok(report.psll_db)
}

fn run_optimize(spec: &ExperimentSpec, out: &Path) -> Result<Vec<String>> {
    let config = spec.config();
    let grids = grids(spec)?;
    let steer = steering(&spec.steering_deg[0])?;
    let mut lines = Vec::new();
    for rep in 0..spec.repetitions {
        let run_seed = derive_seed(spec.seed, STREAM_REPETITION, rep as u64);
        let outcome = optimize_once(spec, &config, &steer, &grids.coarse, run_seed)?;
        let dir = rep_dir(out, rep);
        let psll_db = emit_optimized(&dir, &outcome, &steer, &grids.fine)?;
        lines.push(format!(
            "rep {rep}: fine-grid PSLL {psll_db:.2} dB (coarse fitness {:.4}, {} evaluations)",
            outcome.best_fitness,
            outcome.trace.rows.last().map_or(0, |r| r.evaluations),
        ));
    }
    Ok(lines)
}

fn run_structure_comparison(spec: &ExperimentSpec, out: &Path) -> Result<Vec<String>> {
    let grids = grids(spec)?;
    let steer = steering(&spec.steering_deg[0])?;
    let structures = [StructureKind::Dsue, StructureKind::Usre, StructureKind::Dsre];
    let mut rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut lines = Vec::new();
    for (si, &kind) in structures.iter().enumerate() {
        let config = ArrayConfig { structure: kind, ..spec.config() };
        let mut psll_values = Vec::new();
        let mut baseline_counts = Vec::new();
        for rep in 0..spec.repetitions {
            let run_seed = derive_seed(
                derive_seed(spec.seed, STREAM_AUX, si as u64),
                STREAM_REPETITION,
                rep as u64,
            );
            let outcome = optimize_once(spec, &config, &steer, &grids.coarse, run_seed)?;
            let report = psll_report(&outcome.geometry, &steer, &grids.fine)?;
            let redundancy =
                redundancy_of(&outcome.geometry, spec.baseline_resolution_wavelengths)?;
            rows.push(format!(
                "{},{},{},{},{}",
                kind.name(),
                rep,
                sig12(report.psll_db),
                redundancy.s_re,
                sig12(redundancy.ratio)
            ));
            psll_values.push(report.psll_db);
            baseline_counts.push(redundancy.s_re as f64);
        }
        let median_psll = median(psll_values);
        let median_s_re = median(baseline_counts);
        summary_rows.push(format!(
            "{},{},{}",
            kind.name(),
            sig12(median_psll),
            sig12(median_s_re)
        ));
        lines.push(format!(
            "{}: median PSLL {median_psll:.2} dB, median distinct baselines {median_s_re:.0}",
            kind.name()
        ));
    }
    write_csv(
        &out.join("comparison.csv"),
        "structure,repetition,psll_db,s_re,redundancy_ratio",
        &rows,
    )?;
    write_csv(
        &out.join("comparison_summary.csv"),
        "structure,median_psll_db,median_s_re",
        &summary_rows,
    )?;
    Ok(lines)
}

fn run_dislocation_sweep(spec: &ExperimentSpec, out: &Path) -> Result<Vec<String>> {
    // The aperture of the base configuration is held fixed; each dislocation
    // span re-derives the element spacing that fills the rest of the cell.
    let base = spec.config();
    let aperture = base.aperture();
    let n = base.subarrays_per_side as f64;
    let m = base.elements_per_subarray_side as f64;
    let steer = steering(&spec.steering_deg[0])?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (pi, &span) in spec.dislocations_wavelengths.iter().enumerate() {
        let spacing = (aperture / n - span) / m;
        let config = ArrayConfig {
            element_spacing: spacing,
            dislocation_budget: span,
            ..base
        };
        // Grid pitches follow the (fixed) aperture, so the resolved values
        // stay valid across the sweep.
        let grids = grids(spec)?;
        let mut psll_values = Vec::new();
        for rep in 0..spec.repetitions {
            let run_seed = derive_seed(
                derive_seed(spec.seed, STREAM_AUX, pi as u64),
                STREAM_REPETITION,
                rep as u64,
            );
            let outcome = optimize_once(spec, &config, &steer, &grids.coarse, run_seed)?;
            let report = psll_report(&outcome.geometry, &steer, &grids.fine)?;
            rows.push(format!(
                "{},{},{},{}",
                sig12(span),
                sig12(spacing),
                rep,
                sig12(report.psll_db)
            ));
            psll_values.push(report.psll_db);
        }
        lines.push(format!(
            "span {span:.2} wavelengths (d = {spacing:.3}): median PSLL {:.2} dB",
            median(psll_values)
        ));
    }
    write_csv(
        &out.join("dislocation_sweep.csv"),
        "dislocation_wavelengths,element_spacing_wavelengths,repetition,psll_db",
        &rows,
    )?;
    Ok(lines)
}

fn run_scan_sweep(spec: &ExperimentSpec, out: &Path) -> Result<Vec<String>> {
    let config = spec.config();
    let grids = grids(spec)?;
    // Optimization happens at broadside; the optimized layout is then scanned.
    let broadside = Steering::broadside();
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for rep in 0..spec.repetitions {
        let run_seed = derive_seed(spec.seed, STREAM_REPETITION, rep as u64);
        let outcome = optimize_once(spec, &config, &broadside, &grids.coarse, run_seed)?;
        write_geometry_csv(&rep_dir(out, rep).join("geometry.csv"), &outcome.geometry)?;
        write_trace_csv(&rep_dir(out, rep).join("trace.csv"), &outcome.trace)?;
        let steerings: Vec<Steering> = spec
            .steering_deg
            .iter()
            .map(steering)
            .collect::<Result<_>>()?;
        let swept = scan_sweep(&outcome.geometry, &steerings, &grids.fine)?;
        for (s, psll_db) in &swept {
            rows.push(format!(
                "{},{},{},{}",
                sig12(s.theta_deg()),
                sig12(s.phi_deg()),
                rep,
                sig12(*psll_db)
            ));
        }
        let spread = swept.iter().map(|&(_, p)| p).fold(f64::NEG_INFINITY, f64::max)
            - swept.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min);
        lines.push(format!("rep {rep}: PSLL spread over scan angles {spread:.2} dB"));
    }
    write_csv(
        &out.join("scan_sweep.csv"),
        "theta_deg,phi_deg,repetition,psll_db",
        &rows,
    )?;
    Ok(lines)
}

fn run_frequency_sweep(spec: &ExperimentSpec, out: &Path) -> Result<Vec<String>> {
    let config = spec.config();
    let grids = grids(spec)?;
    let steer = steering(&spec.steering_deg[0])?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for rep in 0..spec.repetitions {
        let run_seed = derive_seed(spec.seed, STREAM_REPETITION, rep as u64);
        let outcome = optimize_once(spec, &config, &steer, &grids.coarse, run_seed)?;
        write_geometry_csv(&rep_dir(out, rep).join("geometry.csv"), &outcome.geometry)?;
        write_trace_csv(&rep_dir(out, rep).join("trace.csv"), &outcome.trace)?;
        let swept = frequency_sweep(&outcome.geometry, &spec.frequencies_hz, &steer, &grids.fine)?;
        for (f, psll_db) in &swept {
            rows.push(format!("{},{},{}", sig12(*f), rep, sig12(*psll_db)));
        }
        let spread = swept.iter().map(|&(_, p)| p).fold(f64::NEG_INFINITY, f64::max)
            - swept.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min);
        lines.push(format!("rep {rep}: PSLL spread over band {spread:.2} dB"));
    }
    write_csv(
        &out.join("frequency_sweep.csv"),
        "frequency_hz,repetition,psll_db",
        &rows,
    )?;
    Ok(lines)
}

fn run_redundancy(spec: &ExperimentSpec, out: &Path) -> Result<Vec<String>> {
    let config = spec.config();
    let mut lines = Vec::new();
    for rep in 0..spec.repetitions {
        let geometry = sampled_geometry(&config, spec.seed, rep)?;
        let report = redundancy_of(&geometry, spec.baseline_resolution_wavelengths)?;
        let dir = rep_dir(out, rep);
        write_geometry_csv(&dir.join("geometry.csv"), &geometry)?;
        write_json(&dir.join("redundancy.json"), &report)?;
        lines.push(format!(
            "rep {rep}: {} distinct baselines of {} ideal, redundancy {:.3}",
            report.s_re, report.s_id, report.ratio
        ));
    }
    Ok(lines)
}

/// Uniform structures are deterministic; the aperiodic ones draw a random
/// feasible design from the per-repetition stream.
fn sampled_geometry(config: &ArrayConfig, seed: u64, rep: usize) -> Result<ArrayGeometry> {
    if config.structure == StructureKind::Uniform {
        return Ok(build_geometry(config, &DesignVector::zeros(config))?);
    }
    let run_seed = derive_seed(seed, STREAM_REPETITION, rep as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(run_seed, STREAM_AGENT, 0));
    Ok(random_feasible_geometry(config, &mut rng)?)
}

/// Guard against silent misuse: recipes that optimize need a non-empty design
/// space unless the structure is uniform by intent.
pub fn sanity_check(spec: &ExperimentSpec) -> Result<()> {
    let config = spec.config();
    let optimizing = !matches!(spec.recipe, RecipeKind::Redundancy);
    if optimizing && config.design_len() == 0 && config.structure != StructureKind::Uniform {
        bail!("structure {:?} has no free coordinates", config.structure);
    }
    Ok(())
}
