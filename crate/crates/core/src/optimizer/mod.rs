//! Peak-sidelobe minimization over the design-vector search space.
//!
//! The improved bat algorithm is the primary optimizer; a standard
//! global-best particle swarm serves as the comparison baseline. Both share
//! the same objective: the linear peak-sidelobe ratio `max |AF| / AF_main`
//! over the unmasked visible region — lower is better, and
//! `PSLL(dB) = 20 log10(fitness)`.
//!
//! Determinism contract: every stochastic draw comes from a per-agent stream
//! split from the master seed, fitness evaluations are pure (parallel inside
//! one evaluation), so identical seeds and parameters reproduce identical
//! traces and outputs at any thread count.

mod iba;
mod pso;

pub use iba::{
    accept_and_schedule, bat_update, iba_optimize, initialize_population, local_search, Bat,
    IbaParams,
};
pub use pso::{pso_optimize, PsoParams};

use serde::Serialize;

use crate::config::ArrayConfig;
use crate::error::OptimizeError;
use crate::geometry::{build_geometry, ArrayGeometry, DesignVector};
use crate::pattern::{default_mask_radius, peak_sidelobe_ratio, DirectionGrid, Steering};

/// One iteration record of an optimization run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    /// Best-ever linear peak-sidelobe ratio, monotone non-increasing.
    pub best_fitness: f64,
    /// `20 log10(best_fitness)`.
    pub best_psll_db: f64,
    /// Cumulative fitness evaluations.
    pub evaluations: usize,
    /// Wall time since the run started (the only non-deterministic field).
    pub elapsed_seconds: f64,
}

/// Per-iteration convergence trace.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
}

impl RunTrace {
    pub fn best_fitness(&self) -> Option<f64> {
        self.rows.last().map(|r| r.best_fitness)
    }
}

/// Result of one optimization run.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub geometry: ArrayGeometry,
    pub design: DesignVector,
    /// Linear peak-sidelobe ratio on the optimization grid.
    pub best_fitness: f64,
    pub trace: RunTrace,
}

/// Bundled objective inputs: read-only and shared across evaluations.
pub struct FitnessEnv<'a> {
    config: &'a ArrayConfig,
    steering: &'a Steering,
    grid: &'a DirectionGrid,
    mask_radius: f64,
}

impl<'a> FitnessEnv<'a> {
    pub fn new(
        config: &'a ArrayConfig,
        steering: &'a Steering,
        grid: &'a DirectionGrid,
    ) -> Result<Self, OptimizeError> {
        config.validate().map_err(crate::error::GeometryError::from)?;
        if config.element_count() < 2 {
            return Err(OptimizeError::DegenerateArray);
        }
        Ok(FitnessEnv {
            config,
            steering,
            grid,
            mask_radius: default_mask_radius(config),
        })
    }

    pub fn config(&self) -> &ArrayConfig {
        self.config
    }

    /// Evaluate a feasible design. The design must already be repaired;
    /// updates repair before evaluation.
    pub fn evaluate(&self, design: &DesignVector) -> Result<f64, OptimizeError> {
        let geometry = build_geometry(self.config, design)?;
        let peak = peak_sidelobe_ratio(&geometry, self.steering, self.grid, self.mask_radius)?;
        Ok(peak.linear_ratio)
    }
}

/// Linear peak-sidelobe ratio of a feasible design in `[0, 1]`; lower is
/// better. Errors on single-element arrays (no sidelobe region exists) and
/// propagates an empty sidelobe region from the mask.
pub fn fitness(
    design: &DesignVector,
    config: &ArrayConfig,
    steering: &Steering,
    grid: &DirectionGrid,
) -> Result<f64, OptimizeError> {
    FitnessEnv::new(config, steering, grid)?.evaluate(design)
}

pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
