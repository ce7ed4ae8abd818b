//! Reference global-best particle swarm optimizer.
//!
//! Standard PSO over the same design space and objective as the bat
//! algorithm, used as the convergence baseline: constant inertia, cognitive
//! and social pulls with per-coordinate uniform draws, per-coordinate
//! velocity clamp, and a stall rule that stops the run once the average
//! relative change of the best fitness over a window of generations falls
//! below tolerance.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ArrayConfig;
use crate::constraints::repair;
use crate::error::OptimizeError;
use crate::geometry::{build_geometry, DesignVector};
use crate::pattern::{DirectionGrid, Steering};
use crate::seed::{derive_seed, STREAM_AGENT};

use super::{FitnessEnv, OptimizeOutcome, RunTrace, TraceRow};

#[derive(Debug, Clone, PartialEq)]
pub struct PsoParams {
    /// Hard iteration cap; the stall rule usually stops earlier.
    pub max_iterations: usize,
    pub population: usize,
    /// Constant inertia weight.
    pub inertia: f64,
    /// Cognitive acceleration (pull toward the particle's own best).
    pub cognitive: f64,
    /// Social acceleration (pull toward the global best).
    pub social: f64,
    /// Per-coordinate velocity clamp.
    pub velocity_max: f64,
    /// Window length for the stall rule.
    pub stall_generations: usize,
    /// Average relative fitness change below which the run terminates.
    pub stall_tolerance: f64,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            max_iterations: 100,
            population: 200,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
            velocity_max: 0.12,
            stall_generations: 10,
            stall_tolerance: 1e-4,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        let invalid = |msg: &str| Err(OptimizeError::InvalidParams(msg.to_string()));
        if self.max_iterations < 1 {
            return invalid("max_iterations must be >= 1");
        }
        if self.population < 2 {
            return invalid("population must be >= 2");
        }
        if !(self.velocity_max > 0.0) {
            return invalid("velocity_max must be positive");
        }
        if self.stall_generations < 1 {
            return invalid("stall_generations must be >= 1");
        }
        if !(self.stall_tolerance >= 0.0) {
            return invalid("stall_tolerance must be non-negative");
        }
        if !(self.inertia.is_finite() && self.cognitive.is_finite() && self.social.is_finite()) {
            return invalid("acceleration constants must be finite");
        }
        Ok(())
    }
}

struct Particle {
    position: DesignVector,
    velocity: Vec<f64>,
    best_position: DesignVector,
    best_fitness: f64,
}

/// Run global-best PSO; same trace format as the bat algorithm.
pub fn pso_optimize(
    config: &ArrayConfig,
    params: &PsoParams,
    steering: &Steering,
    grid: &DirectionGrid,
) -> Result<OptimizeOutcome, OptimizeError> {
    params.validate()?;
    let env = FitnessEnv::new(config, steering, grid)?;
    let start = Instant::now();
    let dim = config.design_len();

    let mut particles = Vec::with_capacity(params.population);
    let mut streams = Vec::with_capacity(params.population);
    for i in 0..params.population {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, STREAM_AGENT, i as u64));
        let raw = DesignVector::random(config, &mut rng);
        let velocity: Vec<f64> = (0..dim)
            .map(|_| rng.gen_range(-params.velocity_max..=params.velocity_max))
            .collect();
        let geometry = build_geometry(config, &raw)?;
        let position = repair(&geometry, &mut rng)?.encode();
        let fitness = env.evaluate(&position)?;
        particles.push(Particle {
            best_position: position.clone(),
            best_fitness: fitness,
            position,
            velocity,
        });
        streams.push(rng);
    }
    let mut evaluations = particles.len();

    let mut best_index = 0;
    for i in 1..particles.len() {
        if particles[i].best_fitness < particles[best_index].best_fitness {
            best_index = i;
        }
    }
    let mut best_design = particles[best_index].best_position.clone();
    let mut best_fitness = particles[best_index].best_fitness;

    // Best fitness after each generation; slot 0 is the initial value.
    let mut history = vec![best_fitness];
    let mut trace = RunTrace::default();

    for t in 1..=params.max_iterations {
        let g_star = best_design.clone();
        for i in 0..particles.len() {
            let rng = &mut streams[i];
            let mut coords = particles[i].position.0.clone();
            for j in 0..dim {
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                let v = params.inertia * particles[i].velocity[j]
                    + params.cognitive * r1 * (particles[i].best_position.0[j] - coords[j])
                    + params.social * r2 * (g_star.0[j] - coords[j]);
                particles[i].velocity[j] = v.clamp(-params.velocity_max, params.velocity_max);
                coords[j] += particles[i].velocity[j];
            }
            let geometry = build_geometry(config, &DesignVector(coords))?;
            particles[i].position = repair(&geometry, rng)?.encode();

            let fitness = env.evaluate(&particles[i].position)?;
            evaluations += 1;
            if fitness < particles[i].best_fitness {
                particles[i].best_fitness = fitness;
                particles[i].best_position = particles[i].position.clone();
            }
            if fitness < best_fitness {
                best_fitness = fitness;
                best_design = particles[i].position.clone();
            }
        }

        history.push(best_fitness);
        trace.rows.push(TraceRow {
            iteration: t,
            best_fitness,
            best_psll_db: 20.0 * best_fitness.log10(),
            evaluations,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });

        if t >= params.stall_generations {
            let window = &history[t - params.stall_generations..=t];
            let mean_change = window
                .windows(2)
                .map(|w| (w[1] - w[0]).abs() / w[0].abs().max(f64::MIN_POSITIVE))
                .sum::<f64>()
                / params.stall_generations as f64;
            if mean_change < params.stall_tolerance {
                break;
            }
        }
    }

    let geometry = build_geometry(config, &best_design)?;
    Ok(OptimizeOutcome {
        geometry,
        design: best_design,
        best_fitness,
        trace,
    })
}
