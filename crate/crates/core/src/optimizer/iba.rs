//! Improved bat algorithm.
//!
//! Each bat carries a design vector, a velocity, a sonic frequency with a
//! Doppler-compensated effective value, a loudness that gates acceptance and
//! decays on success, and a pulse rate that rises on success and throttles
//! the random-walk local search. The loop per iteration: move every bat
//! toward the global best, trigger a local random walk around the current
//! best set with probability `1 - r_i`, then accept improvements
//! loudness-gated and reschedule.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::ArrayConfig;
use crate::constraints::repair;
use crate::error::OptimizeError;
use crate::geometry::{build_geometry, DesignVector};
use crate::pattern::{DirectionGrid, Steering};
use crate::seed::{derive_seed, STREAM_AGENT};

use super::{euclidean_norm, FitnessEnv, OptimizeOutcome, RunTrace, TraceRow};

/// Bat algorithm parameters. Defaults follow the standard tuning for this
/// problem family: 50 iterations, 300 bats, pulse factor 0.9, frequency in
/// [0, 1], loudness in [1, 2] with attenuation 0.9, flight speed in [0, 0.5],
/// inertia in [0.5, 0.9] and Doppler compensation in [0.1, 0.9].
#[derive(Debug, Clone, PartialEq)]
pub struct IbaParams {
    pub max_iterations: usize,
    pub population: usize,
    /// Pulse rate factor (gamma).
    pub pulse_rate_factor: f64,
    /// Sonic frequency draw range [f_min, f_max].
    pub frequency_range: (f64, f64),
    /// Initial loudness draw range.
    pub loudness_range: (f64, f64),
    /// Initial pulse-rate ceiling draw range (r_i^0).
    pub initial_pulse_rate_range: (f64, f64),
    /// Loudness attenuation (alpha), in (0, 1).
    pub attenuation: f64,
    /// Flight speed range (wavelengths/iteration): initial coordinates are
    /// drawn in it, and after every update each coordinate is clamped to
    /// plus/minus its upper bound.
    pub velocity_range: (f64, f64),
    /// Inertia weight range; the schedule decreases linearly from the upper
    /// to the lower bound over the run. Pin both ends equal for a constant.
    pub inertia_range: (f64, f64),
    /// Doppler compensation rate range (C_i), fixed per bat at start.
    pub compensation_range: (f64, f64),
    /// Speed of sound used by the Doppler factor (m/s).
    pub sound_speed: f64,
    /// Smoothing term in the per-coordinate compensation quotient.
    pub epsilon: f64,
    /// Random-walk step per unit loudness; defaults to `d / 10`.
    pub local_step_scale: Option<f64>,
    /// Fraction of the population forming the local-search best set.
    pub best_set_fraction: f64,
    pub seed: u64,
}

impl Default for IbaParams {
    fn default() -> Self {
        IbaParams {
            max_iterations: 50,
            population: 300,
            pulse_rate_factor: 0.9,
            frequency_range: (0.0, 1.0),
            loudness_range: (1.0, 2.0),
            initial_pulse_rate_range: (0.0, 1.0),
            attenuation: 0.9,
            velocity_range: (0.0, 0.5),
            inertia_range: (0.5, 0.9),
            compensation_range: (0.1, 0.9),
            sound_speed: 340.0,
            epsilon: 1e-9,
            local_step_scale: None,
            best_set_fraction: 0.1,
            seed: 0,
        }
    }
}

impl IbaParams {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        let invalid = |msg: &str| Err(OptimizeError::InvalidParams(msg.to_string()));
        if self.max_iterations < 1 {
            return invalid("max_iterations must be >= 1");
        }
        if self.population < 2 {
            return invalid("population must be >= 2");
        }
        if !(self.attenuation > 0.0 && self.attenuation < 1.0) {
            return invalid("attenuation must lie in (0, 1)");
        }
        if !(self.pulse_rate_factor > 0.0) {
            return invalid("pulse_rate_factor must be positive");
        }
        let ordered = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if !ordered(self.frequency_range)
            || !ordered(self.loudness_range)
            || !ordered(self.initial_pulse_rate_range)
            || !ordered(self.velocity_range)
            || !ordered(self.inertia_range)
            || !ordered(self.compensation_range)
        {
            return invalid("parameter ranges must be ordered and finite");
        }
        if !(self.loudness_range.0 > 0.0) {
            return invalid("loudness must be positive");
        }
        if !(self.velocity_range.0 >= 0.0 && self.velocity_range.1 > 0.0) {
            return invalid("velocity range must be non-negative with positive upper bound");
        }
        if !(self.initial_pulse_rate_range.0 >= 0.0 && self.initial_pulse_rate_range.1 <= 1.0) {
            return invalid("initial pulse rate range must lie in [0, 1]");
        }
        if !(self.sound_speed > 0.0) {
            return invalid("sound_speed must be positive");
        }
        if !(self.epsilon > 0.0) {
            return invalid("epsilon must be positive");
        }
        if !(self.best_set_fraction > 0.0 && self.best_set_fraction <= 1.0) {
            return invalid("best_set_fraction must lie in (0, 1]");
        }
        Ok(())
    }

    /// Inertia weight at 1-based iteration `t`: linear decrease from the
    /// upper to the lower bound over the run.
    pub fn inertia_at(&self, iteration: usize) -> f64 {
        let (lo, hi) = self.inertia_range;
        if self.max_iterations <= 1 {
            return hi;
        }
        let progress = (iteration - 1) as f64 / (self.max_iterations - 1) as f64;
        hi - (hi - lo) * progress
    }

    pub fn step_scale(&self, config: &ArrayConfig) -> f64 {
        self.local_step_scale.unwrap_or(config.element_spacing / 10.0)
    }
}

/// One optimizer agent.
#[derive(Debug, Clone, PartialEq)]
pub struct Bat {
    pub position: DesignVector,
    pub velocity: Vec<f64>,
    /// Last drawn sonic frequency (f_i).
    pub frequency: f64,
    /// Doppler-shifted frequency (the scalar part of f_i'); the
    /// per-coordinate compensation quotient is applied at use time.
    pub effective_frequency: f64,
    pub loudness: f64,
    /// Current pulse rate; starts at zero and rises toward its ceiling.
    pub pulse_rate: f64,
    /// Pulse-rate ceiling (r_i^0).
    pub initial_pulse_rate: f64,
    /// Doppler compensation rate (C_i), fixed at initialization.
    pub compensation: f64,
    pub fitness: f64,
}

fn gen_in(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

fn repair_design(
    config: &ArrayConfig,
    coords: Vec<f64>,
    rng: &mut impl Rng,
) -> Result<DesignVector, OptimizeError> {
    let geometry = build_geometry(config, &DesignVector(coords))?;
    let repaired = repair(&geometry, rng)?;
    Ok(repaired.encode())
}

/// Draw, repair and evaluate the initial population; returns the bats along
/// with their private rng streams (one per bat, split from the master seed).
pub fn initialize_population(
    config: &ArrayConfig,
    params: &IbaParams,
    env: &FitnessEnv,
) -> Result<(Vec<Bat>, Vec<ChaCha8Rng>), OptimizeError> {
    params.validate()?;
    let dim = config.design_len();
    let mut bats = Vec::with_capacity(params.population);
    let mut streams = Vec::with_capacity(params.population);
    for i in 0..params.population {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, STREAM_AGENT, i as u64));
        let raw = DesignVector::random(config, &mut rng);
        let velocity: Vec<f64> = (0..dim).map(|_| gen_in(&mut rng, params.velocity_range)).collect();
        let loudness = gen_in(&mut rng, params.loudness_range);
        let initial_pulse_rate = gen_in(&mut rng, params.initial_pulse_rate_range);
        let compensation = gen_in(&mut rng, params.compensation_range);
        let position = repair_design(config, raw.0, &mut rng)?;
        let fitness = env.evaluate(&position)?;
        bats.push(Bat {
            position,
            velocity,
            frequency: 0.0,
            effective_frequency: 0.0,
            loudness,
            pulse_rate: 0.0,
            initial_pulse_rate,
            compensation,
            fitness,
        });
        streams.push(rng);
    }
    Ok((bats, streams))
}

/// Move one bat toward the global best.
///
/// Draws a sonic frequency in range, Doppler-shifts it by
/// `(c + |v_i|) / (c + |v_g|)` using the velocity magnitudes of the bat and
/// of the best-holding bat, applies the per-coordinate compensation
/// `1 + C_i (g - x) / (|g - x| + eps)`, updates the velocity with the inertia
/// weight, clamps each velocity coordinate, steps the position, and repairs
/// it. The stored fitness is stale until the caller re-evaluates.
pub fn bat_update(
    bat: &Bat,
    g_star: &DesignVector,
    gbest_velocity: &[f64],
    omega: f64,
    config: &ArrayConfig,
    params: &IbaParams,
    rng: &mut ChaCha8Rng,
) -> Result<Bat, OptimizeError> {
    let f = gen_in(rng, params.frequency_range);
    let doppler =
        (params.sound_speed + euclidean_norm(&bat.velocity)) / (params.sound_speed + euclidean_norm(gbest_velocity));
    let effective = doppler * f;
    let v_max = params.velocity_range.1;

    let mut velocity = bat.velocity.clone();
    let mut coords = bat.position.0.clone();
    for j in 0..coords.len() {
        let delta = g_star.0[j] - coords[j];
        let compensation = 1.0 + bat.compensation * delta / (delta.abs() + params.epsilon);
        let v = omega * velocity[j] + (coords[j] - g_star.0[j]) * effective * compensation;
        velocity[j] = v.clamp(-v_max, v_max);
        coords[j] += velocity[j];
    }
    let position = repair_design(config, coords, rng)?;
    Ok(Bat {
        position,
        velocity,
        frequency: f,
        effective_frequency: effective,
        ..bat.clone()
    })
}

/// Random-walk local search around a uniformly chosen member of the current
/// best set: per-coordinate normal steps scaled by the average loudness,
/// repaired to feasibility.
pub fn local_search(
    best_set: &[DesignVector],
    average_loudness: f64,
    step_scale: f64,
    config: &ArrayConfig,
    rng: &mut ChaCha8Rng,
) -> Result<DesignVector, OptimizeError> {
    let pick = rng.gen_range(0..best_set.len());
    let mut coords = best_set[pick].0.clone();
    for c in coords.iter_mut() {
        let step: f64 = rng.sample(StandardNormal);
        *c += step * average_loudness * step_scale;
    }
    repair_design(config, coords, rng)
}

/// Loudness-gated acceptance: adopt the candidate only when a uniform draw
/// falls below the bat's loudness and the candidate improves its fitness;
/// on success the loudness decays by the attenuation factor and the pulse
/// rate rises to `r0 (1 - exp(-gamma t))`.
pub fn accept_and_schedule(
    bat: &Bat,
    candidate: &DesignVector,
    candidate_fitness: f64,
    params: &IbaParams,
    iteration: usize,
    rng: &mut ChaCha8Rng,
) -> Bat {
    let draw: f64 = rng.gen();
    let mut out = bat.clone();
    if draw < bat.loudness && candidate_fitness < bat.fitness {
        out.position = candidate.clone();
        out.fitness = candidate_fitness;
        out.loudness = params.attenuation * bat.loudness;
        out.pulse_rate = bat.initial_pulse_rate
            * (1.0 - (-params.pulse_rate_factor * iteration as f64).exp());
    }
    out
}

/// Run the full bat-algorithm loop and return the best-ever design decoded to
/// a geometry plus the per-iteration trace.
pub fn iba_optimize(
    config: &ArrayConfig,
    params: &IbaParams,
    steering: &Steering,
    grid: &DirectionGrid,
) -> Result<OptimizeOutcome, OptimizeError> {
    let env = FitnessEnv::new(config, steering, grid)?;
    let start = Instant::now();
    let (mut bats, mut streams) = initialize_population(config, params, &env)?;
    let mut evaluations = bats.len();

    let mut best_index = 0;
    for i in 1..bats.len() {
        if bats[i].fitness < bats[best_index].fitness {
            best_index = i;
        }
    }
    let mut best_design = bats[best_index].position.clone();
    let mut best_fitness = bats[best_index].fitness;
    // The bat whose evaluation produced the global best; its velocity feeds
    // the Doppler factor.
    let mut best_holder = best_index;

    let step_scale = params.step_scale(config);
    let best_set_len = ((params.population as f64 * params.best_set_fraction).ceil() as usize)
        .clamp(1, params.population);

    let mut trace = RunTrace::default();
    for t in 1..=params.max_iterations {
        let omega = params.inertia_at(t);
        let g_star = best_design.clone();
        let g_velocity = bats[best_holder].velocity.clone();

        for i in 0..bats.len() {
            bats[i] = bat_update(&bats[i], &g_star, &g_velocity, omega, config, params, &mut streams[i])?;
            bats[i].fitness = env.evaluate(&bats[i].position)?;
            if bats[i].fitness < best_fitness {
                best_fitness = bats[i].fitness;
                best_design = bats[i].position.clone();
                best_holder = i;
            }
        }
        evaluations += bats.len();

        let average_loudness =
            bats.iter().map(|b| b.loudness).sum::<f64>() / bats.len() as f64;
        let mut ranked: Vec<usize> = (0..bats.len()).collect();
        ranked.sort_by(|&a, &b| {
            bats[a]
                .fitness
                .partial_cmp(&bats[b].fitness)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let best_set: Vec<DesignVector> = ranked[..best_set_len]
            .iter()
            .map(|&i| bats[i].position.clone())
            .collect();

        for i in 0..bats.len() {
            let trigger: f64 = streams[i].gen();
            if trigger < 1.0 - bats[i].pulse_rate {
                let candidate =
                    local_search(&best_set, average_loudness, step_scale, config, &mut streams[i])?;
                let candidate_fitness = env.evaluate(&candidate)?;
                evaluations += 1;
                bats[i] = accept_and_schedule(
                    &bats[i],
                    &candidate,
                    candidate_fitness,
                    params,
                    t,
                    &mut streams[i],
                );
                if candidate_fitness < best_fitness {
                    best_fitness = candidate_fitness;
                    best_design = candidate;
                    best_holder = i;
                }
            }
        }

        trace.rows.push(TraceRow {
            iteration: t,
            best_fitness,
            best_psll_db: 20.0 * best_fitness.log10(),
            evaluations,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }

    let geometry = build_geometry(config, &best_design)?;
    Ok(OptimizeOutcome {
        geometry,
        design: best_design,
        best_fitness,
        trace,
    })
}
