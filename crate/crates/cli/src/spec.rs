//! Experiment configuration: JSON schema, validation and default resolution.
//!
//! One experiment per invocation. Sweeps are explicit lists, so a resolved
//! config is self-contained; every run echoes its fully-resolved form back
//! into the output directory as `resolved_config.json`, and re-running that
//! echo reproduces the outputs byte for byte (wall-time fields aside).
//!
//! All lengths are wavelengths at the design frequency.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use apsyn_core::{ArrayConfig, IbaParams, PsoParams, StructureKind};

#[derive(Debug, Error)]
pub enum SpecError {
    /// Malformed JSON or schema mismatch; serde reports line and column.
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    /// Out-of-range or missing value, with the offending key path.
    #[error("invalid config: {path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> SpecError {
    SpecError::Invalid { path: path.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeKind {
    /// One optimizer run per repetition; emits geometry, pattern, trace and
    /// the peak-sidelobe report.
    Optimize,
    /// DSUE/USRE/DSRE optimized at a fixed division and compared by peak
    /// sidelobe level and redundancy.
    StructureComparison,
    /// Peak sidelobe level versus dislocation span at fixed aperture.
    DislocationSweep,
    /// Optimize at broadside, then report the level at each scan angle.
    ScanSweep,
    /// Optimize at the design frequency, then report across the band.
    FrequencySweep,
    /// Baseline redundancy of sampled (or uniform) layouts.
    Redundancy,
}

impl RecipeKind {
    pub fn name(self) -> &'static str {
        match self {
            RecipeKind::Optimize => "optimize",
            RecipeKind::StructureComparison => "structure_comparison",
            RecipeKind::DislocationSweep => "dislocation_sweep",
            RecipeKind::ScanSweep => "scan_sweep",
            RecipeKind::FrequencySweep => "frequency_sweep",
            RecipeKind::Redundancy => "redundancy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub elements_per_subarray_side: usize,
    pub subarrays_per_side: usize,
    pub element_spacing_wavelengths: f64,
    pub dislocation_budget_wavelengths: f64,
    pub frequency_hz: f64,
    pub structure: StructureKind,
}

impl ArraySection {
    pub fn to_config(&self) -> ArrayConfig {
        ArrayConfig {
            elements_per_subarray_side: self.elements_per_subarray_side,
            subarrays_per_side: self.subarrays_per_side,
            element_spacing: self.element_spacing_wavelengths,
            dislocation_budget: self.dislocation_budget_wavelengths,
            frequency_hz: self.frequency_hz,
            structure: self.structure,
        }
    }

    fn validate(&self) -> Result<(), SpecError> {
        if self.elements_per_subarray_side < 1 {
            return Err(invalid("array.elements_per_subarray_side", "must be >= 1"));
        }
        if self.subarrays_per_side < 1 {
            return Err(invalid("array.subarrays_per_side", "must be >= 1"));
        }
        if !(self.element_spacing_wavelengths >= 0.5) {
            return Err(invalid(
                "array.element_spacing_wavelengths",
                "must be at least 0.5 (half a wavelength)",
            ));
        }
        if !(self.dislocation_budget_wavelengths >= 0.0) {
            return Err(invalid("array.dislocation_budget_wavelengths", "must be >= 0"));
        }
        if !(self.frequency_hz > 0.0) {
            return Err(invalid("array.frequency_hz", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Iba,
    Pso,
}

/// Bat-algorithm settings; the global master seed is injected per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IbaSection {
    pub max_iterations: usize,
    pub population: usize,
    pub pulse_rate_factor: f64,
    pub frequency_range: (f64, f64),
    pub loudness_range: (f64, f64),
    pub initial_pulse_rate_range: (f64, f64),
    pub attenuation: f64,
    pub velocity_range: (f64, f64),
    pub inertia_range: (f64, f64),
    pub compensation_range: (f64, f64),
    pub sound_speed_m_per_s: f64,
    pub epsilon: f64,
    pub local_step_scale: Option<f64>,
    pub best_set_fraction: f64,
}

impl Default for IbaSection {
    fn default() -> Self {
        let p = IbaParams::default();
        IbaSection {
            max_iterations: p.max_iterations,
            population: p.population,
            pulse_rate_factor: p.pulse_rate_factor,
            frequency_range: p.frequency_range,
            loudness_range: p.loudness_range,
            initial_pulse_rate_range: p.initial_pulse_rate_range,
            attenuation: p.attenuation,
            velocity_range: p.velocity_range,
            inertia_range: p.inertia_range,
            compensation_range: p.compensation_range,
            sound_speed_m_per_s: p.sound_speed,
            epsilon: p.epsilon,
            local_step_scale: p.local_step_scale,
            best_set_fraction: p.best_set_fraction,
        }
    }
}

impl IbaSection {
    pub fn to_params(&self, seed: u64) -> IbaParams {
        IbaParams {
            max_iterations: self.max_iterations,
            population: self.population,
            pulse_rate_factor: self.pulse_rate_factor,
            frequency_range: self.frequency_range,
            loudness_range: self.loudness_range,
            initial_pulse_rate_range: self.initial_pulse_rate_range,
            attenuation: self.attenuation,
            velocity_range: self.velocity_range,
            inertia_range: self.inertia_range,
            compensation_range: self.compensation_range,
            sound_speed: self.sound_speed_m_per_s,
            epsilon: self.epsilon,
            local_step_scale: self.local_step_scale,
            best_set_fraction: self.best_set_fraction,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoSection {
    pub max_iterations: usize,
    pub population: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub velocity_max: f64,
    pub stall_generations: usize,
    pub stall_tolerance: f64,
}

impl Default for PsoSection {
    fn default() -> Self {
        let p = PsoParams::default();
        PsoSection {
            max_iterations: p.max_iterations,
            population: p.population,
            inertia: p.inertia,
            cognitive: p.cognitive,
            social: p.social,
            velocity_max: p.velocity_max,
            stall_generations: p.stall_generations,
            stall_tolerance: p.stall_tolerance,
        }
    }
}

impl PsoSection {
    pub fn to_params(&self, seed: u64) -> PsoParams {
        PsoParams {
            max_iterations: self.max_iterations,
            population: self.population,
            inertia: self.inertia,
            cognitive: self.cognitive,
            social: self.social,
            velocity_max: self.velocity_max,
            stall_generations: self.stall_generations,
            stall_tolerance: self.stall_tolerance,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSection {
    pub algorithm: Algorithm,
    pub iba: IbaSection,
    pub pso: PsoSection,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        OptimizerSection {
            algorithm: Algorithm::Iba,
            iba: IbaSection::default(),
            pso: PsoSection::default(),
        }
    }
}

/// Direction-grid pitches; `null` means the aperture-derived default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    /// Reporting pitch; defaults to `lambda / (8 L_a)`.
    pub fine_du: Option<f64>,
    /// Optimization pitch; defaults to `lambda / (4 L_a)`.
    pub coarse_du: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteeringDeg {
    pub theta: f64,
    pub phi: f64,
}

/// Raw configuration file; optional fields resolve to defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub recipe: RecipeKind,
    pub array: ArraySection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub steering_deg: Option<Vec<SteeringDeg>>,
    #[serde(default)]
    pub frequencies_hz: Option<Vec<f64>>,
    #[serde(default)]
    pub dislocations_wavelengths: Option<Vec<f64>>,
    #[serde(default)]
    pub baseline_resolution_wavelengths: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub repetitions: Option<usize>,
}

/// Fully-resolved experiment: every default filled, ready to run and to echo.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub recipe: RecipeKind,
    pub array: ArraySection,
    pub optimizer: OptimizerSection,
    pub grid: ResolvedGrid,
    pub steering_deg: Vec<SteeringDeg>,
    pub frequencies_hz: Vec<f64>,
    pub dislocations_wavelengths: Vec<f64>,
    pub baseline_resolution_wavelengths: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedGrid {
    pub fine_du: f64,
    pub coarse_du: f64,
}

impl ExperimentSpec {
    pub fn config(&self) -> ArrayConfig {
        self.array.to_config()
    }
}

/// Parse, validate and resolve a configuration document.
pub fn validate_config(text: &str) -> Result<ExperimentSpec, SpecError> {
    let raw: ConfigFile = serde_json::from_str(text)?;
    resolve(raw)
}

pub fn resolve(raw: ConfigFile) -> Result<ExperimentSpec, SpecError> {
    raw.array.validate()?;
    let config = raw.array.to_config();

    let repetitions = raw.repetitions.unwrap_or(1);
    if repetitions < 1 {
        return Err(invalid("repetitions", "must be >= 1"));
    }

    let fine_du = raw.grid.fine_du.unwrap_or_else(|| apsyn_core::default_grid_du(&config));
    let coarse_du = raw.grid.coarse_du.unwrap_or_else(|| apsyn_core::coarse_grid_du(&config));
    if !(fine_du > 0.0) {
        return Err(invalid("grid.fine_du", "must be positive"));
    }
    if !(coarse_du > 0.0) {
        return Err(invalid("grid.coarse_du", "must be positive"));
    }

    let steering_deg = raw
        .steering_deg
        .unwrap_or_else(|| vec![SteeringDeg { theta: 0.0, phi: 0.0 }]);
    for (i, s) in steering_deg.iter().enumerate() {
        if !(0.0..=90.0).contains(&s.theta) || !s.phi.is_finite() {
            return Err(invalid(
                &format!("steering_deg[{i}]"),
                "theta must lie in [0, 90] degrees and phi must be finite",
            ));
        }
    }
    if steering_deg.is_empty() {
        return Err(invalid("steering_deg", "must hold at least one entry"));
    }

    let frequencies_hz = raw.frequencies_hz.unwrap_or_else(|| vec![config.frequency_hz]);
    for (i, &f) in frequencies_hz.iter().enumerate() {
        if !(f > 0.0) {
            return Err(invalid(&format!("frequencies_hz[{i}]"), "must be positive"));
        }
    }
    if raw.recipe == RecipeKind::FrequencySweep && frequencies_hz.is_empty() {
        return Err(invalid("frequencies_hz", "frequency_sweep needs at least one frequency"));
    }

    let dislocations_wavelengths = raw
        .dislocations_wavelengths
        .unwrap_or_else(|| vec![config.dislocation_budget]);
    if raw.recipe == RecipeKind::DislocationSweep {
        if dislocations_wavelengths.is_empty() {
            return Err(invalid(
                "dislocations_wavelengths",
                "dislocation_sweep needs at least one span",
            ));
        }
        // The sweep holds the aperture fixed; the element spacing that pays
        // for each span must stay above half a wavelength.
        let aperture = config.aperture();
        let n = config.subarrays_per_side as f64;
        let m = config.elements_per_subarray_side as f64;
        for (i, &ds) in dislocations_wavelengths.iter().enumerate() {
            if !(ds >= 0.0) {
                return Err(invalid(&format!("dislocations_wavelengths[{i}]"), "must be >= 0"));
            }
            let d = (aperture / n - ds) / m;
            if !(d >= 0.5) {
                return Err(invalid(
                    &format!("dislocations_wavelengths[{i}]"),
                    format!(
                        "span {ds} leaves element spacing {d:.4} below half a wavelength at fixed aperture {aperture:.4}"
                    ),
                ));
            }
        }
    }

    let baseline_resolution_wavelengths = raw
        .baseline_resolution_wavelengths
        .unwrap_or(apsyn_core::DEFAULT_BASELINE_RESOLUTION);
    if !(baseline_resolution_wavelengths > 0.0) {
        return Err(invalid("baseline_resolution_wavelengths", "must be positive"));
    }

    let iba = raw.optimizer.iba.to_params(0);
    if let Err(e) = iba.validate() {
        return Err(invalid("optimizer.iba", e.to_string()));
    }
    let pso = raw.optimizer.pso.to_params(0);
    if let Err(e) = pso.validate() {
        return Err(invalid("optimizer.pso", e.to_string()));
    }

    Ok(ExperimentSpec {
        recipe: raw.recipe,
        array: raw.array,
        optimizer: raw.optimizer,
        grid: ResolvedGrid { fine_du, coarse_du },
        steering_deg,
        frequencies_hz,
        dislocations_wavelengths,
        baseline_resolution_wavelengths,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        seed: raw.seed.unwrap_or(1),
        repetitions,
    })
}
