//! Error types shared across the crate.

use thiserror::Error;

/// Rejected array configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("elements per subarray side must be >= 1")]
    ZeroElementsPerSide,
    #[error("subarrays per side must be >= 1")]
    ZeroSubarraysPerSide,
    #[error("element spacing {0} wavelengths is below the half-wavelength minimum")]
    SpacingBelowHalfWavelength(f64),
    #[error("dislocation budget {0} wavelengths is negative")]
    NegativeDislocationBudget(f64),
    #[error("frequency {0} Hz is not positive")]
    NonPositiveFrequency(f64),
    #[error("{name} = {value} is not positive")]
    NonPositiveScale { name: &'static str, value: f64 },
}

/// Failure to assemble an [`crate::geometry::ArrayGeometry`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("design vector length {got} does not match the {expected} coordinates required by the structure")]
    LengthMismatch { expected: usize, got: usize },
    #[error("design coordinate {index} is not finite")]
    NonFinite { index: usize },
    #[error(transparent)]
    Repair(#[from] RepairError),
}

/// Constraint repair exhausted its attempt budget: the configuration is
/// over-constrained (e.g. element spacing below half a wavelength).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("constraint repair failed after {attempts} attempts; configuration is over-constrained")]
pub struct RepairError {
    pub attempts: usize,
}

/// Pattern sampling / sidelobe extraction failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    #[error("steering theta {theta} rad outside [0, pi/2]")]
    InvalidSteering { theta: f64 },
    #[error("direction grid resolution {0} is not positive")]
    InvalidResolution(f64),
    #[error("direction grid holds no samples")]
    EmptyGrid,
    #[error("main-lobe mask covers every grid sample; no sidelobe region remains")]
    EmptySidelobeRegion,
    #[error("sweep frequency {0} Hz is not positive")]
    InvalidFrequency(f64),
}

/// Optimizer-level failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("single-element array has no sidelobe region to optimize")]
    DegenerateArray,
    #[error("invalid optimizer parameters: {0}")]
    InvalidParams(String),
}

/// Redundancy counting failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RedundancyError {
    #[error("baseline counting needs at least two elements, got {0}")]
    TooFewElements(usize),
    #[error("quantization resolution {0} is not positive")]
    InvalidResolution(f64),
}
