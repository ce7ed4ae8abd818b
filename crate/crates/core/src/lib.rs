//! Subarray-level aperiodic planar array synthesis.
//!
//! The toolkit builds square arrays tiled from identical subarrays. A
//! subarray may be rigidly dislocated inside its grid cell, and its elements
//! may be offset from the uniform lattice (the offsets shared by every
//! subarray, which keeps the array factor factorable). Four structures fall
//! out of those two switches: uniform, DSUE (dislocated subarrays, uniform
//! elements), USRE (uniform subarrays, random elements) and DSRE (both).
//!
//! Modules:
//! * [`config`] / [`geometry`] / [`constraints`] — array families, concrete
//!   realizations, the design-vector encoding and multi-constraint repair.
//! * [`pattern`] — array-factor sampling over the u–v unit disk, peak
//!   sidelobe extraction, scan and frequency sweeps.
//! * [`optimizer`] — improved bat algorithm and a reference particle swarm
//!   minimizing the peak sidelobe ratio.
//! * [`redundancy`] — baseline enumeration and the redundancy ratio.
//! * [`seed`] — counter-based derivation of deterministic rng streams.

pub mod config;
pub mod constraints;
pub mod error;
pub mod geometry;
pub mod optimizer;
pub mod pattern;
pub mod redundancy;
pub mod seed;

pub use config::{scale_division, ArrayConfig, StructureKind, SPEED_OF_LIGHT};
pub use constraints::{
    check_constraints, max_subarray_spacing, repair, ConstraintReport, Violation, MIN_SPACING,
};
pub use error::{
    ConfigError, GeometryError, OptimizeError, PatternError, RedundancyError, RepairError,
};
pub use geometry::{
    build_geometry, coordinate_bounds, random_feasible_geometry, ArrayGeometry, DesignVector,
};
pub use optimizer::{
    accept_and_schedule, bat_update, fitness, iba_optimize, initialize_population, local_search,
    pso_optimize, Bat, FitnessEnv, IbaParams, OptimizeOutcome, PsoParams, RunTrace, TraceRow,
};
pub use pattern::{
    af_direct, af_factored, af_positions, coarse_grid_du, default_grid_du, default_mask_radius,
    frequency_sweep, psll, psll_report, psll_report_positions, sample_pattern,
    sample_pattern_positions, scan_sweep, DirectionGrid, PatternGrid, PsllReport, SidelobePeak,
    Steering,
};
pub use redundancy::{
    count_baselines, redundancy_of, RedundancyReport, DEFAULT_BASELINE_RESOLUTION,
};
pub use seed::derive_seed;
