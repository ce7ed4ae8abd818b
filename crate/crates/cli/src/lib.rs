//! Experiment harness: config parsing, recipe orchestration, file emission.

pub mod emit;
pub mod recipes;
pub mod spec;

pub use recipes::{run, RunSummary};
pub use spec::{validate_config, ExperimentSpec, RecipeKind, SpecError};
