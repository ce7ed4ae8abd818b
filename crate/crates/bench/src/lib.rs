//! Shared fixtures for the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use apsyn_core::{random_feasible_geometry, ArrayConfig, ArrayGeometry, StructureKind};

/// 12x12 elements as 4x4 dislocated-and-randomized subarrays at 10 GHz.
pub fn desk_config() -> ArrayConfig {
    ArrayConfig::new(3, 4, 0.75, 0.9, 10.0e9, StructureKind::Dsre).unwrap()
}

/// 28x28 elements as 7x7 subarrays, the large published layout.
pub fn large_config() -> ArrayConfig {
    ArrayConfig::new(4, 7, 0.8325, 0.87, 10.0e9, StructureKind::Dsre).unwrap()
}

pub fn fixture_geometry(config: &ArrayConfig, seed: u64) -> ArrayGeometry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_feasible_geometry(config, &mut rng).unwrap()
}
