//! Counter-based seed derivation for nested deterministic rng streams.
//!
//! A master seed splits into independent stream seeds keyed by `(stream,
//! index)`. Adding repetitions or bats never perturbs the streams of earlier
//! ones, and derivation is pure so results are identical at any thread count.

/// Stream tag for per-repetition seeds.
pub const STREAM_REPETITION: u64 = 0x01;
/// Stream tag for per-bat / per-particle seeds.
pub const STREAM_AGENT: u64 = 0x02;
/// Stream tag for auxiliary draws (e.g. standalone geometry sampling).
pub const STREAM_AUX: u64 = 0x03;

/// SplitMix64 output function.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent stream seed from `(master, stream, index)`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    mix(mix(mix(master) ^ stream) ^ index)
}
