//! Deterministic RNG streams.
//!
//! All randomness in the crate flows through [`seeded_stream`]. A `(seed,
//! stream)` pair always yields the same generator, and distinct stream
//! indices under one seed give statistically independent streams, so replica
//! draws can run in any order (or concurrently) without changing results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the generator for stream `stream` under `seed`.
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  rng.set_stream(stream);
  rng
}

/// Derives a secondary seed from `seed` and a label, for operations that
/// need their own family of streams (for example an interventional batch
/// that must not reuse the observational batch's noise).
pub fn derive_seed(seed: u64, label: u64) -> u64 {
  // SplitMix64 finalizer; enough mixing to decorrelate related seeds.
  let mut z = seed ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15);
  z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
  z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
  z ^ (z >> 31)
}
