//! Deterministic random number generation.
//!
//! Every randomized operation in the crate takes a `u64` seed and draws from a
//! ChaCha8 stream, which is reproducible bit-for-bit across platforms. When an
//! operation needs several independent streams (e.g. two point clouds for a
//! self-comparison) it derives sub-seeds with [`derive_seed`] instead of
//! reusing one stream, so the draws of one stage never shift another.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used throughout the crate.
pub type Rng = ChaCha8Rng;

/// Builds the deterministic RNG for `seed`.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent sub-seed from a base seed and a stream tag.
///
/// SplitMix64 finalizer over the combined words; cheap and well-mixed.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(stream)
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
