//! Seedable, reproducible randomness.
//!
//! Every randomized operation in this crate is a pure function of a 64-bit
//! seed. Experiments that run many independent trials derive one seed per
//! trial from a master seed with [`derive_seed`]; the rule is
//!
//! ```text
//! derive_seed(master, stream) = splitmix64(master + (stream + 1) * 0x9e3779b97f4a7c15)
//! ```
//!
//! The pre-mix input is injective in `stream` for a fixed master and the
//! splitmix64 finalizer is a bijection on `u64`, so distinct streams always
//! receive distinct seeds, and the derivation does not depend on the order
//! in which trials run.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer; a bijection on `u64`.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed for an independent stream (e.g. one Monte Carlo trial)
/// from a master seed. Pure, order-independent, injective in `stream`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// The generator used throughout the crate.
pub type Rng = ChaCha8Rng;

/// Generator for a single seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `stream` under `master`; shorthand for
/// `rng_from_seed(derive_seed(master, stream))`.
pub fn rng_for_stream(master: u64, stream: u64) -> Rng {
    rng_from_seed(derive_seed(master, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn derive_seed_is_pure_and_distinct() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        assert_eq!(a, derive_seed(42, 0));
        assert_ne!(a, b);
        // A small window of streams never collides.
        let mut seen = std::collections::HashSet::new();
        for s in 0..10_000u64 {
            assert!(seen.insert(derive_seed(7, s)));
        }
    }

    #[test]
    fn streams_are_order_independent() {
        let forward: Vec<u64> = (0..8).map(|s| rng_for_stream(9, s).next_u64()).collect();
        let backward: Vec<u64> = (0..8)
            .rev()
            .map(|s| rng_for_stream(9, s).next_u64())
            .collect();
        let reversed: Vec<u64> = backward.into_iter().rev().collect();
        assert_eq!(forward, reversed);
    }
}
