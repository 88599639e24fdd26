//! Seed derivation and the deterministic RNG used by every sampling stage.
//!
//! Parallel stages (dataset generation, shadow collection, per-tree
//! bootstraps) must produce output that is byte-identical to a sequential
//! run. Each work item therefore gets its own child seed derived from the
//! master seed and the item index through a SplitMix64-style avalanche mix,
//! so item streams are independent of scheduling order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Deterministic RNG backing all sampling in this workspace. ChaCha12's
/// keystream is specified by the algorithm itself, so streams are portable
/// across platforms.
pub type DetRng = ChaCha12Rng;

/// Derive the `index`-th child seed from a master seed.
///
/// This is SplitMix64 with state `master`, jumped directly to position
/// `index`: the output is `finalize(master + (index+1)·φ64)` with
/// φ64 = 0x9E3779B97F4A7C15 and the standard two-round avalanche finalizer.
/// The jump form is order-independent: child `i` can be derived without
/// deriving children `0..i`, which is what makes parallel generation
/// reproducible.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for one work item of a seeded stage.
pub fn child_rng(master: u64, index: u64) -> DetRng {
    DetRng::seed_from_u64(derive_seed(master, index))
}

/// RNG seeded directly from a master seed (single-stream stages).
pub fn master_rng(seed: u64) -> DetRng {
    DetRng::seed_from_u64(seed)
}
