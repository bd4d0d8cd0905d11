//! Seed derivation for reproducible random substreams.
//!
//! Every randomized operation in this crate takes a single 64-bit master
//! seed. Independent substreams (per month, per Monte Carlo run, per node)
//! are derived by mixing integer tags into the master seed with SplitMix64,
//! so results never depend on scheduling or evaluation order: the substream
//! for `(seed, tags...)` is a pure function of its arguments.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One SplitMix64 output step (Steele, Lea & Flood's mix function).
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent substream seed from `master` and a path of tags
/// (e.g. `[month_index]`, `[run_index, node_index]`). Changing any tag or the
/// master seed yields an unrelated stream; the same inputs always yield the
/// same seed.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master ^ 0xD6E8_FEB8_6659_FD93);
    for &tag in tags {
        state = splitmix64(state ^ splitmix64(tag.wrapping_add(0xA076_1D64_78BD_642F)));
    }
    state
}

/// A seeded, portable, fast RNG. All randomized operations in the crate draw
/// from this generator so that a fixed seed gives bitwise-identical results.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
