//! Deterministic seed derivation and counter-based uniforms.
//!
//! All randomness in the crate flows from 64-bit seeds. Derived seeds are
//! produced by a SplitMix-style finalizer over (master, stream label, index),
//! which keeps independent experiment streams reproducible across platforms
//! and thread schedules.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

/// SplitMix64 finalizer. Bijective on u64.
#[inline]
pub fn splitmix_finalize(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// Derive a child seed from a master seed, a stream label and an index.
///
/// For a fixed (master, label) the map index -> seed is injective: the
/// index enters through an odd-constant multiply followed by a bijective
/// finalizer, so two distinct indices can never collide.
pub fn seed_derive(master: u64, label: &str, index: u64) -> u64 {
    let stream = splitmix_finalize(master ^ fnv1a(label.as_bytes()));
    splitmix_finalize(stream.wrapping_add(index.wrapping_mul(GOLDEN) ^ GOLDEN))
}

/// Counter-based uniform in [0, 1): one value per (seed, counter) pair, no
/// sequential state. Counter `v` is typically a vertex index, which gives
/// the monotone coupling used by percolation (same seed, larger p keeps a
/// superset of vertices).
#[inline]
pub fn uniform01(seed: u64, counter: u64) -> f64 {
    let z = splitmix_finalize(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)));
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
