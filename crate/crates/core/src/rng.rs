//! Deterministic random-stream derivation.
//!
//! All randomness in a run flows from one seed. Every consumer derives its
//! own stream from (seed, purpose tag, indices), so training is reproducible
//! bit-for-bit regardless of worker count and resumable without serializing
//! generator state.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a hash of a purpose tag.
pub fn tag(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Mix a base seed with an arbitrary list of stream coordinates.
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut state = seed;
    let mut out = splitmix64(&mut state);
    for &p in parts {
        state ^= p;
        out ^= splitmix64(&mut state).rotate_left(17);
    }
    out
}

/// Derive an independent generator for (seed, tag, coordinates).
pub fn stream(seed: u64, purpose: &str, parts: &[u64]) -> ChaCha8Rng {
    let mut coords = Vec::with_capacity(parts.len() + 1);
    coords.push(tag(purpose));
    coords.extend_from_slice(parts);
    ChaCha8Rng::seed_from_u64(mix(seed, &coords))
}
