//! Counter-based randomness: draws that are a pure function of their key.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a sequence of words into one well-distributed 64-bit key.
pub fn mix(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243f_6a88_85a3_08d3, |acc, &w| splitmix64(acc ^ splitmix64(w)))
}

/// Uniform variate in `[0, 1)` determined by `(seed, iteration, a, b)`.
///
/// The endpoint pair is canonicalised, so `(a, b)` and `(b, a)` draw the same value.
pub fn edge_uniform(seed: u64, iteration: u64, a: usize, b: usize) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let bits = mix(&[seed, iteration, lo as u64, hi as u64]);
    // 53 high bits give every representable multiple of 2^-53 in [0, 1).
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derives a child seed for a named stage.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix(&[seed, stream])
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
