//! Deterministic Gaussian increments from a counter-based generator.
//!
//! Every variate is a pure function of (seed, stream_id, draw_index), so a
//! trajectory replays bit-for-bit from its seed and parallel sweeps never
//! contend over generator state. One stream per state component keeps the
//! component noises independent.

use std::f64::consts::PI;

/// Identifies one independent increment stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl GaussianStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        GaussianStream { seed, stream_id }
    }
}

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in (0, 1): 53 mantissa bits, offset half an ulp so 0 never occurs.
fn to_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// One Brownian increment dB ~ Normal(0, dt) for the given draw index.
///
/// Box-Muller over two counter-derived uniforms; identical inputs yield the
/// identical variate on every run.
pub fn gaussian_increment(stream: GaussianStream, draw_index: u64, dt: f64) -> f64 {
    debug_assert!(dt > 0.0);
    standard_normal(stream, draw_index) * dt.sqrt()
}

/// One standard normal variate for (seed, stream, index).
pub fn standard_normal(stream: GaussianStream, draw_index: u64) -> f64 {
    let base = mix64(stream.seed ^ mix64(stream.stream_id));
    let a = mix64(base ^ mix64(draw_index));
    let b = mix64(a ^ 0xD6E8_FEB8_6659_FD93);
    let u1 = to_unit(a);
    let u2 = to_unit(b);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}
