//! Deterministic RNG substreams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream whose
//! 256-bit seed is the concatenation `(master_seed, tag, n, replicate)`.
//! Distinct experiment tags, sample sizes and replicate indices therefore get
//! independent streams by construction, with no shared mutable state, so
//! replicate-level parallelism is bit-identical to a serial run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream tags, one per random consumer.
pub mod tag {
    pub const DATASET: u64 = 0x01;
    pub const BOOTSTRAP_WEIGHTS: u64 = 0x02;
    pub const LIMIT_PATH: u64 = 0x03;
    pub const CONVERGENCE: u64 = 0x04;
    pub const BOOTSTRAP_EXPERIMENT: u64 = 0x05;
    pub const DIVERGENCE: u64 = 0x06;
    pub const DIVERGENCE_REFERENCE: u64 = 0x07;
    pub const DKW: u64 = 0x08;
    pub const INEQUALITY: u64 = 0x09;
    pub const EQUALITY_TEST: u64 = 0x0a;
    pub const ORACLE: u64 = 0x0b;
}

/// Identifies a family of substreams: `replicate(i)` yields the i-th member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    pub master_seed: u64,
    pub tag: u64,
    pub n: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64, tag: u64, n: u64) -> Self {
        Self {
            master_seed,
            tag,
            n,
        }
    }

    /// RNG for one replicate of this stream family.
    pub fn replicate(&self, index: u64) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[0..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&self.tag.to_le_bytes());
        seed[16..24].copy_from_slice(&self.n.to_le_bytes());
        seed[24..32].copy_from_slice(&index.to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }
}

/// Uniform draw on the open interval (0,1).
pub fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return u;
        }
    }
}

/// Fills `out` with independent standard normals (Marsaglia polar method).
pub fn fill_standard_normal<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    let mut i = 0;
    while i < out.len() {
        let (mut v1, mut v2, mut s);
        loop {
            v1 = 2.0 * rng.gen::<f64>() - 1.0;
            v2 = 2.0 * rng.gen::<f64>() - 1.0;
            s = v1 * v1 + v2 * v2;
            if s > 0.0 && s < 1.0 {
                break;
            }
        }
        let factor = (-2.0 * s.ln() / s).sqrt();
        out[i] = v1 * factor;
        i += 1;
        if i < out.len() {
            out[i] = v2 * factor;
            i += 1;
        }
    }
}

/// Single standard normal draw.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let mut z = [0.0];
    fill_standard_normal(rng, &mut z);
    z[0]
}
