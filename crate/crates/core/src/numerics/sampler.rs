//! Counter-based deterministic random source.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 stream: draw `i` is a pure function of `(seed, i)`.
///
/// Not shareable across threads while drawing; give each task its own
/// sampler via [`SeededSampler::derive`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeededSampler {
    seed: u64,
    counter: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Independent sampler for sub-task `index`, derived from this seed only.
    pub fn derive(&self, index: u64) -> Self {
        Self::new(derive_seed(self.seed, index))
    }

    pub fn next_word(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform on `(0, 1]` with 53 random bits.
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next_word() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Seed for sub-task `index` of a run with master seed `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master ^ 0x5851_F42D_4C95_7F2D).wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

impl RngCore for SeededSampler {
    fn next_u32(&mut self) -> u32 {
        (self.next_word() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.next_word()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_word().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Rayleigh draw `sigma * sqrt(-2 ln u)`, density `(x/sigma^2) exp(-x^2 / 2 sigma^2)`.
pub fn sample_rayleigh<T: Scalar>(sampler: &mut SeededSampler, sigma: T) -> Result<T> {
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::invalid(format!("Rayleigh sigma must be positive, got {sigma}")));
    }
    let u = sampler.uniform_open0();
    Ok(sigma * T::lit((-2.0 * u.ln()).sqrt()))
}
