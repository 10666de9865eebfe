use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// A reproducible uniform stream identified by `(seed, stream_index)`.
///
/// Backed by ChaCha12 from `rand_chacha` 0.3.1: the key is expanded from
/// `seed` by `SeedableRng::seed_from_u64`, and `stream_index` selects the
/// ChaCha stream (nonce). Uniform variates take the top 53 bits of each
/// 64-bit output. Recorded seeds replay identically for as long as these
/// three choices are kept.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream_index);
        RngStream {
            seed,
            stream_index,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
