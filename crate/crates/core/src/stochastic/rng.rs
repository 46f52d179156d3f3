use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// What a stream is used for. Part of the stream identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Purpose {
    /// Per-datum latent scale draws on a worker.
    Scales = 1,
    /// Global weight draws on the coordinator.
    Weights = 2,
    /// Synthetic data generation.
    Synthetic = 3,
    /// Free for tests and tools.
    Aux = 4,
}

/// A deterministic random stream identified by `(seed, rank, purpose)`.
///
/// Backed by ChaCha8: the 256-bit key is derived from the seed and the 64-bit
/// stream id packs rank and purpose, so the block counter alone advances the
/// stream and every identity is an independent keystream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    rank: u32,
    purpose: Purpose,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, rank: u32, purpose: Purpose) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(((rank as u64) << 8) | purpose as u64);
        Self {
            seed,
            rank,
            purpose,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn purpose(&self) -> Purpose {
        self.purpose
    }

    /// Position in the stream, in 32-bit words.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
    }

    pub fn set_counter(&mut self, pos: u128) {
        self.inner.set_word_pos(pos);
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
