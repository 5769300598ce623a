//! Reproducible Gaussian variates and thread-count control.
//!
//! Each realization draws from its own ChaCha8 stream: the key comes from the master seed
//! and the stream number is the realization index, so a realization's values do not depend
//! on how realizations are distributed over threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "ISOFIELD_THREADS";

/// Standard normal variates by inversion of the CDF on a counter-based uniform stream.
pub struct NormalStream {
    rng: ChaCha8Rng,
    normal: Normal,
}

impl NormalStream {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream);
        NormalStream { rng, normal: Normal::new(0.0, 1.0).expect("unit normal") }
    }

    /// Uniform on the open interval `(0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u = self.uniform();
        self.normal.inverse_cdf(u)
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.normal();
        }
    }
}

/// Thread count from the environment, if set to a positive integer.
pub fn env_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()).filter(|&n| n > 0)
}

/// Runs `f` on a dedicated pool of `threads` workers (`None`: the environment setting, else
/// the global pool).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads.or_else(env_threads) {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        None => f(),
    }
}
