//! Seeded random streams.
//!
//! Every random draw in the crate comes from a [`StreamRng`] keyed by a
//! `(seed, stream)` pair. The generator is ChaCha8 (`rand_chacha`), seeded
//! with `ChaCha8Rng::seed_from_u64(seed)` and positioned on stream `stream`
//! via `set_stream`. ChaCha output is specified bit-for-bit, so the same
//! key produces the same numbers on every platform.
//!
//! Uniforms take the top 52 bits of a `u64` and sit at the cell midpoints
//! `(k + 0.5) / 2^52`, so they never hit 0 or 1. Normal variates are
//! inverse-CDF transforms of those uniforms.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::special::ppnd16;

#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
        ((self.next_u64() >> 12) as f64 + 0.5) * SCALE
    }

    /// Uniform integer in `0..n` by widening multiply. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn standard_normal(&mut self) -> f64 {
        ppnd16(self.uniform())
    }

    /// Gamma(shape, 1) by Marsaglia–Tsang; shapes below 1 use the
    /// `Gamma(shape + 1) · U^{1/shape}` boost.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let g = self.gamma(shape + 1.0);
            let u = self.uniform();
            return g * libm::pow(u, 1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / libm::sqrt(9.0 * d);
        loop {
            let x = self.standard_normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
                return d * v;
            }
        }
    }

    /// χ²_ν as `2 · Gamma(ν/2, 1)`.
    pub fn chi_squared(&mut self, nu: f64) -> f64 {
        2.0 * self.gamma(0.5 * nu)
    }

    /// `k` distinct indices from `0..n` (partial Fisher–Yates), in draw order.
    pub fn choose_distinct(&mut self, n: usize, k: usize) -> alloc::vec::Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: alloc::vec::Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
