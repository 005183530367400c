//! Deterministic random streams.
//!
//! Every stochastic routine draws through [`RandomSource`], so operator tests
//! can substitute scripted values. [`RngStream`] is the production source: a
//! ChaCha8 generator seeded through `SeedableRng::seed_from_u64`, which is
//! specified bit-for-bit and therefore identical on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Source of the three draw kinds the optimizers need.
pub trait RandomSource {
    /// Uniform draw in `[0, 1)`.
    fn uniform(&mut self) -> f64;

    /// Standard normal draw.
    fn normal(&mut self) -> f64;

    /// Uniform index in `0..n`. `n` must be positive.
    fn below(&mut self, n: usize) -> usize;

    /// Uniform draw in `[lo, hi)`.
    fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

impl<R: RandomSource + ?Sized> RandomSource for &mut R {
    fn uniform(&mut self) -> f64 {
        (**self).uniform()
    }
    fn normal(&mut self) -> f64 {
        (**self).normal()
    }
    fn below(&mut self, n: usize) -> usize {
        (**self).below(n)
    }
}

/// Seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for trial `trial` of an experiment with base seed `base`.
    /// The trial seed is `base + trial` (wrapping).
    pub fn for_trial(base: u64, trial: u64) -> Self {
        Self::new(base.wrapping_add(trial))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RandomSource for RngStream {
    fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        // u64 sampling keeps the draw sequence independent of pointer width.
        self.inner.random_range(0..n as u64) as usize
    }
}

/// Scripted source for operator tests: replays fixed uniform, normal and
/// index sequences, cycling when exhausted.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    uniforms: Vec<f64>,
    normals: Vec<f64>,
    indices: Vec<usize>,
    cursor: (usize, usize, usize),
}

impl ScriptedSource {
    pub fn new(uniforms: Vec<f64>, normals: Vec<f64>, indices: Vec<usize>) -> Self {
        Self {
            uniforms,
            normals,
            indices,
            cursor: (0, 0, 0),
        }
    }

    pub fn uniforms(values: &[f64]) -> Self {
        Self::new(values.to_vec(), vec![0.0], vec![0])
    }
}

impl RandomSource for ScriptedSource {
    fn uniform(&mut self) -> f64 {
        let v = self.uniforms[self.cursor.0 % self.uniforms.len()];
        self.cursor.0 += 1;
        v
    }

    fn normal(&mut self) -> f64 {
        let v = self.normals[self.cursor.1 % self.normals.len()];
        self.cursor.1 += 1;
        v
    }

    fn below(&mut self, n: usize) -> usize {
        let v = self.indices[self.cursor.2 % self.indices.len()];
        self.cursor.2 += 1;
        v % n
    }
}
