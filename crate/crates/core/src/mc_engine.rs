//! Deterministic parallel Monte Carlo harness.
//!
//! Sample `i` always draws from substream `i` of the run seed, and results are
//! folded in index order, so estimates do not depend on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_FEASIBILITY_SAMPLES: usize = 10_000;
pub const DEFAULT_SINR_SAMPLES: usize = 1_000;

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStream {
    pub seed: u64,
    pub substream_index: u64,
}

impl RandomStream {
    pub fn new(seed: u64, substream_index: u64) -> Self {
        Self { seed, substream_index }
    }

    /// Fresh generator positioned at the start of this substream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.substream_index);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: usize,
    pub seed: u64,
    pub method_tag: String,
}

impl EstimatorResult {
    /// Maps the estimate through `x ↦ offset + scale·x` (scale ≥ 0).
    pub fn affine(mut self, offset: f64, scale: f64) -> Self {
        debug_assert!(scale >= 0.0);
        self.mean = offset + scale * self.mean;
        self.ci_low = offset + scale * self.ci_low;
        self.ci_high = offset + scale * self.ci_high;
        self
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.method_tag = tag.into();
        self
    }
}

/// Wilson score interval at 95% for `successes` out of `n`.
pub fn wilson_interval(successes: usize, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

/// Sample mean with a normal-approximation 95% interval.
pub fn normal_interval(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, mean, mean);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let half = Z95 * (var / n).sqrt();
    (mean, mean - half, mean + half)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct McEngine {
    workers: usize,
}

impl McEngine {
    /// `workers == 0` uses rayon's global pool.
    pub fn new(workers: usize) -> Self {
        Self { workers }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Evaluates `f` on substreams `0..samples`, returned in index order.
    pub fn map<T, F>(&self, samples: usize, seed: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&RandomStream) -> T + Sync + Send,
    {
        let run = || {
            (0..samples as u64)
                .into_par_iter()
                .map(|i| f(&RandomStream::new(seed, i)))
                .collect::<Vec<T>>()
        };
        if self.workers == 0 {
            return run();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }

    /// Mean of a real-valued per-sample statistic with a normal 95% interval.
    pub fn estimate<F>(&self, per_sample: F, samples: usize, seed: u64) -> Result<EstimatorResult>
    where
        F: Fn(&RandomStream) -> f64 + Sync + Send,
    {
        if samples == 0 {
            return Err(Error::ZeroSamples);
        }
        let values = self.map(samples, seed, per_sample);
        let (mean, ci_low, ci_high) = normal_interval(&values);
        Ok(EstimatorResult {
            mean,
            ci_low,
            ci_high,
            samples,
            seed,
            method_tag: "mean/normal".into(),
        })
    }

    /// Probability of a Bernoulli per-sample event with a Wilson 95% interval.
    pub fn estimate_proportion<F>(&self, per_sample: F, samples: usize, seed: u64) -> Result<EstimatorResult>
    where
        F: Fn(&RandomStream) -> bool + Sync + Send,
    {
        if samples == 0 {
            return Err(Error::ZeroSamples);
        }
        let hits = self.map(samples, seed, per_sample).into_iter().filter(|&h| h).count();
        let (ci_low, ci_high) = wilson_interval(hits, samples);
        Ok(EstimatorResult {
            mean: hits as f64 / samples as f64,
            ci_low,
            ci_high,
            samples,
            seed,
            method_tag: "proportion/wilson".into(),
        })
    }
}
