//! System parameters and i.i.d. circularly-symmetric complex Gaussian channels.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mc_engine::RandomStream;
use crate::numerics::ComplexMatrix;

/// Carrier wavelength of the reference outdoor geometry (meters).
pub const REFERENCE_WAVELENGTH_M: f64 = 0.06;
/// Transmitter/receiver to IRS and direct distances of the reference geometry (meters).
pub const REFERENCE_DISTANCE_M: f64 = 35.355_339_059_327_38; // 25·√2

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub k: usize,
    pub q: usize,
    pub wavelength_m: f64,
    /// ρ₁, distance of the IRS hops.
    pub dist_irs_m: f64,
    /// ρ₂, distance of the direct links.
    pub dist_direct_m: f64,
    /// ĥ ∈ (0, 1], extra attenuation of the direct links.
    pub blockage: f64,
    pub snr_rho: f64,
    pub noise_n0: f64,
}

impl SystemConfig {
    /// Reference outdoor geometry (λ = 0.06 m, ρ₁ = ρ₂ = 25√2 m) with the given blockage.
    pub fn reference(k: usize, q: usize, blockage: f64) -> Self {
        Self {
            k,
            q,
            wavelength_m: REFERENCE_WAVELENGTH_M,
            dist_irs_m: REFERENCE_DISTANCE_M,
            dist_direct_m: REFERENCE_DISTANCE_M,
            blockage,
            snr_rho: 1.0,
            noise_n0: 1.0,
        }
    }

    /// Geometry scaled so that every channel entry has unit variance.
    pub fn unit_variance(k: usize, q: usize) -> Self {
        Self {
            k,
            q,
            wavelength_m: 4.0 * PI,
            dist_irs_m: 1.0,
            dist_direct_m: 1.0,
            blockage: 1.0,
            snr_rho: 1.0,
            noise_n0: 1.0,
        }
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = q;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        let positive = [
            ("wavelength_m", self.wavelength_m),
            ("dist_irs_m", self.dist_irs_m),
            ("dist_direct_m", self.dist_direct_m),
            ("blockage", self.blockage),
            ("snr_rho", self.snr_rho),
            ("noise_n0", self.noise_n0),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.blockage > 1.0 {
            return Err(Error::Config(format!("blockage must be at most 1, got {}", self.blockage)));
        }
        Ok(())
    }
}

/// `(σ₁², σ₂²)`: variance of the IRS-side and of the direct entries.
pub fn variance_params(cfg: &SystemConfig) -> (f64, f64) {
    let s1 = (cfg.wavelength_m / (4.0 * PI * cfg.dist_irs_m)).powi(2);
    let s2 = (cfg.wavelength_m / (4.0 * PI * cfg.dist_direct_m)).powi(2) * cfg.blockage;
    (s1, s2)
}

/// One time slot of channel gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// K×K, entry `(j, i)` is the gain from transmitter `i` to receiver `j`.
    pub direct: ComplexMatrix,
    /// Q×K, entry `(u, i)` is the gain from transmitter `i` to element `u`.
    pub tx_to_irs: ComplexMatrix,
    /// K×Q, entry `(j, u)` is the gain from element `u` to receiver `j`.
    pub irs_to_rx: ComplexMatrix,
}

impl ChannelRealization {
    pub fn k(&self) -> usize {
        self.direct.rows()
    }

    pub fn q(&self) -> usize {
        self.tx_to_irs.rows()
    }
}

fn draw(rng: &mut impl Rng, std_per_part: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std_per_part, im * std_per_part)
}

/// Draws a realization from `rng`.
///
/// Entries are drawn as: the direct matrix row by row, then for each element
/// `u` its K transmitter gains followed by its K receiver gains. A run with more
/// elements therefore extends a run with fewer as a prefix.
pub fn sample_with(cfg: &SystemConfig, rng: &mut impl Rng) -> ChannelRealization {
    let (s1, s2) = variance_params(cfg);
    let (k, q) = (cfg.k, cfg.q);
    let (d1, d2) = ((s1 / 2.0).sqrt(), (s2 / 2.0).sqrt());
    let direct = ComplexMatrix::from_fn(k, k, |_, _| draw(rng, d2));
    let mut tx_to_irs = ComplexMatrix::zeros(q, k);
    let mut irs_to_rx = ComplexMatrix::zeros(k, q);
    for u in 0..q {
        for i in 0..k {
            tx_to_irs[(u, i)] = draw(rng, d1);
        }
        for j in 0..k {
            irs_to_rx[(j, u)] = draw(rng, d1);
        }
    }
    ChannelRealization {
        direct,
        tx_to_irs,
        irs_to_rx,
    }
}

pub fn sample(cfg: &SystemConfig, stream: &RandomStream) -> ChannelRealization {
    sample_with(cfg, &mut stream.rng())
}
