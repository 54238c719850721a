//! IRS coefficient solvers for each surface mode, feasibility events, the
//! ε-relaxed cancellation indicator Λ and phase-aligned SINRs.

use std::f64::consts::FRAC_PI_4;

use itertools::Itertools;
use num_complex::Complex64;

use crate::channel_model::{ChannelRealization, SystemConfig};
use crate::error::{Error, Result};
use crate::network_topology::{CancellationSet, NetworkMatrix};
use crate::numerics::{linf_feasible_at, max_abs, min_linf_feasible, solve_square, ComplexMatrix, RowFactor};

/// Slack on coefficient magnitude constraints.
pub const MAGNITUDE_TOL: f64 = 1e-9;
/// Largest number of K²-element subsets the exhaustive Λ search will try.
pub const MAX_LAMBDA_SUBSETS: u128 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IrsMode {
    Active,
    Passive,
    PassiveLossless,
    EpsRelaxed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrsCoefficients {
    pub tau: Vec<Complex64>,
    pub mode: IrsMode,
}

impl IrsCoefficients {
    pub fn zeros(q: usize, mode: IrsMode) -> Self {
        Self {
            tau: vec![Complex64::new(0.0, 0.0); q],
            mode,
        }
    }

    /// Checks the amplitude class of `mode`; zero marks an inactive element.
    pub fn satisfies_mode(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        self.tau.iter().all(|&t| {
            let r = t.norm();
            match self.mode {
                IrsMode::Active => r.is_finite(),
                IrsMode::Passive => r <= 1.0 + MAGNITUDE_TOL,
                IrsMode::PassiveLossless => t == zero || (r - 1.0).abs() <= MAGNITUDE_TOL,
                IrsMode::EpsRelaxed(eps) => {
                    t == zero || (1.0 - eps - MAGNITUDE_TOL <= r && r <= 1.0 + MAGNITUDE_TOL)
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub network: NetworkMatrix,
    pub pinv_feasible: bool,
    pub linf_feasible: bool,
    pub linf_value: f64,
    pub pinv_max_abs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserSinr {
    pub sinr: f64,
    pub sinr_r: f64,
    pub sinr_i: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinrSample {
    pub users: Vec<UserSinr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaStrategy {
    /// Consecutive blocks of K² elements.
    #[default]
    DisjointBlocks,
    /// Every K²-element subset (bounded by [`MAX_LAMBDA_SUBSETS`]).
    AllSubsets,
}

/// Linear system whose solutions cancel the links in `pairs`.
///
/// Row `r` belongs to pair `(i, j)`: `A[r, u] = H_TI[u, i]·H_IR[j, u]` and
/// `b[r] = −H[j, i]`.
pub fn build_cancellation_system(
    ch: &ChannelRealization,
    pairs: &CancellationSet,
) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let q = ch.q();
    if pairs.len() > q {
        return Err(Error::TooManyTargets {
            targets: pairs.len(),
            elements: q,
        });
    }
    Ok(system_over(ch, &pairs.pairs, &(0..q).collect::<Vec<_>>(), |i, j| -ch.direct[(j, i)]))
}

fn system_over(
    ch: &ChannelRealization,
    pairs: &[(usize, usize)],
    elements: &[usize],
    rhs: impl Fn(usize, usize) -> Complex64,
) -> (ComplexMatrix, Vec<Complex64>) {
    let a = ComplexMatrix::from_fn(pairs.len(), elements.len(), |r, c| {
        let (i, j) = pairs[r];
        let u = elements[c];
        ch.tx_to_irs[(u, i)] * ch.irs_to_rx[(j, u)]
    });
    let b = pairs.iter().map(|&(i, j)| rhs(i, j)).collect();
    (a, b)
}

/// Unbounded coefficients cancelling every zero of `n`.
pub fn solve_active(ch: &ChannelRealization, n: &NetworkMatrix) -> Result<IrsCoefficients> {
    let pairs = n.cancellation_set();
    let (a, b) = build_cancellation_system(ch, &pairs)?;
    let tau = if pairs.len() == ch.q() {
        solve_square(&a, &b)?
    } else {
        match RowFactor::new(&a) {
            Ok(f) => f.min_norm(&b),
            Err(Error::RankDeficient { rank, .. }) => {
                return Err(Error::SingularMatrix {
                    condition: if rank == 0 { f64::INFINITY } else { 1.0 / crate::numerics::DEFAULT_RANK_TOL },
                })
            }
            Err(e) => return Err(e),
        }
    };
    Ok(IrsCoefficients {
        tau,
        mode: IrsMode::Active,
    })
}

/// Minimum-norm coefficients for `n` together with both passive feasibility
/// verdicts.
pub fn solve_passive_candidate(
    ch: &ChannelRealization,
    n: &NetworkMatrix,
) -> Result<(IrsCoefficients, FeasibilityReport)> {
    let pairs = n.cancellation_set();
    let (a, b) = build_cancellation_system(ch, &pairs)?;
    let tau = RowFactor::new(&a)?.min_norm(&b);
    let pinv_max_abs = max_abs(&tau);
    let pinv_feasible = pinv_max_abs <= 1.0 + MAGNITUDE_TOL;
    let linf = min_linf_feasible(&a, &b, 1.0)?;
    let report = FeasibilityReport {
        network: n.clone(),
        pinv_feasible,
        linf_feasible: linf.feasible || pinv_feasible,
        linf_value: linf.t_star.min(pinv_max_abs),
        pinv_max_abs,
    };
    let mode = if pinv_feasible { IrsMode::Passive } else { IrsMode::Active };
    Ok((IrsCoefficients { tau, mode }, report))
}

/// Whether the minimum-norm solution cancelling `pairs` fits a passive surface.
/// Rank-deficient systems count as infeasible.
pub fn pinv_feasible(ch: &ChannelRealization, pairs: &CancellationSet) -> Result<bool> {
    let (a, b) = build_cancellation_system(ch, pairs)?;
    Ok(match RowFactor::new(&a) {
        Ok(f) => max_abs(&f.min_norm(&b)) <= 1.0 + MAGNITUDE_TOL,
        Err(Error::RankDeficient { .. }) => false,
        Err(e) => return Err(e),
    })
}

/// Whether some passive coefficient vector cancels `pairs` (single-radius
/// test at 1). Rank-deficient systems count as infeasible.
pub fn linf_feasible_unit(ch: &ChannelRealization, pairs: &CancellationSet) -> Result<bool> {
    let (a, b) = build_cancellation_system(ch, pairs)?;
    match RowFactor::new(&a) {
        Ok(f) => linf_feasible_at(&f, &a, &b, 1.0 + MAGNITUDE_TOL),
        Err(Error::RankDeficient { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The K²×K² system over `elements`: cross rows cancel `H[j, i]`, diagonal
/// rows force the surface contribution to the direct links to zero.
pub fn lambda_system(ch: &ChannelRealization, elements: &[usize]) -> (ComplexMatrix, Vec<Complex64>) {
    let k = ch.k();
    let pairs: Vec<(usize, usize)> = (0..k).cartesian_product(0..k).collect();
    system_over(ch, &pairs, elements, |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            -ch.direct[(j, i)]
        }
    })
}

fn block_passes(ch: &ChannelRealization, elements: &[usize], eps: f64) -> Option<Vec<Complex64>> {
    let (a, b) = lambda_system(ch, elements);
    let tau = solve_square(&a, &b).ok()?;
    let lo = 1.0 - eps - MAGNITUDE_TOL;
    tau.iter()
        .all(|t| {
            let r = t.norm();
            lo <= r && r <= 1.0 + MAGNITUDE_TOL
        })
        .then_some(tau)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Λ: whether some K²-element subset of an ε-relaxed lossless surface cancels
/// every cross link while leaving the direct links untouched.
pub fn eps_relaxed_lambda(
    ch: &ChannelRealization,
    epsilon: f64,
    strategy: LambdaStrategy,
) -> Result<(bool, Option<IrsCoefficients>)> {
    let (k, q) = (ch.k(), ch.q());
    let block = k * k;
    if q < block {
        return Err(Error::TooFewElements {
            required: block,
            available: q,
        });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let witness = |elements: &[usize], tau: Vec<Complex64>| {
        let mut c = IrsCoefficients::zeros(q, IrsMode::EpsRelaxed(epsilon));
        for (&u, t) in elements.iter().zip(tau) {
            c.tau[u] = t;
        }
        c
    };
    match strategy {
        LambdaStrategy::DisjointBlocks => {
            for start in (0..q / block).map(|b| b * block) {
                let elements: Vec<usize> = (start..start + block).collect();
                if let Some(tau) = block_passes(ch, &elements, epsilon) {
                    return Ok((true, Some(witness(&elements, tau))));
                }
            }
        }
        LambdaStrategy::AllSubsets => {
            let count = binomial(q, block);
            if count > MAX_LAMBDA_SUBSETS {
                return Err(Error::SizeOverflow {
                    what: "element subsets".into(),
                    size: usize::try_from(count).unwrap_or(usize::MAX),
                    budget: MAX_LAMBDA_SUBSETS as usize,
                });
            }
            for elements in (0..q).combinations(block) {
                if let Some(tau) = block_passes(ch, &elements, epsilon) {
                    return Ok((true, Some(witness(&elements, tau))));
                }
            }
        }
    }
    Ok((false, None))
}

/// Unit-modulus coefficients aligning each user's own IRS path to phase π/4.
///
/// With `Q = nK`, user `k` owns elements `nk..n(k+1)`; leftover elements stay off.
pub fn lossless_phase_align(ch: &ChannelRealization) -> IrsCoefficients {
    let (k, q) = (ch.k(), ch.q());
    let mut c = IrsCoefficients::zeros(q, IrsMode::PassiveLossless);
    let per_user = q / k;
    for user in 0..k {
        for u in per_user * user..per_user * (user + 1) {
            let phi = -ch.tx_to_irs[(u, user)].arg() - ch.irs_to_rx[(user, u)].arg() + FRAC_PI_4;
            c.tau[u] = Complex64::from_polar(1.0, phi);
        }
    }
    c
}

/// `H + H_IR·diag(τ)·H_TI`.
pub fn effective_channel(ch: &ChannelRealization, tau: &[Complex64]) -> ComplexMatrix {
    let k = ch.k();
    assert_eq!(tau.len(), ch.q(), "coefficient count differs from element count");
    let mut h = ch.direct.clone();
    for (u, &t) in tau.iter().enumerate() {
        if t == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..k {
            let left = ch.irs_to_rx[(j, u)] * t;
            for i in 0..k {
                h[(j, i)] += left * ch.tx_to_irs[(u, i)];
            }
        }
    }
    h
}

/// Per-user SINR of the full signal and of its real and imaginary parts.
pub fn sinr_triplet(ch: &ChannelRealization, tau: &[Complex64], cfg: &SystemConfig) -> SinrSample {
    let h = effective_channel(ch, tau);
    let (rho, n0) = (cfg.snr_rho, cfg.noise_n0);
    let users = (0..ch.k())
        .map(|k| {
            let own = h[(k, k)];
            let (mut int_r, mut int_i) = (0.0, 0.0);
            for i in (0..ch.k()).filter(|&i| i != k) {
                int_r += h[(k, i)].re.powi(2);
                int_i += h[(k, i)].im.powi(2);
            }
            let half = rho / 2.0;
            UserSinr {
                sinr: own.norm_sqr() * half / ((int_r + int_i) * half + n0),
                sinr_r: own.re.powi(2) * half / (int_r * half + n0 / 2.0),
                sinr_i: own.im.powi(2) * half / (int_i * half + n0 / 2.0),
            }
        })
        .collect();
    SinrSample { users }
}
