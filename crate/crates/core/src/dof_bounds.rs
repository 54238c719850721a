//! Sum-DoF bounds: closed forms for active surfaces, region predicates and
//! Monte Carlo estimators for passive, ε-relaxed and ρ-limited surfaces.

use std::fmt;

use itertools::Itertools;

use crate::channel_model::{sample, ChannelRealization, SystemConfig};
use crate::error::{Error, Result};
use crate::irs_solvers::{
    eps_relaxed_lambda, linf_feasible_unit, lossless_phase_align, pinv_feasible, sinr_triplet, LambdaStrategy,
};
use crate::mc_engine::{EstimatorResult, McEngine, DEFAULT_FEASIBILITY_SAMPLES};
use crate::network_topology::{off_diagonal_pairs, w_pattern, w_pattern_zero_count, CancellationSet, NetworkMatrix};

const REGION_TOL: f64 = 1e-12;
/// Exhaustive upper-bound search is used up to this many off-diagonal positions.
pub const EXACT_SEARCH_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct DofPoint {
    pub d: Vec<f64>,
}

impl DofPoint {
    pub fn new(d: Vec<f64>) -> Self {
        Self { d }
    }

    pub fn sum(&self) -> f64 {
        self.d.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    ClosedForm,
    MonteCarlo,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::ClosedForm => "closed-form",
            CurveKind::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurvePoint {
    pub q: usize,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub kind: CurveKind,
    pub method_tag: String,
    pub seed: u64,
    pub samples: usize,
}

impl BoundCurvePoint {
    pub fn closed_form(q: usize, value: f64, method_tag: impl Into<String>) -> Self {
        Self {
            q,
            value,
            ci_low: value,
            ci_high: value,
            kind: CurveKind::ClosedForm,
            method_tag: method_tag.into(),
            seed: 0,
            samples: 0,
        }
    }

    pub fn from_estimate(q: usize, r: EstimatorResult) -> Self {
        Self {
            q,
            value: r.mean,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            kind: CurveKind::MonteCarlo,
            method_tag: r.method_tag,
            seed: r.seed,
            samples: r.samples,
        }
    }
}

/// Whether `d` lies in the DoF region of network matrix `n`.
pub fn region_contains(n: &NetworkMatrix, d: &DofPoint) -> bool {
    let k = n.k();
    if d.d.len() != k {
        return false;
    }
    if d.d.iter().any(|&x| x < -REGION_TOL || x > 1.0 + REGION_TOL) {
        return false;
    }
    (0..k).tuple_combinations().all(|(i, j)| {
        let link = (n.get(i, j) || n.get(j, i)) as u8 as f64;
        d.d[i] + d.d[j] <= 2.0 - link + REGION_TOL
    })
}

/// Whether `d` is dominated by a time-shared mix of region points.
pub fn timeshare_contains(points: &[(NetworkMatrix, DofPoint)], weights: &[f64], d: &DofPoint) -> Result<bool> {
    if points.len() != weights.len() {
        return Err(Error::Dimension(format!("{} points, {} weights", points.len(), weights.len())));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || weights.iter().any(|&a| a < 0.0) {
        return Err(Error::WeightSum { sum });
    }
    if points.iter().any(|(n, p)| !region_contains(n, p)) {
        return Ok(false);
    }
    let k = d.d.len();
    if points.iter().any(|(_, p)| p.d.len() != k) {
        return Ok(false);
    }
    Ok((0..k).all(|u| {
        let mix: f64 = points.iter().zip(weights).map(|((_, p), a)| a * p.d[u]).sum();
        d.d[u] <= mix + REGION_TOL
    }))
}

/// Pairwise outer-bound value `2 − (n_ij + n_ji)/2`.
pub fn outer_pair_value(n: &NetworkMatrix, i: usize, j: usize) -> f64 {
    assert_ne!(i, j, "outer pair needs two distinct users");
    2.0 - (n.get(i, j) as u8 + n.get(j, i) as u8) as f64 / 2.0
}

/// Largest `W` whose isolating pattern fits in `q` elements.
pub fn active_w_star(k: usize, q: usize) -> usize {
    (0..=k).filter(|&w| w_pattern_zero_count(k, w) <= q).max().unwrap_or(0)
}

pub fn active_lower_sum(k: usize, q: usize) -> f64 {
    (k + active_w_star(k, q)) as f64 / 2.0
}

pub fn active_upper_sum(k: usize, q: usize) -> f64 {
    let k_f = k as f64;
    (k_f / 2.0 + q as f64 / (2.0 * (k_f - 1.0))).min(k_f)
}

/// How the passive lower bound searches isolated user sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BSearch {
    /// Every user set of each size.
    #[default]
    AllSubsets,
    /// Only the first `W` users.
    Canonical,
}

impl BSearch {
    fn tag(self) -> &'static str {
        match self {
            BSearch::AllSubsets => "all-b",
            BSearch::Canonical => "canonical-b",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorOptions {
    pub samples: usize,
    pub seed: u64,
    pub engine: McEngine,
    pub b_search: BSearch,
    pub lambda_strategy: LambdaStrategy,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_FEASIBILITY_SAMPLES,
            seed: 1,
            engine: McEngine::default(),
            b_search: BSearch::default(),
            lambda_strategy: LambdaStrategy::default(),
        }
    }
}

impl EstimatorOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }
}

/// Largest `W` whose isolating pattern has a passive minimum-norm solution on
/// this channel (0 when none does).
pub fn passive_lower_sample(ch: &ChannelRealization, b_search: BSearch) -> usize {
    let (k, q) = (ch.k(), ch.q());
    for w in (1..=k).rev() {
        if w_pattern_zero_count(k, w) > q {
            continue;
        }
        let sets: Vec<Vec<usize>> = match b_search {
            BSearch::AllSubsets => (0..k).combinations(w).collect(),
            BSearch::Canonical => vec![(0..w).collect()],
        };
        if sets
            .iter()
            .any(|b| pinv_feasible(ch, &w_pattern(k, b).cancellation_set()).unwrap_or(false))
        {
            return w;
        }
    }
    0
}

fn feasible(ch: &ChannelRealization, pairs: &[(usize, usize)]) -> bool {
    let set = CancellationSet { pairs: pairs.to_vec() };
    linf_feasible_unit(ch, &set).unwrap_or(false)
}

/// Largest number of cross links a passive surface can cancel on this channel,
/// and whether the exhaustive search was used.
pub fn passive_upper_sample(ch: &ChannelRealization) -> (usize, bool) {
    let (k, q) = (ch.k(), ch.q());
    let pairs = off_diagonal_pairs(k);
    let top = q.min(pairs.len());
    if pairs.len() <= EXACT_SEARCH_BITS {
        for m in (1..=top).rev() {
            for combo in pairs.iter().copied().combinations(m) {
                if feasible(ch, &combo) {
                    return (m, true);
                }
            }
        }
        return (0, true);
    }
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for p in pairs {
        if chosen.len() == top {
            break;
        }
        chosen.push(p);
        if !feasible(ch, &chosen) {
            chosen.pop();
        }
    }
    (chosen.len(), false)
}

fn passive_lower_tag(b: BSearch) -> String {
    format!("passive-lower/pinv/{}", b.tag())
}

/// Passive lower bound: mean of `(K + W)/2` with `W` from
/// [`passive_lower_sample`].
pub fn passive_lower_sum_mc(cfg: &SystemConfig, opts: &EstimatorOptions) -> Result<BoundCurvePoint> {
    cfg.validate()?;
    let k = cfg.k as f64;
    let r = opts.engine.estimate(
        |s| {
            let ch = sample(cfg, s);
            (k + passive_lower_sample(&ch, opts.b_search) as f64) / 2.0
        },
        opts.samples,
        opts.seed,
    )?;
    Ok(BoundCurvePoint::from_estimate(cfg.q, r.with_tag(passive_lower_tag(opts.b_search))))
}

/// Passive upper bound: mean of `K/2 + m*/(2(K − 1))`.
pub fn passive_upper_sum_mc(cfg: &SystemConfig, opts: &EstimatorOptions) -> Result<BoundCurvePoint> {
    cfg.validate()?;
    if cfg.k < 2 {
        return Err(Error::Config("upper bound needs at least two users".into()));
    }
    let k = cfg.k as f64;
    let exact = cfg.k * (cfg.k - 1) <= EXACT_SEARCH_BITS;
    let r = opts.engine.estimate(
        |s| {
            let ch = sample(cfg, s);
            k / 2.0 + passive_upper_sample(&ch).0 as f64 / (2.0 * (k - 1.0))
        },
        opts.samples,
        opts.seed,
    )?;
    let tag = format!("passive-upper/linf-ap/{}", if exact { "exact" } else { "greedy" });
    Ok(BoundCurvePoint::from_estimate(cfg.q, r.with_tag(tag)))
}

fn strategy_tag(s: LambdaStrategy) -> &'static str {
    match s {
        LambdaStrategy::DisjointBlocks => "disjoint",
        LambdaStrategy::AllSubsets => "all-subsets",
    }
}

/// Estimate of Pr{Λ = 1}.
pub fn lambda_probability_mc(cfg: &SystemConfig, epsilon: f64, opts: &EstimatorOptions) -> Result<EstimatorResult> {
    cfg.validate()?;
    if cfg.q < cfg.k * cfg.k {
        return Err(Error::TooFewElements {
            required: cfg.k * cfg.k,
            available: cfg.q,
        });
    }
    // surface config problems before fanning out
    eps_relaxed_lambda(&sample(cfg, &crate::mc_engine::RandomStream::new(opts.seed, 0)), epsilon, opts.lambda_strategy)?;
    let r = opts.engine.estimate_proportion(
        |s| {
            eps_relaxed_lambda(&sample(cfg, s), epsilon, opts.lambda_strategy)
                .map(|(hit, _)| hit)
                .unwrap_or(false)
        },
        opts.samples,
        opts.seed,
    )?;
    Ok(r.with_tag(format!("lambda/eps={epsilon}/{}", strategy_tag(opts.lambda_strategy))))
}

/// ε-relaxed lossless lower bound `K/2·(1 − p̂) + K·p̂` with `p̂ = Pr{Λ = 1}`.
pub fn eps_relaxed_lower_sum_mc(cfg: &SystemConfig, epsilon: f64, opts: &EstimatorOptions) -> Result<BoundCurvePoint> {
    let k = cfg.k as f64;
    let r = lambda_probability_mc(cfg, epsilon, opts)?
        .affine(k / 2.0, k / 2.0)
        .with_tag(format!("eps-lower/eps={epsilon}/{}", strategy_tag(opts.lambda_strategy)));
    Ok(BoundCurvePoint::from_estimate(cfg.q, r))
}

/// ρ-limited lower bound `K(1 − ε)·p̂`, where `p̂` is the probability that
/// every user's real and imaginary SINR reach `ρ^(1−ε)` under phase alignment.
pub fn rho_limited_lower_sum_mc(
    cfg: &SystemConfig,
    epsilon_exponent: f64,
    opts: &EstimatorOptions,
) -> Result<BoundCurvePoint> {
    cfg.validate()?;
    if !(epsilon_exponent > 0.0 && epsilon_exponent < 1.0) {
        return Err(Error::Config(format!("exponent must lie in (0, 1), got {epsilon_exponent}")));
    }
    let threshold = cfg.snr_rho.powf(1.0 - epsilon_exponent);
    let r = opts.engine.estimate_proportion(
        |s| {
            let ch = sample(cfg, s);
            let tau = lossless_phase_align(&ch);
            sinr_triplet(&ch, &tau.tau, cfg)
                .users
                .iter()
                .all(|u| u.sinr_r.min(u.sinr_i) >= threshold)
        },
        opts.samples,
        opts.seed,
    )?;
    let scale = cfg.k as f64 * (1.0 - epsilon_exponent);
    let r = r
        .affine(0.0, scale)
        .with_tag(format!("rho-lower/eps={epsilon_exponent}/phase-align"));
    Ok(BoundCurvePoint::from_estimate(cfg.q, r))
}

/// Mean fraction of users whose real-part SINR falls below `margin` under
/// phase alignment.
pub fn sinr_outage_mc(cfg: &SystemConfig, margin: f64, opts: &EstimatorOptions) -> Result<EstimatorResult> {
    cfg.validate()?;
    let k = cfg.k as f64;
    let r = opts.engine.estimate(
        |s| {
            let ch = sample(cfg, s);
            let tau = lossless_phase_align(&ch);
            let below = sinr_triplet(&ch, &tau.tau, cfg)
                .users
                .iter()
                .filter(|u| u.sinr_r < margin)
                .count();
            below as f64 / k
        },
        opts.samples,
        opts.seed,
    )?;
    Ok(r.with_tag(format!("sinr-outage/m={margin}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc_engine::RandomStream;

    #[test]
    fn lower_closed_form_examples() {
        assert_eq!(active_lower_sum(3, 0), 1.5);
        assert_eq!(active_lower_sum(3, 4), 2.0);
        assert_eq!(active_lower_sum(3, 5), 2.0);
        assert_eq!(active_lower_sum(3, 6), 3.0);
        assert_eq!(active_lower_sum(3, 100), 3.0);
    }

    #[test]
    fn upper_closed_form_examples() {
        assert_eq!(active_upper_sum(3, 0), 1.5);
        assert_eq!(active_upper_sum(3, 2), 2.0);
        assert_eq!(active_upper_sum(3, 6), 3.0);
        assert_eq!(active_upper_sum(3, 60), 3.0);
    }

    #[test]
    fn closed_forms_ordered_and_monotone() {
        for k in 2..=8 {
            let kf = k as f64;
            assert_eq!(active_lower_sum(k, 0), active_upper_sum(k, 0));
            assert_eq!(active_lower_sum(k, k * (k - 1)), active_upper_sum(k, k * (k - 1)));
            for q in 0..=k * k + 3 {
                let (lo, hi) = (active_lower_sum(k, q), active_upper_sum(k, q));
                assert!(lo <= hi + 1e-15);
                assert!(kf / 2.0 <= lo && hi <= kf);
                assert!(active_lower_sum(k, q + 1) >= lo && active_upper_sum(k, q + 1) >= hi);
            }
        }
    }

    #[test]
    fn region_examples() {
        let half = DofPoint::new(vec![0.5; 3]);
        assert!(region_contains(&NetworkMatrix::full(3), &half));
        assert!(region_contains(&NetworkMatrix::identity(3), &DofPoint::new(vec![1.0; 3])));
        assert!(!region_contains(&NetworkMatrix::full(3), &DofPoint::new(vec![0.6, 0.6, 0.0])));
        assert!(!region_contains(&NetworkMatrix::identity(2), &DofPoint::new(vec![1.1, 0.0])));
    }

    #[test]
    fn full_matrix_rejects_sums_above_no_irs_bound() {
        let n = NetworkMatrix::full(3);
        for d in [[0.5, 0.5, 0.51], [1.0, 0.0, 0.6], [0.7, 0.4, 0.5]] {
            let p = DofPoint::new(d.to_vec());
            assert!(p.sum() > active_upper_sum(3, 0));
            assert!(!region_contains(&n, &p));
        }
    }

    #[test]
    fn timeshare_examples() {
        let full = NetworkMatrix::full(2);
        let id = NetworkMatrix::identity(2);
        let a = DofPoint::new(vec![0.5, 0.5]);
        let b = DofPoint::new(vec![1.0, 1.0]);
        let pts = vec![(full.clone(), a.clone()), (id.clone(), b.clone())];
        assert!(timeshare_contains(&pts[..1], &[1.0], &a).unwrap());
        assert_eq!(
            timeshare_contains(&pts[..1], &[1.0], &a).unwrap(),
            region_contains(&full, &a)
        );
        assert!(timeshare_contains(&pts, &[0.5, 0.5], &DofPoint::new(vec![0.75, 0.75])).unwrap());
        assert!(!timeshare_contains(&pts, &[0.5, 0.5], &DofPoint::new(vec![0.8, 0.7])).unwrap());
        assert!(matches!(
            timeshare_contains(&pts, &[0.5, 0.4], &a),
            Err(Error::WeightSum { .. })
        ));
    }

    #[test]
    fn outer_pair_examples() {
        let full = NetworkMatrix::full(3);
        assert_eq!(outer_pair_value(&full, 0, 1), 1.0);
        assert_eq!(outer_pair_value(&NetworkMatrix::identity(3), 0, 1), 2.0);
        let one = NetworkMatrix::with_zeros(3, &[(0, 1)]).unwrap();
        assert_eq!(outer_pair_value(&one, 0, 1), 1.5);
    }

    #[test]
    fn no_elements_gives_half_k() {
        let cfg = SystemConfig::reference(3, 0, 2.5e-7);
        let opts = EstimatorOptions::new(50, 3);
        assert_eq!(passive_lower_sum_mc(&cfg, &opts).unwrap().value, 1.5);
        let up = passive_upper_sum_mc(&cfg, &opts).unwrap();
        assert_eq!((up.value, up.ci_low, up.ci_high), (1.5, 1.5, 1.5));
    }

    #[test]
    fn vanishing_direct_links_reach_k() {
        let cfg = SystemConfig::reference(3, 12, 1e-20);
        let opts = EstimatorOptions::new(100, 4);
        assert_eq!(passive_lower_sum_mc(&cfg, &opts).unwrap().value, 3.0);
        assert_eq!(passive_upper_sum_mc(&cfg, &opts).unwrap().value, 3.0);
    }

    #[test]
    fn upper_dominates_lower_per_sample() {
        for q in [4, 8, 15, 40] {
            let cfg = SystemConfig::reference(3, q, 2.5e-7);
            for s in 0..60 {
                let ch = sample(&cfg, &RandomStream::new(6, s));
                let w = passive_lower_sample(&ch, BSearch::AllSubsets);
                let (m, exact) = passive_upper_sample(&ch);
                assert!(exact);
                assert!(m >= w_pattern_zero_count(3, w), "q={q} w={w} m={m}");
                assert!(passive_lower_sample(&ch, BSearch::Canonical) <= w);
            }
        }
    }

    #[test]
    fn greedy_upper_search_flagged() {
        let cfg = SystemConfig::reference(6, 30, 1e-20);
        let up = passive_upper_sum_mc(&cfg, &EstimatorOptions::new(3, 1)).unwrap();
        assert!(up.method_tag.ends_with("greedy"));
        // all 30 links are cancellable when direct gains vanish
        assert!((up.value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn eps_relaxed_endpoints_and_ordering() {
        let cfg = SystemConfig::reference(3, 36, 5e-10);
        let opts = EstimatorOptions::new(2000, 5);
        let vals: Vec<f64> = [0.9, 0.8, 0.7]
            .iter()
            .map(|&e| eps_relaxed_lower_sum_mc(&cfg, e, &opts).unwrap().value)
            .collect();
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        assert!(vals.iter().all(|v| (1.5..=3.0).contains(v)));
        let none = SystemConfig::reference(3, 9, 1e-20);
        let p = eps_relaxed_lower_sum_mc(&none, 0.9, &EstimatorOptions::new(200, 1)).unwrap();
        assert_eq!(p.value, 1.5);
        assert!(matches!(
            eps_relaxed_lower_sum_mc(&SystemConfig::reference(3, 8, 1.0), 0.9, &opts),
            Err(Error::TooFewElements { .. })
        ));
    }

    #[test]
    fn rho_limited_examples() {
        let mut cfg = SystemConfig::unit_variance(3, 3);
        cfg.snr_rho = 100.0;
        let opts = EstimatorOptions::new(500, 2);
        // threshold 100^0.99 is far above anything reachable with three elements
        let tiny = rho_limited_lower_sum_mc(&cfg, 0.01, &opts).unwrap();
        assert!(tiny.value < 0.05);
        let near_one = rho_limited_lower_sum_mc(&cfg, 0.999, &opts).unwrap();
        assert!(near_one.value <= 3.0 * 0.001 + 1e-12);
    }

    #[test]
    fn sinr_outage_shrinks_with_elements() {
        let mut cfg = SystemConfig::unit_variance(3, 12);
        cfg.snr_rho = 50.0;
        let opts = EstimatorOptions::new(3000, 8);
        let m = 0.1 * cfg.snr_rho / cfg.noise_n0;
        let small = sinr_outage_mc(&cfg, m, &opts).unwrap().mean;
        let large = sinr_outage_mc(&cfg.clone().with_q(96), m, &opts).unwrap().mean;
        assert!(large < small);
    }
}
