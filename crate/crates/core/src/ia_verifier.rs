//! Interference-alignment beamformers over T symbol extensions and a
//! rank-based decodability check.
//!
//! Every present cross link `(i, j)` contributes a diagonal T×T channel
//! `H̃^[ji]`. A beamformer column is `∏_l (H̃_l)^{α_l} · w` with `w` all ones and
//! the exponent tuple `α` ranging over `1..=cap` per link.

use num_complex::Complex64;
use num_rational::Ratio;

use crate::channel_model::{sample, SystemConfig};
use crate::dof_bounds::DofPoint;
use crate::error::{Error, Result};
use crate::irs_solvers::{effective_channel, solve_active};
use crate::mc_engine::RandomStream;
use crate::network_topology::NetworkMatrix;
use crate::numerics::{rank_of, ComplexMatrix, DEFAULT_RANK_TOL};

pub const DEFAULT_BUDGET: usize = 4096;
pub const MAX_USERS: usize = 4;
pub const MAX_LINK_EXPONENT: usize = 6;
/// Relative residual allowed when checking that interference lies in the
/// enlarged subspace.
pub const CONTAINMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct IaConfig {
    pub k: usize,
    pub network: NetworkMatrix,
    /// Auxiliary construction size.
    pub n: usize,
    /// Per-user exponent fractions when the caps are uniform per user.
    pub t: Option<Vec<Ratio<u64>>>,
    /// `caps[i][l]`: largest exponent of link `l` in user `i`'s beamformer.
    pub caps: Vec<Vec<usize>>,
    /// Number of symbol extensions T.
    pub slots: usize,
    /// Largest T or column count built numerically.
    pub budget: usize,
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    base.checked_pow(exp as u32).ok_or_else(|| Error::SizeOverflow {
        what: "dimension".into(),
        size: usize::MAX,
        budget: usize::MAX,
    })
}

impl IaConfig {
    fn check_desk_scale(network: &NetworkMatrix) -> Result<()> {
        let k = network.k();
        if k > MAX_USERS {
            return Err(Error::SizeOverflow {
                what: "users".into(),
                size: k,
                budget: MAX_USERS,
            });
        }
        let links = network.present_cross_links().len();
        if links > MAX_LINK_EXPONENT {
            return Err(Error::SizeOverflow {
                what: "present cross links".into(),
                size: links,
                budget: MAX_LINK_EXPONENT,
            });
        }
        Ok(())
    }

    /// Uniform caps `t_i·n` on every link and `T = (n + 1)^{#links}`.
    pub fn generic(network: NetworkMatrix, n: usize, t: Vec<Ratio<u64>>) -> Result<Self> {
        Self::check_desk_scale(&network)?;
        let k = network.k();
        if t.len() != k {
            return Err(Error::Config(format!("{} exponent fractions for {k} users", t.len())));
        }
        let links = network.present_cross_links().len();
        let mut caps = Vec::with_capacity(k);
        for (i, ti) in t.iter().enumerate() {
            if *ti > Ratio::from_integer(1) {
                return Err(Error::Config(format!("t[{i}] = {ti} exceeds 1")));
            }
            let scaled = *ti * Ratio::from_integer(n as u64);
            if !scaled.is_integer() {
                return Err(Error::Config(format!("t[{i}]·n = {scaled} is not an integer")));
            }
            caps.push(vec![scaled.to_integer() as usize; links]);
        }
        Ok(Self {
            k,
            network,
            n,
            t: Some(t),
            caps,
            slots: checked_pow(n + 1, links)?,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Four users, the fourth isolated by six cancelled links. Users 1–3 use
    /// cap `n` on five links and `n/2` on the link from transmitter 3 to
    /// receiver 2; user 4 uses `n` everywhere.
    pub fn example1(n: usize) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::Config(format!("n must be a positive even number, got {n}")));
        }
        let network: NetworkMatrix = "1110\n1110\n1110\n0001".parse()?;
        let links = network.present_cross_links();
        let half_link = links
            .iter()
            .position(|&l| l == (2, 1))
            .expect("link 3 → 2 is present");
        let mut shared = vec![n; links.len()];
        shared[half_link] = n / 2;
        let caps = vec![shared.clone(), shared.clone(), shared, vec![n; links.len()]];
        let slots = checked_pow(n, 6)? / 2 + checked_pow(n + 1, 5)? * (n / 2 + 1);
        Ok(Self {
            k: 4,
            network,
            n,
            t: None,
            caps,
            slots,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn links(&self) -> Vec<(usize, usize)> {
        self.network.present_cross_links()
    }

    /// Users whose signal reaches receiver `j`.
    pub fn interferers(&self, j: usize) -> Vec<usize> {
        (0..self.k).filter(|&i| i != j && self.network.get(i, j)).collect()
    }

    pub fn message_dim(&self, j: usize) -> usize {
        self.caps[j].iter().product()
    }

    /// Per-link exponent limits of the enlarged interference subspace at `j`.
    pub fn enlarged_caps(&self, j: usize) -> Option<Vec<usize>> {
        let from = self.interferers(j);
        if from.is_empty() {
            return None;
        }
        Some(
            (0..self.links().len())
                .map(|l| from.iter().map(|&i| self.caps[i][l]).max().unwrap_or(0) + 1)
                .collect(),
        )
    }

    pub fn interference_dim(&self, j: usize) -> usize {
        self.enlarged_caps(j).map_or(0, |c| c.iter().product())
    }

    fn check_budget(&self) -> Result<()> {
        if self.slots > self.budget {
            return Err(Error::SizeOverflow {
                what: "symbol extensions".into(),
                size: self.slots,
                budget: self.budget,
            });
        }
        for j in 0..self.k {
            let cols = self.message_dim(j) + self.interference_dim(j);
            if cols > self.budget {
                return Err(Error::SizeOverflow {
                    what: "columns".into(),
                    size: cols,
                    budget: self.budget,
                });
            }
        }
        Ok(())
    }
}

/// Effective channels over T slots; `gain(j, i)[t]` is `H̃^[ji](t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveStack {
    k: usize,
    gains: Vec<Vec<Complex64>>,
}

impl EffectiveStack {
    pub fn from_gains(k: usize, gains: Vec<Vec<Complex64>>) -> Result<Self> {
        let slots = gains.first().map_or(0, Vec::len);
        if gains.len() != k * k || gains.iter().any(|g| g.len() != slots) {
            return Err(Error::Dimension("effective stack needs K² equal-length gain vectors".into()));
        }
        Ok(Self { k, gains })
    }

    pub fn gain(&self, j: usize, i: usize) -> &[Complex64] {
        &self.gains[j * self.k + i]
    }

    pub fn slots(&self) -> usize {
        self.gains.first().map_or(0, Vec::len)
    }

    /// Relabels users through `perm` (old index → new index).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let k = self.k;
        let mut gains = vec![Vec::new(); k * k];
        for j in 0..k {
            for i in 0..k {
                gains[perm[j] * k + perm[i]] = self.gain(j, i).to_vec();
            }
        }
        Self { k, gains }
    }
}

/// Draws T slots of unit-variance channels and realizes `cfg.network` with an
/// active surface in each slot. Slots whose cancellation system is singular
/// are redrawn from a later substream.
pub fn effective_stack(cfg: &IaConfig, seed: u64) -> Result<EffectiveStack> {
    cfg.check_budget()?;
    let k = cfg.k;
    let q = cfg.network.cancellation_set().len();
    let sys = SystemConfig::unit_variance(k, q);
    let mut gains = vec![Vec::with_capacity(cfg.slots); k * k];
    for t in 0..cfg.slots {
        let mut attempt = 0u64;
        let h = loop {
            let stream = RandomStream::new(seed, t as u64 + attempt * cfg.slots as u64);
            let ch = sample(&sys, &stream);
            match solve_active(&ch, &cfg.network) {
                Ok(tau) => break effective_channel(&ch, &tau.tau),
                Err(Error::SingularMatrix { .. }) if attempt < 16 => attempt += 1,
                Err(e) => return Err(e),
            }
        };
        for j in 0..k {
            for i in 0..k {
                gains[j * k + i].push(h[(j, i)]);
            }
        }
    }
    Ok(EffectiveStack { k, gains })
}

/// Columns `∏_l X_l^{e_l} · w` for every tuple with `e_l ∈ 1..=hi_l`, in
/// lexicographic order, each scaled to unit norm.
fn monomial_columns(links: &[&[Complex64]], hi: &[usize]) -> Vec<Vec<Complex64>> {
    let slots = links.first().map_or(0, |l| l.len());
    let powers: Vec<Vec<Vec<Complex64>>> = links
        .iter()
        .zip(hi)
        .map(|(x, &h)| {
            let mut p = vec![vec![Complex64::new(1.0, 0.0); slots]];
            for e in 1..=h {
                let next: Vec<Complex64> = p[e - 1].iter().zip(x.iter()).map(|(a, b)| a * b).collect();
                p.push(next);
            }
            p
        })
        .collect();
    let mut out = Vec::with_capacity(hi.iter().product());
    for_each_tuple(hi, |exps| {
        let mut col = vec![Complex64::new(1.0, 0.0); slots];
        for (l, &e) in exps.iter().enumerate() {
            for (c, p) in col.iter_mut().zip(&powers[l][e]) {
                *c *= p;
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            col.iter_mut().for_each(|z| *z /= norm);
        }
        out.push(col);
    });
    out
}

fn columns_to_matrix(cols: &[Vec<Complex64>], rows: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

fn link_gains<'a>(cfg: &IaConfig, heff: &'a EffectiveStack) -> Vec<&'a [Complex64]> {
    cfg.links().iter().map(|&(i, j)| heff.gain(j, i)).collect()
}

/// Beamformer `Ṽ^[i]` for every user: T × ∏ caps[i], columns unit-normalized.
pub fn build_beamformers(cfg: &IaConfig, heff: &EffectiveStack) -> Result<Vec<ComplexMatrix>> {
    cfg.check_budget()?;
    if heff.slots() != cfg.slots || heff.k != cfg.k {
        return Err(Error::Dimension(format!(
            "stack has {} slots for {} users, config expects {} and {}",
            heff.slots(),
            heff.k,
            cfg.slots,
            cfg.k
        )));
    }
    let links = link_gains(cfg, heff);
    Ok((0..cfg.k)
        .map(|i| columns_to_matrix(&monomial_columns(&links, &cfg.caps[i]), cfg.slots))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSource {
    /// Ranks computed from sampled channels.
    Numeric,
    /// Dimensions counted, generic full rank assumed.
    Structural,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverReport {
    pub dim_message: usize,
    pub dim_interference: usize,
    pub joint_rank: usize,
    pub decodable: bool,
    /// Worst relative residual of actual interference outside the enlarged
    /// subspace (0 when nothing interferes or ranks are counted).
    pub containment_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceReport {
    pub receivers: Vec<ReceiverReport>,
    pub slots: usize,
    pub source: RankSource,
}

impl SubspaceReport {
    pub fn all_decodable(&self) -> bool {
        self.receivers.iter().all(|r| r.decodable)
    }
}

fn scale_rows(m: &mut ComplexMatrix) {
    for r in 0..m.rows() {
        let norm = m.row(r).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            for c in 0..m.cols() {
                m[(r, c)] /= norm;
            }
        }
    }
}

fn normalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for c in 0..m.cols() {
        let norm = (0..m.rows()).map(|r| m[(r, c)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            for r in 0..m.rows() {
                out[(r, c)] /= norm;
            }
        }
    }
    out
}

/// Alternating column and row normalization. Both are diagonal scalings, so
/// the rank is unchanged; a single pass leaves σ_min/σ_max near 1e-16 on
/// heavy-tailed effective channels, thirty bring it to about 1e-3.
pub const EQUILIBRATION_SWEEPS: usize = 30;

fn equilibrate(m: &mut ComplexMatrix) {
    for _ in 0..EQUILIBRATION_SWEEPS {
        *m = normalize_columns(m);
        scale_rows(m);
    }
}

/// Position of exponent tuple `e` (entries from 1) in lexicographic order
/// with per-coordinate limits `hi`.
fn tuple_index(e: &[usize], hi: &[usize]) -> usize {
    e.iter().zip(hi).fold(0, |acc, (&x, &h)| acc * h + (x - 1))
}

fn for_each_tuple(hi: &[usize], mut f: impl FnMut(&[usize])) {
    if hi.iter().any(|&h| h == 0) {
        return;
    }
    let mut e = vec![1; hi.len()];
    loop {
        f(&e);
        let mut pos = hi.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if e[pos] < hi[pos] {
                e[pos] += 1;
                break;
            }
            e[pos] = 1;
        }
    }
}

/// Worst relative distance from a column of `H̃^[ji]Ṽ^[i]` to the enlarged
/// column whose exponent tuple is its own shifted by one on link `(i, j)`.
/// The distance to one member of the span bounds the projection residual from
/// above, so a small value certifies containment.
fn containment_residual(
    cfg: &IaConfig,
    heff: &EffectiveStack,
    beamformers: &[ComplexMatrix],
    j: usize,
    enlarged: &[Vec<Complex64>],
    ecaps: &[usize],
) -> f64 {
    let links = cfg.links();
    let mut worst: f64 = 0.0;
    for i in cfg.interferers(j) {
        let l = links.iter().position(|&p| p == (i, j)).expect("interferer link present");
        let g = heff.gain(j, i);
        let v = &beamformers[i];
        let mut col = 0;
        for_each_tuple(&cfg.caps[i], |alpha| {
            let mut beta = alpha.to_vec();
            beta[l] += 1;
            let target = &enlarged[tuple_index(&beta, ecaps)];
            let x: Vec<Complex64> = (0..cfg.slots).map(|r| g[r] * v[(r, col)]).collect();
            let xn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let tn = target.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let dot: Complex64 = target.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            let c = dot / tn;
            let resid = x.iter().zip(target).map(|(b, a)| (b - c * a).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(resid / xn.max(f64::MIN_POSITIVE));
            col += 1;
        });
    }
    worst
}

/// Numerical decodability check at every receiver.
///
/// The interference subspace is the full enlarged set of monomials with
/// per-link exponents `1..=max cap + 1` over the interferers. Message columns
/// and that set are tested for joint full column rank after alternately
/// scaling columns and rows to unit norm.
pub fn certify(cfg: &IaConfig, heff: &EffectiveStack, beamformers: &[ComplexMatrix]) -> Result<SubspaceReport> {
    cfg.check_budget()?;
    let t = cfg.slots;
    let links = link_gains(cfg, heff);
    let mut receivers = Vec::with_capacity(cfg.k);
    for j in 0..cfg.k {
        let v = &beamformers[j];
        let own = heff.gain(j, j);
        let message = ComplexMatrix::from_fn(t, v.cols(), |r, c| own[r] * v[(r, c)]);
        let ecaps = cfg.enlarged_caps(j).unwrap_or_default();
        let enlarged = if ecaps.is_empty() {
            Vec::new()
        } else {
            monomial_columns(&links, &ecaps)
        };
        let dim_message = v.cols();
        let dim_interference = enlarged.len();
        let mut joint = ComplexMatrix::from_fn(t, dim_message + dim_interference, |r, c| {
            if c < dim_message {
                message[(r, c)]
            } else {
                enlarged[c - dim_message][r]
            }
        });
        equilibrate(&mut joint);
        let joint_rank = rank_of(&joint, DEFAULT_RANK_TOL).rank;

        let residual = if dim_interference > 0 {
            containment_residual(cfg, heff, beamformers, j, &enlarged, &ecaps)
        } else {
            0.0
        };
        let total = dim_message + dim_interference;
        receivers.push(ReceiverReport {
            dim_message,
            dim_interference,
            joint_rank,
            decodable: joint_rank == total && total <= t,
            containment_residual: residual,
        });
    }
    Ok(SubspaceReport {
        receivers,
        slots: t,
        source: RankSource::Numeric,
    })
}

impl std::fmt::Display for SubspaceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "slots = {}", self.slots)?;
        let source = match self.source {
            RankSource::Numeric => "numeric",
            RankSource::Structural => "structural",
        };
        writeln!(f, "rank_source = {source}")?;
        for (j, r) in self.receivers.iter().enumerate() {
            writeln!(
                f,
                "receiver {}: dim_message = {}, dim_interference = {}, joint_rank = {}, decodable = {}, containment_residual = {:.3e}",
                j + 1,
                r.dim_message,
                r.dim_interference,
                r.joint_rank,
                r.decodable,
                r.containment_residual
            )?;
        }
        Ok(())
    }
}

/// Counted dimensions assuming generic full rank; used beyond the budget.
pub fn certify_structural(cfg: &IaConfig) -> SubspaceReport {
    let receivers = (0..cfg.k)
        .map(|j| {
            let (m, a) = (cfg.message_dim(j), cfg.interference_dim(j));
            ReceiverReport {
                dim_message: m,
                dim_interference: a,
                joint_rank: m + a,
                decodable: m + a <= cfg.slots,
                containment_residual: 0.0,
            }
        })
        .collect();
    SubspaceReport {
        receivers,
        slots: cfg.slots,
        source: RankSource::Structural,
    }
}

/// Numeric certification when within budget, counted dimensions otherwise.
pub fn run_check(cfg: &IaConfig, seed: u64) -> Result<SubspaceReport> {
    match cfg.check_budget() {
        Ok(()) => {
            let heff = effective_stack(cfg, seed)?;
            let v = build_beamformers(cfg, &heff)?;
            certify(cfg, &heff, &v)
        }
        Err(Error::SizeOverflow { .. }) => Ok(certify_structural(cfg)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AchievedDof {
    pub exact: Vec<Ratio<u64>>,
    pub point: DofPoint,
}

/// `d_j = dim_message_j / T` for a decodable report.
pub fn achieved_dof(report: &SubspaceReport, slots: usize) -> Result<AchievedDof> {
    if slots == 0 {
        return Err(Error::Dimension("T must be positive".into()));
    }
    let mut exact = Vec::with_capacity(report.receivers.len());
    for (j, r) in report.receivers.iter().enumerate() {
        if !r.decodable {
            return Err(Error::NotDecodable { receiver: j });
        }
        exact.push(Ratio::new(r.dim_message as u64, slots as u64));
    }
    let point = DofPoint::new(exact.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect());
    Ok(AchievedDof { exact, point })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Ratio<u64> {
        Ratio::new(1, 2)
    }

    #[test]
    fn example1_dimensions() {
        let cfg = IaConfig::example1(2).unwrap();
        assert_eq!(cfg.slots, 518);
        assert_eq!((0..4).map(|j| cfg.message_dim(j)).collect::<Vec<_>>(), vec![32, 32, 32, 64]);
        assert_eq!((0..4).map(|j| cfg.interference_dim(j)).collect::<Vec<_>>(), vec![486, 486, 486, 0]);
        assert_eq!(IaConfig::example1(4).unwrap().slots, 11423);
        assert!(IaConfig::example1(3).is_err());
    }

    #[test]
    fn single_column_when_caps_are_one() {
        let cfg = IaConfig::generic(NetworkMatrix::full(2), 2, vec![half(), half()]).unwrap();
        let heff = effective_stack(&cfg, 1).unwrap();
        let v = build_beamformers(&cfg, &heff).unwrap();
        assert_eq!(v[0].cols(), 1);
        // ∏ H̃ · w, normalized
        let raw: Vec<Complex64> = (0..cfg.slots).map(|t| heff.gain(1, 0)[t] * heff.gain(0, 1)[t]).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for t in 0..cfg.slots {
            assert!((v[0][(t, 0)] - raw[t] / norm).norm() < 1e-12);
        }
    }

    #[test]
    fn column_count_is_cap_power() {
        let t = vec![Ratio::new(1, 2), Ratio::new(1, 1), Ratio::new(1, 2)];
        let net = NetworkMatrix::with_zeros(3, &[(0, 1), (1, 0), (2, 0), (0, 2)]).unwrap();
        let cfg = IaConfig::generic(net, 2, t).unwrap();
        let heff = effective_stack(&cfg, 3).unwrap();
        let v = build_beamformers(&cfg, &heff).unwrap();
        assert_eq!(v.iter().map(ComplexMatrix::cols).collect::<Vec<_>>(), vec![1, 4, 1]);
    }

    #[test]
    fn rejects_fractional_caps_and_large_instances() {
        assert!(IaConfig::generic(NetworkMatrix::full(2), 3, vec![half(), half()]).is_err());
        assert!(matches!(
            IaConfig::generic(NetworkMatrix::full(4), 2, vec![half(); 4]),
            Err(Error::SizeOverflow { .. })
        ));
        let big = IaConfig::example1(4).unwrap();
        assert!(matches!(effective_stack(&big, 1), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn two_user_full_matrix_decodable() {
        let cfg = IaConfig::generic(NetworkMatrix::full(2), 4, vec![half(), half()]).unwrap();
        for seed in 0..20 {
            let rep = run_check(&cfg, seed).unwrap();
            assert_eq!(rep.source, RankSource::Numeric);
            assert!(rep.all_decodable(), "seed {seed}: {rep:?}");
            for r in &rep.receivers {
                assert_eq!((r.dim_message, r.dim_interference), (4, 9));
                assert!(r.containment_residual <= CONTAINMENT_TOL);
            }
        }
    }

    #[test]
    fn duplicate_column_breaks_decodability() {
        let cfg = IaConfig::generic(NetworkMatrix::full(2), 4, vec![half(), half()]).unwrap();
        let heff = effective_stack(&cfg, 2).unwrap();
        let mut v = build_beamformers(&cfg, &heff).unwrap();
        let dup = v[0].column(0);
        for (r, z) in dup.iter().enumerate() {
            v[0][(r, 1)] = *z;
        }
        let rep = certify(&cfg, &heff, &v).unwrap();
        assert!(rep.receivers[0].joint_rank < rep.receivers[0].dim_message + rep.receivers[0].dim_interference);
        assert!(!rep.receivers[0].decodable);
        assert!(matches!(achieved_dof(&rep, cfg.slots), Err(Error::NotDecodable { receiver: 0 })));
    }

    #[test]
    fn permuting_users_relabels_report() {
        let net = NetworkMatrix::with_zeros(3, &[(0, 1), (2, 1)]).unwrap();
        let t = vec![half(), Ratio::new(1, 1), half()];
        let cfg = IaConfig::generic(net.clone(), 2, t.clone()).unwrap();
        let heff = effective_stack(&cfg, 4).unwrap();
        let rep = certify(&cfg, &heff, &build_beamformers(&cfg, &heff).unwrap()).unwrap();
        let perm = [2, 0, 1];
        let mut pt = vec![half(); 3];
        for (old, &new) in perm.iter().enumerate() {
            pt[new] = t[old];
        }
        let pcfg = IaConfig::generic(net.permuted(&perm), 2, pt).unwrap();
        let pheff = heff.permuted(&perm);
        let prep = certify(&pcfg, &pheff, &build_beamformers(&pcfg, &pheff).unwrap()).unwrap();
        for (old, &new) in perm.iter().enumerate() {
            let (a, b) = (&rep.receivers[old], &prep.receivers[new]);
            assert_eq!((a.dim_message, a.dim_interference, a.joint_rank), (b.dim_message, b.dim_interference, b.joint_rank));
            assert_eq!(a.decodable, b.decodable);
        }
    }

    #[test]
    fn interference_free_user_gets_full_dof() {
        let report = SubspaceReport {
            receivers: vec![ReceiverReport {
                dim_message: 7,
                dim_interference: 0,
                joint_rank: 7,
                decodable: true,
                containment_residual: 0.0,
            }],
            slots: 7,
            source: RankSource::Numeric,
        };
        let d = achieved_dof(&report, 7).unwrap();
        assert_eq!(d.exact, vec![Ratio::from_integer(1)]);
        assert_eq!(d.point.d, vec![1.0]);
    }

    #[test]
    fn structural_example1_trend() {
        let mut prev = vec![0.0; 4];
        for n in [2, 4, 8] {
            let cfg = IaConfig::example1(n).unwrap();
            let rep = certify_structural(&cfg);
            assert!(rep.all_decodable());
            let d = achieved_dof(&rep, cfg.slots).unwrap().point.d;
            assert!(d[3] > prev[3] && d[0] > prev[0]);
            assert!(d[0] < 0.5 && d[3] < 1.0);
            prev = d;
        }
    }
}

#[cfg(test)]
mod example1_numeric {
    use super::*;

    #[test]
    fn example1_n2_certifies() {
        let cfg = IaConfig::example1(2).unwrap();
        let rep = run_check(&cfg, 11).unwrap();
        assert_eq!(rep.source, RankSource::Numeric);
        let dims: Vec<_> = rep.receivers.iter().map(|r| r.dim_message).collect();
        assert_eq!(dims, vec![32, 32, 32, 64]);
        assert!(rep.all_decodable());
        assert_eq!(rep.receivers[0].joint_rank, 518);
        for r in &rep.receivers {
            assert!(r.containment_residual <= CONTAINMENT_TOL);
        }
    }
}
