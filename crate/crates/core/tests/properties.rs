use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use irsdof::channel_model::{sample, SystemConfig};
use irsdof::cli_reports::{csv_string, Command, RunRequest};
use irsdof::dof_bounds::{
    active_lower_sum, active_upper_sum, passive_lower_sample, passive_upper_sample, region_contains, BSearch, DofPoint,
};
use irsdof::irs_solvers::{
    effective_channel, eps_relaxed_lambda, linf_feasible_unit, lossless_phase_align, pinv_feasible, solve_active,
    LambdaStrategy,
};
use irsdof::mc_engine::{McEngine, RandomStream};
use irsdof::network_topology::{w_decomposition, w_pattern_zero_count, NetworkMatrix};
use irsdof::numerics::{min_linf_feasible, min_norm_solve, rank_of, ComplexMatrix, DEFAULT_RANK_TOL};
use irsdof::Complex64;

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn random_system(seed: u64, rows: usize, cols: usize, scale: f64) -> (ComplexMatrix, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(&mut rng));
    let b = (0..rows).map(|_| gaussian(&mut rng) * scale).collect();
    (a, b)
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn network_from_bits(k: usize, mask: u32) -> NetworkMatrix {
    let bits = (0..k * k)
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            i == j || mask >> idx & 1 == 1
        })
        .collect();
    NetworkMatrix::from_bits(k, bits).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn min_norm_residual_small(seed in any::<u64>(), rows in 1usize..6, extra in 0usize..6) {
        let (a, b) = random_system(seed, rows, rows + extra, 1.0);
        let x = min_norm_solve(&a, &b).unwrap();
        let ax = a.mul_vec(&x);
        let scale = a.frobenius_norm() * max_abs(&x) + max_abs(&b);
        for (l, r) in ax.iter().zip(&b) {
            prop_assert!((l - r).norm() <= 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn linf_monotone_in_cap(seed in any::<u64>(), rows in 1usize..4, extra in 1usize..6, cap in 0.05f64..2.0, bump in 0.0f64..1.0) {
        let (a, b) = random_system(seed, rows, rows + extra, 0.5);
        let low = min_linf_feasible(&a, &b, cap).unwrap();
        let high = min_linf_feasible(&a, &b, cap + bump).unwrap();
        prop_assert!(!low.feasible || high.feasible);
    }

    #[test]
    fn pinv_inside_disc_implies_linf_feasible(seed in any::<u64>(), rows in 1usize..4, extra in 0usize..6, scale in 0.05f64..1.0) {
        let (a, b) = random_system(seed, rows, rows + extra, scale);
        let x = min_norm_solve(&a, &b).unwrap();
        let r = min_linf_feasible(&a, &b, 1.0).unwrap();
        if max_abs(&x) <= 1.0 {
            prop_assert!(r.feasible);
        }
        prop_assert!(r.t_star <= max_abs(&x) + 1e-4);
    }

    #[test]
    fn rank_invariant_under_permutation_and_phase(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7, dup in any::<bool>(), phase in 0.0f64..6.28) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(&mut rng));
        if dup && cols > 1 {
            for r in 0..rows {
                a[(r, cols - 1)] = a[(r, 0)];
            }
        }
        let base = rank_of(&a, DEFAULT_RANK_TOL).rank;
        let mut b = a.clone();
        b.swap_rows(0, rows - 1);
        b.swap_columns(0, cols - 1);
        let unit = Complex64::from_polar(1.0, phase);
        for r in 0..rows {
            b[(r, 0)] *= unit;
        }
        prop_assert_eq!(rank_of(&b, DEFAULT_RANK_TOL).rank, base);
    }

    #[test]
    fn sample_independent_of_workers(seed in any::<u64>(), index in 0u64..64) {
        let cfg = SystemConfig::reference(3, 5, 1e-3);
        let direct = sample(&cfg, &RandomStream::new(seed, index));
        let via = McEngine::new(3).map(64, seed, |s| sample(&cfg, s));
        prop_assert_eq!(&via[index as usize], &direct);
    }

    #[test]
    fn w_decomposition_needs_enough_zeros(k in 2usize..5, mask in any::<u32>()) {
        let n = network_from_bits(k, mask);
        let w = w_decomposition(&n);
        if w > 0 {
            prop_assert!(n.zero_count() >= w_pattern_zero_count(k, w));
        }
    }

    #[test]
    fn removing_link_never_lowers_w(k in 2usize..5, mask in any::<u32>(), pick in any::<usize>()) {
        let n = network_from_bits(k, mask);
        let present = n.present_cross_links();
        prop_assume!(!present.is_empty());
        let (i, j) = present[pick % present.len()];
        let fewer = network_from_bits(k, mask & !(1 << (i * k + j)));
        prop_assert!(w_decomposition(&fewer) >= w_decomposition(&n));
    }

    #[test]
    fn active_solve_zeroes_exactly_targets(seed in any::<u64>(), k in 2usize..4, mask in any::<u32>()) {
        let n = network_from_bits(k, mask);
        let q = n.zero_count().max(1) + 2;
        let ch = sample(&SystemConfig::unit_variance(k, q), &RandomStream::new(seed, 0));
        let tau = solve_active(&ch, &n).unwrap();
        let h = effective_channel(&ch, &tau.tau);
        let scale = ch.direct.max_abs();
        for i in 0..k {
            for j in 0..k {
                let g = h[(j, i)].norm();
                if n.get(i, j) {
                    prop_assert!(g > 1e-8 * scale);
                } else {
                    prop_assert!(g <= 1e-8 * scale);
                }
            }
        }
    }

    #[test]
    fn pinv_feasible_implies_linf_feasible(seed in any::<u64>(), mask in any::<u32>(), q in 2usize..12, hhat in 1e-9f64..1e-3) {
        let n = network_from_bits(3, mask);
        prop_assume!(n.zero_count() <= q);
        let ch = sample(&SystemConfig::reference(3, q, hhat), &RandomStream::new(seed, 1));
        let set = n.cancellation_set();
        if pinv_feasible(&ch, &set).unwrap() {
            prop_assert!(linf_feasible_unit(&ch, &set).unwrap());
        }
    }

    #[test]
    fn all_subsets_dominates_blocks(seed in any::<u64>(), eps in 0.3f64..0.99) {
        let ch = sample(&SystemConfig::reference(2, 8, 1e-9), &RandomStream::new(seed, 2));
        let (blocks, _) = eps_relaxed_lambda(&ch, eps, LambdaStrategy::DisjointBlocks).unwrap();
        let (all, _) = eps_relaxed_lambda(&ch, eps, LambdaStrategy::AllSubsets).unwrap();
        prop_assert!(!blocks || all);
    }

    #[test]
    fn phase_align_unit_or_zero(seed in any::<u64>(), k in 1usize..5, q in 0usize..20) {
        let ch = sample(&SystemConfig::unit_variance(k, q), &RandomStream::new(seed, 3));
        let tau = lossless_phase_align(&ch);
        for z in &tau.tau {
            let m = z.norm();
            prop_assert!(m == 0.0 || (m - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_forms_ordered_and_bounded(k in 2usize..12, q in 0usize..200) {
        let (lo, hi) = (active_lower_sum(k, q), active_upper_sum(k, q));
        let kf = k as f64;
        prop_assert!(lo <= hi);
        prop_assert!(kf / 2.0 <= lo && hi <= kf);
        prop_assert!(active_lower_sum(k, q + 1) >= lo);
        prop_assert!(active_upper_sum(k, q + 1) >= hi);
        if q == 0 || q >= k * (k - 1) {
            prop_assert_eq!(lo, hi);
        }
    }

    #[test]
    fn per_sample_dominance(seed in any::<u64>(), q in 0usize..20) {
        let ch = sample(&SystemConfig::reference(3, q, 2.5e-7), &RandomStream::new(seed, 4));
        let lower = (3.0 + passive_lower_sample(&ch, BSearch::AllSubsets) as f64) / 2.0;
        let upper = 1.5 + passive_upper_sample(&ch).0 as f64 / 4.0;
        prop_assert!(lower <= upper && upper <= 3.0);
    }

    #[test]
    fn full_matrix_region_rejects_large_sums(k in 2usize..6, d in prop::collection::vec(0.0f64..1.0, 5)) {
        let point = DofPoint::new(d[..k].to_vec());
        if point.sum() > active_upper_sum(k, 0) + 1e-12 {
            prop_assert!(!region_contains(&NetworkMatrix::full(k), &point));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fig_csv_reruns_identical(seed in any::<u64>(), samples in 1usize..20) {
        let dir = tempfile::tempdir().unwrap();
        let run = |workers: usize| {
            let request = RunRequest::new(Command::Fig2, dir.path())
                .set("q_grid", "0,6,20")
                .set("samples", samples)
                .set("seed", seed)
                .set("workers", workers);
            let s = request.resolve().unwrap();
            irsdof::cli_reports::fig2_curves(&s)
                .unwrap()
                .iter()
                .map(|c| csv_string(&c.points).unwrap())
                .collect::<Vec<_>>()
        };
        let first = run(1);
        prop_assert_eq!(&first, &run(1));
        prop_assert_eq!(&first, &run(4));
        for text in &first {
            for line in text.lines().skip(1) {
                let fields: Vec<&str> = line.split(',').collect();
                prop_assert_eq!(fields.len(), 8);
                prop_assert!(!fields[5].is_empty());
            }
        }
    }
}

// 2000 meta-trials put the standard error of the coverage near 0.5 points.
#[test]
fn wilson_coverage_over_many_trials() {
    let engine = McEngine::new(1);
    for (idx, p) in [0.05, 0.5, 0.95].into_iter().enumerate() {
        let covered = (0..2000u64)
            .filter(|&t| {
                let r = engine
                    .estimate_proportion(|s| s.rng().random::<f64>() < p, 500, 31_000 * (idx as u64 + 1) + t)
                    .unwrap();
                r.ci_low <= p && p <= r.ci_high
            })
            .count();
        let rate = covered as f64 / 2000.0;
        assert!(rate >= 0.93, "p = {p}: coverage {rate}");
    }
}
