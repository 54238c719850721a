use nalgebra::DVector;
use num_complex::Complex64;

use super::{max_abs, norm2, ComplexMatrix, RowFactor};
use crate::error::{Error, Result};

const MAX_PROJECTION_STEPS: usize = 2000;
const DISPLACEMENT_TOL: f64 = 1e-8;
const T_STAR_TOL: f64 = 1e-4;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct LinfResult {
    pub feasible: bool,
    pub t_star: f64,
    pub witness: Vec<Complex64>,
}

struct AffineSet<'a> {
    factor: &'a RowFactor,
    coords: DVector<Complex64>,
}

fn clip(x: &[Complex64], t: f64) -> Vec<Complex64> {
    x.iter()
        .map(|&z| {
            let r = z.norm();
            if r > t {
                z * (t / r)
            } else {
                z
            }
        })
        .collect()
}

/// Slack allowed on `max|y|` when accepting an affine point as inside the disc.
fn accept_slack(t: f64) -> f64 {
    (1e-6 * t).min(0.5 * T_STAR_TOL)
}

fn excess(x: &[Complex64], t: f64) -> f64 {
    x.iter().map(|z| (z.norm() - t).max(0.0).powi(2)).sum()
}

impl AffineSet<'_> {
    /// Alternating projections between the affine set and the radius-`t`
    /// polydisc, with Nesterov momentum and a restart whenever the squared
    /// distance to the disc grows. Returns a point of the affine set inside
    /// the (slightly enlarged) disc, or `None` when the iterates settle with a
    /// gap or the step budget runs out.
    fn meets_polydisc(&self, t: f64, start: &[Complex64]) -> Option<Vec<Complex64>> {
        let slack = accept_slack(t);
        let mut prev = self.factor.project(&clip(start, t), &self.coords);
        if max_abs(&prev) <= t + slack {
            return Some(prev);
        }
        let mut y = prev.clone();
        let mut momentum_step = 1.0;
        let mut prev_excess = f64::INFINITY;
        for _ in 0..MAX_PROJECTION_STEPS {
            let x = self.factor.project(&clip(&y, t), &self.coords);
            if max_abs(&x) <= t + slack {
                return Some(x);
            }
            let moved: Vec<Complex64> = x.iter().zip(&prev).map(|(a, b)| a - b).collect();
            let err = excess(&x, t);
            if err > prev_excess {
                momentum_step = 1.0;
                y = x.clone();
            } else {
                let beta = (momentum_step - 1.0) / (momentum_step + 2.0);
                y = x.iter().zip(&moved).map(|(a, d)| a + d * beta).collect();
                momentum_step += 1.0;
            }
            prev_excess = err;
            prev = x;
            if norm2(&moved) < DISPLACEMENT_TOL * t.max(f64::MIN_POSITIVE) {
                return None;
            }
        }
        None
    }
}

fn row_lower_bound(a: &ComplexMatrix, b: &[Complex64]) -> f64 {
    (0..a.rows())
        .map(|r| {
            let l1: f64 = a.row(r).iter().map(|z| z.norm()).sum();
            if l1 > 0.0 {
                b[r].norm() / l1
            } else if b[r].norm() > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

fn check_shape(a: &ComplexMatrix, b: &[Complex64], cap: f64) -> Result<()> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("rhs length {} for {} rows", b.len(), a.rows())));
    }
    if !(cap > 0.0) {
        return Err(Error::Dimension(format!("cap must be positive, got {cap}")));
    }
    Ok(())
}

/// Approximates `min {max_u |τ_u| : Aτ = b}` by bisection and reports whether
/// it is at most `cap`.
pub fn min_linf_feasible(a: &ComplexMatrix, b: &[Complex64], cap: f64) -> Result<LinfResult> {
    check_shape(a, b, cap)?;
    let factor = RowFactor::new(a)?;
    let set = AffineSet {
        coords: factor.coords(b),
        factor: &factor,
    };
    let mut witness = factor.min_norm(b);
    let mut hi = max_abs(&witness);
    let mut lo = row_lower_bound(a, b).min(hi);
    if !hi.is_finite() || !lo.is_finite() {
        return Err(Error::NonConvergent("non-finite bracket".into()));
    }
    let mut steps = 0;
    while hi - lo > 0.5 * T_STAR_TOL * hi.min(1.0) {
        steps += 1;
        if steps > MAX_BISECTIONS {
            return Err(Error::NonConvergent(format!("bracket [{lo}, {hi}] stalled")));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match set.meets_polydisc(mid, &witness) {
            Some(y) => {
                hi = mid.max(max_abs(&y)).min(hi);
                witness = y;
            }
            None => lo = mid,
        }
    }
    Ok(LinfResult {
        feasible: hi <= cap,
        t_star: hi,
        witness,
    })
}

/// Single-radius test used inside estimators: accepts via the minimum-norm
/// solution, rejects via the per-row bound, and otherwise runs one round of
/// alternating projections at radius `cap`.
pub fn linf_feasible_at(factor: &RowFactor, a: &ComplexMatrix, b: &[Complex64], cap: f64) -> Result<bool> {
    check_shape(a, b, cap)?;
    let tau = factor.min_norm(b);
    if max_abs(&tau) <= cap * (1.0 + 1e-9) {
        return Ok(true);
    }
    if row_lower_bound(a, b) > cap * (1.0 + 1e-9) {
        return Ok(false);
    }
    let set = AffineSet {
        coords: factor.coords(b),
        factor,
    };
    Ok(set.meets_polydisc(cap, &tau).is_some())
}
