//! Dense complex linear algebra: square solves, minimum-norm solves, numerical
//! rank and minimum-ℓ∞ feasibility over an affine set.

mod linf;
mod lstsq;
mod lu;
mod matrix;

pub use linf::{linf_feasible_at, min_linf_feasible, LinfResult};
pub use lstsq::{min_norm_solve, rank_of, singular_values, RankReport, RowFactor, DEFAULT_RANK_TOL};
pub use lu::{condition_one, solve_square, CONDITION_LIMIT};
pub use matrix::ComplexMatrix;

use num_complex::Complex64;

pub(crate) fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}
