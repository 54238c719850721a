use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative singular-value cutoff used by [`rank_of`] unless told otherwise.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub tolerance_used: f64,
    pub singular_values: Vec<f64>,
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    // faer's SVD is several times faster than nalgebra's at the sizes the
    // alignment check needs (≈500 square).
    let m = faer::Mat::<faer::c64>::from_fn(a.rows(), a.cols(), |r, c| {
        let z = a[(r, c)];
        faer::c64::new(z.re, z.im)
    });
    let mut s = m
        .singular_values()
        .expect("SVD of a finite matrix converges");
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn rank_of(a: &ComplexMatrix, rel_tol: f64) -> RankReport {
    let singular_values = singular_values(a);
    let tolerance_used = rel_tol * singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|&&s| s > tolerance_used)
        .count();
    RankReport {
        rank,
        tolerance_used,
        singular_values,
    }
}

/// Thin QR factorisation `Aᴴ = Q R` of a wide full-row-rank matrix.
///
/// Gives the minimum-norm solution `Q R⁻ᴴ b` and the orthogonal projection onto
/// any affine set `{x : A x = b}`.
#[derive(Debug, Clone)]
pub struct RowFactor {
    q: DMatrix<Complex64>,
    r: DMatrix<Complex64>,
    rows: usize,
    cols: usize,
}

impl RowFactor {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let (rows, cols) = (a.rows(), a.cols());
        if rows > cols {
            return Err(Error::RankDeficient { rank: cols, rows });
        }
        if rows == 0 {
            return Ok(Self {
                q: DMatrix::zeros(cols, 0),
                r: DMatrix::zeros(0, 0),
                rows,
                cols,
            });
        }
        let qr = a.to_nalgebra().adjoint().qr();
        let (q, r) = (qr.q(), qr.r());
        let s = singular_values(&ComplexMatrix::from_nalgebra(&r));
        let tol = DEFAULT_RANK_TOL * s[0];
        let rank = s.iter().filter(|&&x| x > tol).count();
        if rank < rows {
            return Err(Error::RankDeficient { rank, rows });
        }
        Ok(Self { q, r, rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coordinates `c = R⁻ᴴ b` of the minimum-norm solution in the basis `Q`.
    pub(crate) fn coords(&self, b: &[Complex64]) -> DVector<Complex64> {
        assert_eq!(b.len(), self.rows, "rhs length differs from row count");
        if self.rows == 0 {
            return DVector::zeros(0);
        }
        let rhs = DVector::from_column_slice(b);
        self.r
            .adjoint()
            .solve_lower_triangular(&rhs)
            .expect("R has a nonzero diagonal after the rank check")
    }

    /// Minimum-norm solution of `A x = b`.
    pub fn min_norm(&self, b: &[Complex64]) -> Vec<Complex64> {
        if self.rows == 0 {
            return vec![Complex64::new(0.0, 0.0); self.cols];
        }
        (&self.q * self.coords(b)).as_slice().to_vec()
    }

    /// Orthogonal projection of `x` onto `{y : A y = b}`, given `coords(b)`.
    pub(crate) fn project(&self, x: &[Complex64], coords: &DVector<Complex64>) -> Vec<Complex64> {
        if self.rows == 0 {
            return x.to_vec();
        }
        let xv = DVector::from_column_slice(x);
        let delta = self.q.ad_mul(&xv) - coords;
        (xv - &self.q * delta).as_slice().to_vec()
    }
}

/// Minimum-norm solution `Aᴴ(AAᴴ)⁻¹ b` of a full-row-rank system.
pub fn min_norm_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "rhs length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(RowFactor::new(a)?.min_norm(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::norm2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        use rand_distr::StandardNormal;
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn residual(a: &ComplexMatrix, x: &[Complex64], b: &[Complex64]) -> f64 {
        let r: Vec<Complex64> = a.mul_vec(x).iter().zip(b).map(|(p, q)| p - q).collect();
        norm2(&r)
    }

    #[test]
    fn one_equation_closed_form() {
        let (a1, a2, b) = (c(1.0, 2.0), c(-0.5, 0.3), c(0.7, -1.1));
        let a = ComplexMatrix::from_rows(&[vec![a1, a2]]).unwrap();
        let x = min_norm_solve(&a, &[b]).unwrap();
        let d = a1.norm_sqr() + a2.norm_sqr();
        assert!((x[0] - a1.conj() * b / d).norm() < 1e-14);
        assert!((x[1] - a2.conj() * b / d).norm() < 1e-14);
    }

    #[test]
    fn padded_identity() {
        let a = ComplexMatrix::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let x = min_norm_solve(&a, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        for (got, want) in x.iter().zip([1.0, 1.0, 0.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn beats_nullspace_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = gaussian(2, 5, &mut rng);
        let b = vec![c(0.3, -0.2), c(1.0, 0.5)];
        let x = min_norm_solve(&a, &b).unwrap();
        let f = RowFactor::new(&a).unwrap();
        let zero = f.coords(&[c(0.0, 0.0); 2]);
        for _ in 0..100 {
            let v: Vec<Complex64> = (0..5).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
            // projecting onto the homogeneous solution set gives a nullspace vector
            let n = f.project(&v, &zero);
            assert!(norm2(&a.mul_vec(&n)) < 1e-12);
            let alt: Vec<Complex64> = x.iter().zip(&n).map(|(p, q)| p + q).collect();
            assert!(residual(&a, &alt, &b) < 1e-10);
            assert!(norm2(&x) <= norm2(&alt) + 1e-14);
        }
    }

    #[test]
    fn residual_small_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..1000 {
            let rows = 1 + trial % 6;
            let cols = rows + trial % 7;
            let a = gaussian(rows, cols, &mut rng);
            let b: Vec<Complex64> = (0..rows).map(|_| c(rng.random(), rng.random())).collect();
            let x = min_norm_solve(&a, &b).unwrap();
            assert!(residual(&a, &x, &b) <= 1e-9 * (a.frobenius_norm() * norm2(&x) + norm2(&b)));
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let a = ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]).unwrap();
        assert!(matches!(min_norm_solve(&a, &[c(1.0, 0.0); 2]), Err(Error::RankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&ComplexMatrix::identity(3), DEFAULT_RANK_TOL).rank, 3);
        let dup = ComplexMatrix::from_real(3, 3, &[1.0, 1.0, 0.0, 2.0, 2.0, 1.0, 0.5, 0.5, 3.0]).unwrap();
        assert_eq!(rank_of(&dup, DEFAULT_RANK_TOL).rank, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let r = rank_of(&gaussian(10, 6, &mut rng), DEFAULT_RANK_TOL);
            assert_eq!(r.rank, 6);
            assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
