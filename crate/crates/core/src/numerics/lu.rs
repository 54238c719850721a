use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Condition numbers above this are treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return Err(Error::SingularMatrix { condition: f64::INFINITY });
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
            }
            let pivot = lu[(k, k)];
            for r in k + 1..n {
                let f = lu[(r, k)] / pivot;
                lu[(r, k)] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in k + 1..n {
                    let u = lu[(k, c)];
                    lu[(r, c)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.perm.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[(r, c)] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.lu[(r, c)] * x[c];
            }
            x[r] = s / self.lu[(r, r)];
        }
        x
    }

    fn inverse_norm_one(&self) -> f64 {
        let n = self.perm.len();
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        let mut best: f64 = 0.0;
        for c in 0..n {
            e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            e[c] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            best = best.max(col.iter().map(|z| z.norm()).sum());
        }
        best
    }
}

/// 1-norm condition number κ₁(A) = ‖A‖₁‖A⁻¹‖₁, infinite for singular input.
pub fn condition_one(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    match Lu::factor(a) {
        Ok(lu) => a.norm_one() * lu.inverse_norm_one(),
        Err(_) => f64::INFINITY,
    }
}

/// Solves `A x = b` for square `A` by partial-pivot elimination.
pub fn solve_square(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if !a.is_square() || b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "solve_square needs n x n with length-n rhs, got {}x{} and {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let lu = Lu::factor(a)?;
    let condition = a.norm_one() * lu.inverse_norm_one();
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::SingularMatrix { condition });
    }
    Ok(lu.solve(b))
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

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn det3(m: &[[Complex64; 3]; 3]) -> Complex64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[test]
    fn identity_and_diagonal() {
        let x = solve_square(&ComplexMatrix::identity(2), &[c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(x, vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let d = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 4.0]).unwrap();
        let x = solve_square(&d, &[c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15 && (x[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn matches_cramer_rule_at_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_matrix(3, &mut rng);
            let b: Vec<Complex64> = (0..3).map(|_| c(rng.random(), rng.random())).collect();
            let x = solve_square(&a, &b).unwrap();
            let base = [0, 1, 2].map(|r| [0, 1, 2].map(|k| a[(r, k)]));
            let d = det3(&base);
            for col in 0..3 {
                let mut m = base;
                for r in 0..3 {
                    m[r][col] = b[r];
                }
                let want = det3(&m) / d;
                assert!((x[col] - want).norm() <= 1e-9 * (1.0 + want.norm()));
            }
        }
    }

    #[test]
    fn residual_within_scale_at_six() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = random_matrix(6, &mut rng);
            let b: Vec<Complex64> = (0..6).map(|_| c(rng.random(), rng.random())).collect();
            let Ok(x) = solve_square(&a, &b) else { continue };
            let r: Vec<Complex64> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
            assert!(norm2(&r) <= 1e-9 * (a.frobenius_norm() * norm2(&x) + norm2(&b)));
        }
    }

    #[test]
    fn singular_detected() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(solve_square(&a, &[c(1.0, 0.0); 2]), Err(Error::SingularMatrix { .. })));
        let near = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-14]).unwrap();
        assert!(matches!(solve_square(&near, &[c(1.0, 0.0); 2]), Err(Error::SingularMatrix { .. })));
        assert!(condition_one(&near) > CONDITION_LIMIT);
    }
}
