//! Evaluation of complete homogeneous and (skew) Schur polynomials.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Jacobi–Trudi matrices above this dimension are flagged as possibly
/// ill-conditioned.
pub const CONDITION_WARN_DIM: usize = 25;

/// h_0..=h_max evaluated at `xs`.
pub fn complete_homogeneous_table(max: usize, xs: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; max + 1];
    h[0] = 1.0;
    for &x in xs {
        // h_r(x_1..x_k) = h_r(x_1..x_{k-1}) + x_k h_{r-1}(x_1..x_k)
        for r in 1..=max {
            h[r] += x * h[r - 1];
        }
    }
    h
}

/// h_r(xs); zero for negative r.
pub fn complete_homogeneous(r: i64, xs: &[f64]) -> f64 {
    if r < 0 {
        return 0.0;
    }
    complete_homogeneous_table(r as usize, xs)[r as usize]
}

/// Skew Schur value together with a flag for large determinants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurValue {
    pub value: f64,
    pub dim: usize,
    pub large_matrix: bool,
}

/// s_{λ/μ}(xs) as det(h_{λ_i − μ_j − i + j}), with diagnostics.
pub fn skew_schur_diag(lambda: &Partition, mu: &Partition, xs: &[f64]) -> SchurValue {
    if !lambda.contains(mu) {
        return SchurValue {
            value: 0.0,
            dim: 0,
            large_matrix: false,
        };
    }
    let n = lambda.len();
    if n == 0 {
        return SchurValue {
            value: 1.0,
            dim: 0,
            large_matrix: false,
        };
    }
    let max = (lambda.part(0) as usize) + n;
    let h = complete_homogeneous_table(max, xs);
    let entry = |r: i64| {
        if r < 0 || r as usize > max {
            0.0
        } else {
            h[r as usize]
        }
    };
    let m = DMatrix::from_fn(n, n, |i, j| {
        entry(lambda.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64)
    });
    SchurValue {
        value: m.lu().determinant(),
        dim: n,
        large_matrix: n > CONDITION_WARN_DIM,
    }
}

pub fn skew_schur(lambda: &Partition, mu: &Partition, xs: &[f64]) -> f64 {
    skew_schur_diag(lambda, mu, xs).value
}

pub fn schur(lambda: &Partition, xs: &[f64]) -> f64 {
    if lambda.len() > xs.len() {
        return 0.0;
    }
    skew_schur(lambda, &Partition::empty(), xs)
}

/// s_λ(1,…,1) with `k` ones, by the Weyl dimension product.
pub fn schur_principal(lambda: &Partition, k: usize) -> Result<f64> {
    Ok(log_schur_principal(lambda, k)?.exp())
}

/// Logarithm of [`schur_principal`], for large arguments.
pub fn log_schur_principal(lambda: &Partition, k: usize) -> Result<f64> {
    if lambda.len() > k {
        return Err(Error::TooLong {
            len: lambda.len(),
            bound: k,
        });
    }
    let mut acc = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let num = lambda.part(i) as f64 - lambda.part(j) as f64 + (j - i) as f64;
            acc += (num / (j - i) as f64).ln();
        }
    }
    Ok(acc)
}

/// ∏_{i<j} (x_i^M − x_j^M)/(x_i − x_j), which is the Schur polynomial of
/// the staircase ((M−1)(N−1), …, 0). Nearly equal pairs use the limit
/// M·x^{M−1}.
pub fn staircase_schur(m: u32, xs: &[f64]) -> f64 {
    let mut acc = 1.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let (a, b) = (xs[i], xs[j]);
            let scale = a.abs().max(b.abs());
            acc *= if (a - b).abs() < 1e-12 * scale {
                m as f64 * ((a + b) / 2.0).powi(m as i32 - 1)
            } else {
                (a.powi(m as i32) - b.powi(m as i32)) / (a - b)
            };
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn homogeneous_examples() {
        assert_eq!(complete_homogeneous(-1, &[0.5, 0.7]), 0.0);
        assert_eq!(complete_homogeneous(0, &[0.5, 0.7]), 1.0);
        assert_eq!(complete_homogeneous(0, &[]), 1.0);
        let (a, b) = (0.3, 1.7);
        assert!(close(
            complete_homogeneous(2, &[a, b]),
            a * a + a * b + b * b,
            1e-15
        ));
    }

    #[test]
    fn skew_schur_examples() {
        assert_eq!(skew_schur(&p(&[2, 1]), &p(&[2, 1]), &[0.4, 0.9]), 1.0);
        let (x1, x2) = (0.3, 0.8);
        assert!(close(
            skew_schur(&p(&[2]), &p(&[1]), &[x1, x2]),
            x1 + x2,
            1e-15
        ));
        assert!(close(schur(&p(&[2, 1]), &[1.0, 1.0, 1.0]), 8.0, 1e-14));
        assert_eq!(skew_schur(&p(&[1]), &p(&[2]), &[1.0]), 0.0);
        assert_eq!(schur(&p(&[1, 1, 1]), &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn principal_examples() {
        assert_eq!(schur_principal(&Partition::empty(), 5).unwrap(), 1.0);
        assert!(close(schur_principal(&p(&[1]), 2).unwrap(), 2.0, 1e-14));
        assert!(close(schur_principal(&p(&[2, 1]), 3).unwrap(), 8.0, 1e-14));
        assert!(schur_principal(&p(&[1, 1]), 1).is_err());
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase_schur(1, &[0.2, 0.5, 0.9]), 1.0);
        assert!(close(staircase_schur(2, &[2.0, 3.0]), 5.0, 1e-15));
        let x = 0.7;
        assert!(close(staircase_schur(3, &[x, x]), 3.0 * x * x, 1e-15));
    }

    #[test]
    fn large_matrix_flag() {
        let lam = Partition::staircase(2, 30);
        let v = skew_schur_diag(&lam, &Partition::empty(), &[0.5; 30]);
        assert!(v.large_matrix);
        assert_eq!(v.dim, 29);
    }
}
