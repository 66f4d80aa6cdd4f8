//! Gauss rules on [-1, 1] by the Golub-Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Jacobi rule for the weight `(1 + x)^b` on [-1, 1], `b > -1`.
///
/// `b = 0` gives Gauss-Legendre.
pub fn gauss_jacobi(n: usize, b: f64) -> GaussRule {
    assert!(n >= 1 && b > -1.0);
    let a = 0.0;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + a + b;
            let num = 4.0 * m * (m + a) * (m + b) * (m + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            let off = (num / den).sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(b + 1.0) / (b + 1.0);
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    GaussRule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
}

impl GaussRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
