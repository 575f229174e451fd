//! Gauss–Hermite quadrature for expectations under Gaussian signal models.

use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;
use std::sync::OnceLock;

pub const DEFAULT_NODES: usize = 32;

/// Nodes and weights for `∫ e^{-x²} f(x) dx ≈ Σ w_i f(x_i)`, sorted by node.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub–Welsch: nodes are eigenvalues of the Hermite Jacobi matrix.
    pub fn new(n: usize) -> Self {
        assert!(n > 0);
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let off = (k as f64 / 2.0).sqrt();
            jacobi[(k - 1, k)] = off;
            jacobi[(k, k - 1)] = off;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], PI.sqrt() * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn default_rule() -> &'static GaussHermite {
        static RULE: OnceLock<GaussHermite> = OnceLock::new();
        RULE.get_or_init(|| GaussHermite::new(DEFAULT_NODES))
    }

    /// Points and probability weights approximating `E[f(X)]`, `X ~ N(mean, sd²)`.
    pub fn normal_points(&self, mean: f64, sd: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let scale = std::f64::consts::SQRT_2 * sd;
        let norm = 1.0 / PI.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mean + scale * x, w * norm))
    }
}
