//! Gauss–Laguerre quadrature `∫₀^∞ e^{−x} f(x) dx ≈ Σ w_i f(x_i)`.
//!
//! Nodes start from the Golub–Welsch eigenvalues of the Jacobi matrix and
//! are polished by Newton steps on `L_n`; weights use the closed form
//! `w_i = x_i / ((n+1)² L_{n+1}(x_i)²)`, which keeps full relative
//! accuracy for the tiny weights of the far nodes.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fock::laguerre::laguerre_all;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least one node".into(),
            ));
        }
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                (2 * i + 1) as f64
            } else if i + 1 == j {
                j as f64
            } else if j + 1 == i {
                i as f64
            } else {
                0.0
            }
        });
        let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        guesses.sort_by(f64::total_cmp);

        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for x0 in guesses {
            let mut x = x0;
            for _ in 0..8 {
                let l = laguerre_all(n, 0, x);
                // L_n'(x) = n (L_n − L_{n−1}) / x
                let deriv = n as f64 * (l[n] - l[n - 1]) / x;
                let step = l[n] / deriv;
                x -= step;
                if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                    break;
                }
            }
            let next = laguerre_all(n + 1, 0, x)[n + 1];
            let w = x / ((n as f64 + 1.0).powi(2) * next * next);
            if !(w.is_finite() && x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Gauss-Laguerre rule with {n} nodes overflows"
                )));
            }
            nodes.push(x);
            weights.push(w);
        }
        // node roundoff near the origin leaves ~1e-11 relative error in the
        // first weights; the zeroth moment is exactly 1
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly, `2n − 1`.
    pub fn exact_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// `∫₀^∞ e^{−x} f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
