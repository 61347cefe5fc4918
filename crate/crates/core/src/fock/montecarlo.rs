//! Monte Carlo estimate of the Gaussian displacement channel and its
//! comparison with the quadrature decomposition.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covariant::reconstruct;
use crate::error::{Error, Result};
use crate::fock::displacement::Displacer;
use crate::fock::gaussian::{gaussian_decomposition, FockParams};
use crate::matcore::linalg::{self, CMatrix, CVector};
use crate::matcore::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: CMatrix,
    /// Per-entry standard error `sd / √samples`, with `sd² = E|x − x̄|²`
    /// over samples (unbiased).
    pub std_error: DMatrix<f64>,
    pub samples: usize,
}

/// Draws `(z, r)` for sample `index` from its own ChaCha stream, so every
/// sample depends only on `(seed, index)`.
pub fn draw_displacement(seed: u64, index: u64, std_dev: f64) -> (Complex64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let angle: f64 = rng.random();
    let u: f64 = rng.random();
    let z = Complex64::from_polar(1.0, TAU * angle);
    let r = std_dev * (-2.0 * (1.0 - u).ln()).sqrt();
    (z, r)
}

/// Averages `D(z, r) ρ D(z, r)†` over `mc_samples` draws using the
/// truncated exponential `D`. Samples are accumulated in index order.
pub fn monte_carlo_channel(rho: &DensityMatrix, params: &FockParams) -> Result<MonteCarloEstimate> {
    if params.mc_samples == 0 {
        return Err(Error::InvalidParameter(
            "mc_samples must be positive".into(),
        ));
    }
    if rho.dim() != params.dim {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs Fock dimension {}",
            rho.dim(),
            params.dim
        )));
    }
    if !(params.std_dev >= 0.0 && params.std_dev.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "std_dev {}",
            params.std_dev
        )));
    }
    let n = params.dim;
    let displacer = Displacer::new(n);
    // ρ = Σ λ_k ψ_k ψ_k†, so D ρ D† = Σ λ_k (Dψ_k)(Dψ_k)†
    let eig = linalg::eigh(rho.matrix());
    let components: Vec<(f64, CVector)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, &l)| (l, eig.vector(k)))
        .collect();

    let mut sum = CMatrix::zeros(n, n);
    let mut sum_sq = DMatrix::<f64>::zeros(n, n);
    for index in 0..params.mc_samples {
        let (z, r) = draw_displacement(params.seed, index as u64, params.std_dev);
        let mut out = CMatrix::zeros(n, n);
        for (l, psi) in &components {
            let moved = displacer.apply(z, r, psi);
            out += (&moved * moved.adjoint()).scale(*l);
        }
        for (acc, x) in sum_sq.iter_mut().zip(out.iter()) {
            *acc += x.norm_sqr();
        }
        sum += out;
    }
    let count = params.mc_samples as f64;
    let mean = sum / linalg::c(count, 0.0);
    let std_error = DMatrix::from_fn(n, n, |a, b| {
        if params.mc_samples < 2 {
            return f64::INFINITY;
        }
        let var = (sum_sq[(a, b)] - count * mean[(a, b)].norm_sqr()) / (count - 1.0);
        (var.max(0.0) / count).sqrt()
    });
    Ok(MonteCarloEstimate {
        mean,
        std_error,
        samples: params.mc_samples,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Largest `|decomposition − Monte Carlo|` over all entries.
    pub max_entry_deviation: f64,
    /// Tolerance at the entry with the largest deviation-to-tolerance ratio.
    pub max_allowed: f64,
    /// Largest deviation-to-tolerance ratio; at most 1 when every entry agrees.
    pub worst_ratio: f64,
    pub worst_entry: (usize, usize),
    /// Largest truncation defect over the levels populated by the input.
    pub truncation_defect: f64,
    pub within_tolerance: bool,
    pub decomposition: CMatrix,
    pub monte_carlo: MonteCarloEstimate,
}

/// Applies the reconstructed quadrature channel to `ρ` and compares every
/// entry with the Monte Carlo average. Entry `(a, b)` agrees when the
/// deviation is at most `max(3·SE_ab, truncation defect)`, the defect
/// taken over the levels populated by `ρ`.
pub fn compare_decomposition_to_mc(
    params: &FockParams,
    rho: &DensityMatrix,
) -> Result<ComparisonReport> {
    let decomposition = gaussian_decomposition(params)?;
    let channel = reconstruct(&decomposition.to_sector_decomposition()?)?;
    let predicted = channel.apply_operator(rho.matrix())?;
    let monte_carlo = monte_carlo_channel(rho, params)?;

    let populated = (0..params.dim).filter(|&j| rho.matrix()[(j, j)].re > 0.0);
    let truncation_defect = populated
        .map(|j| decomposition.truncation_defect[j])
        .fold(0.0, f64::max);

    let n = params.dim;
    let mut max_entry_deviation: f64 = 0.0;
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut worst_entry = (0, 0);
    let mut max_allowed = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dev = (predicted[(a, b)] - monte_carlo.mean[(a, b)]).norm();
            let allowed = (3.0 * monte_carlo.std_error[(a, b)]).max(truncation_defect);
            max_entry_deviation = max_entry_deviation.max(dev);
            let ratio = if allowed > 0.0 {
                dev / allowed
            } else if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_entry = (a, b);
                max_allowed = allowed;
            }
        }
    }
    Ok(ComparisonReport {
        max_entry_deviation,
        max_allowed,
        worst_ratio,
        worst_entry,
        truncation_defect,
        within_tolerance: worst_ratio <= 1.0,
        decomposition: predicted,
        monte_carlo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::linalg::c;

    #[test]
    fn draws_are_reproducible_and_order_free() {
        let a = draw_displacement(7, 123, 1.0);
        let _ = draw_displacement(7, 5, 1.0);
        let b = draw_displacement(7, 123, 1.0);
        assert_eq!(a, b);
        assert_ne!(draw_displacement(7, 124, 1.0), a);
        assert_ne!(draw_displacement(8, 123, 1.0), a);
    }

    #[test]
    fn tiny_displacements_leave_state_alone() {
        let mut params = FockParams::new(6, 1e-6);
        params.mc_samples = 200;
        let psi = CVector::from_fn(6, |k, _| c(if k < 2 { 0.5f64.sqrt() } else { 0.0 }, 0.0));
        let rho = DensityMatrix::pure(&psi).unwrap();
        let est = monte_carlo_channel(&rho, &params).unwrap();
        assert!(linalg::frobenius_distance(&est.mean, rho.matrix()) < 1e-5);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut params = FockParams::new(6, 0.8);
        params.mc_samples = 500;
        params.seed = 99;
        let rho = DensityMatrix::basis(6, 1);
        let a = monte_carlo_channel(&rho, &params).unwrap();
        let b = monte_carlo_channel(&rho, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_samples() {
        let mut params = FockParams::new(4, 1.0);
        params.mc_samples = 0;
        assert!(monte_carlo_channel(&DensityMatrix::basis(4, 0), &params).is_err());
    }
}
