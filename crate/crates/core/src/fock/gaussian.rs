//! Sector decomposition of the single-mode Gaussian displacement channel
//! `G(ρ) = E[D(z, r) ρ D(z, r)†]`, `z` uniform on the unit circle and `r`
//! Rayleigh distributed with density `p(r) = e^{−r²/(2s²)} r/s²`.
//!
//! Averaging over `z` removes all cross-sector terms, leaving
//! `G(ρ) = Σ_σ S_σ (M_σ ∗ ρ) S_σ†` with
//! `M_σ(j, j') = ∫ d_σ(r)_j d_σ(r)_{j'} p(r) dr`, where `d_σ(r)_j` is the
//! σ-sector amplitude of `D(1, r)` at level `j`.

use crate::covariant::{SectorDecomposition, Spectrum};
use crate::error::{Error, Result};
use crate::fock::displacement::sector_amplitude;
use crate::fock::laguerre::laguerre_all;
use crate::fock::quadrature::GaussLaguerre;
use crate::matcore::linalg::{self, c, CMatrix};
use crate::matcore::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct FockParams {
    /// Truncation: levels `0 … dim−1`.
    pub dim: usize,
    /// Rayleigh scale `s`.
    pub std_dev: f64,
    /// Sectors `−sigma_max … sigma_max` are retained.
    pub sigma_max: usize,
    pub quad_points: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl FockParams {
    /// Defaults: every sector retained, `max(2·dim, 64)` quadrature nodes,
    /// `10⁵` Monte Carlo samples, seed 0.
    pub fn new(dim: usize, std_dev: f64) -> Self {
        Self {
            dim,
            std_dev,
            sigma_max: dim.saturating_sub(1),
            quad_points: (2 * dim).max(64),
            mc_samples: 100_000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidParameter(format!("dim {} < 2", self.dim)));
        }
        if self.sigma_max >= self.dim {
            return Err(Error::InvalidParameter(format!(
                "sigma_max {} must be below dim {}",
                self.sigma_max, self.dim
            )));
        }
        if self.quad_points < 2 * self.dim {
            return Err(Error::InvalidParameter(format!(
                "quad_points {} below 2*dim",
                self.quad_points
            )));
        }
        if !(self.std_dev > 0.0 && self.std_dev.is_finite()) {
            return Err(Error::InvalidParameter(format!("std_dev {}", self.std_dev)));
        }
        Ok(())
    }
}

/// Quadrature rule for `∫₀^∞ e^{−u(1 + 1/(2s²))} poly(u) du / (2s²)`.
///
/// With `v = βu`, `β = 1 + 1/(2s²)`, the whole exponential becomes the
/// Gauss–Laguerre weight and the remaining integrand is a polynomial,
/// integrated exactly up to degree `2n − 1`.
struct MaskRule {
    rule: GaussLaguerre,
    beta: f64,
    prefactor: f64,
}

impl MaskRule {
    fn new(std_dev: f64, points: usize) -> Result<Self> {
        let two_s2 = 2.0 * std_dev * std_dev;
        Ok(Self {
            rule: GaussLaguerre::new(points)?,
            beta: 1.0 + 1.0 / two_s2,
            prefactor: 1.0 / (1.0 + two_s2),
        })
    }

    /// Points `u_i = v_i / β` at which the polynomial part is sampled.
    fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        self.rule.nodes.iter().map(move |v| v / self.beta)
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.rule.exact_degree() {
            return Err(Error::QuadratureUnderResolved {
                points: self.rule.len(),
                degree,
            });
        }
        Ok(())
    }
}

/// Polynomial part `e^{u/2} d_σ(√u)_j` of a sector amplitude (sign of
/// `(−r)^{|σ|}` kept), evaluated for every level `j < dim` at once.
fn polynomial_parts(sigma: i64, dim: usize, u: f64) -> Vec<f64> {
    let s = sigma.unsigned_abs() as usize;
    let r = u.sqrt();
    let lag = laguerre_all(dim, s, u);
    let mut out = vec![0.0; dim];
    let mut ratio = 1.0; // √(lo!/hi!) with hi − lo = s, starting at lo = 0
    for k in 1..=s {
        ratio /= (k as f64).sqrt();
    }
    let power = if sigma >= 0 {
        r.powi(s as i32)
    } else {
        (-r).powi(s as i32)
    };
    for (lo, &l) in lag.iter().enumerate().take(dim) {
        if lo > 0 {
            ratio *= (lo as f64 / (lo + s) as f64).sqrt();
        }
        let j = if sigma >= 0 { lo } else { lo + s };
        if j < dim {
            out[j] = power * ratio * l;
        }
    }
    out
}

/// Laguerre degree of the sector amplitude at level `j`.
fn laguerre_degree(sigma: i64, j: usize) -> Option<usize> {
    let t = j as i64 + sigma;
    (t >= 0).then_some(if sigma >= 0 { j } else { t as usize })
}

/// `M_σ(j, j')` by Gauss–Laguerre quadrature with `quad_points` nodes.
pub fn gaussian_mask(sigma: i64, j: usize, jp: usize, s: f64, quad_points: usize) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("std_dev {s}")));
    }
    let (Some(dj), Some(djp)) = (laguerre_degree(sigma, j), laguerre_degree(sigma, jp)) else {
        return Ok(0.0);
    };
    let rule = MaskRule::new(s, quad_points)?;
    rule.check_degree(sigma.unsigned_abs() as usize + dj + djp)?;
    let total: f64 = rule
        .abscissae()
        .zip(&rule.rule.weights)
        .map(|(u, w)| {
            let envelope = (u / 2.0).exp();
            let r = u.sqrt();
            w * sector_amplitude(sigma, j, r) * sector_amplitude(sigma, jp, r) * envelope * envelope
        })
        .sum();
    Ok(total * rule.prefactor)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDecomposition {
    pub params: FockParams,
    /// `(σ, M_σ)` for `σ = −sigma_max … sigma_max`, masks on the integer
    /// spectrum `{0, …, dim−1}` and zero outside their domain.
    pub masks: Vec<(i64, CMatrix)>,
    /// `|1 − Σ_σ M_σ(j, j)|` per level `j`.
    pub truncation_defect: Vec<f64>,
}

impl GaussianDecomposition {
    pub fn mask(&self, sigma: i64) -> Option<&CMatrix> {
        self.masks.iter().find(|(s, _)| *s == sigma).map(|(_, m)| m)
    }

    pub fn max_truncation_defect(&self) -> f64 {
        self.truncation_defect.iter().copied().fold(0.0, f64::max)
    }

    /// The same masks as a decomposition over the integer spectrum.
    pub fn to_sector_decomposition(&self) -> Result<SectorDecomposition> {
        SectorDecomposition::new(
            Spectrum::integer(self.params.dim),
            self.masks
                .iter()
                .map(|(s, m)| (*s as f64, m.clone()))
                .collect(),
        )
    }
}

pub fn gaussian_decomposition(params: &FockParams) -> Result<GaussianDecomposition> {
    params.validate()?;
    let dim = params.dim;
    let rule = MaskRule::new(params.std_dev, params.quad_points)?;
    let psd = Tolerances::default().psd;
    let sm = params.sigma_max as i64;
    let mut masks = Vec::with_capacity(2 * params.sigma_max + 1);
    for sigma in -sm..=sm {
        let domain: Vec<usize> = (0..dim)
            .filter(|&j| (0..dim as i64).contains(&(j as i64 + sigma)))
            .collect();
        let max_deg = domain
            .iter()
            .filter_map(|&j| laguerre_degree(sigma, j))
            .max()
            .unwrap_or(0);
        rule.check_degree(sigma.unsigned_abs() as usize + 2 * max_deg)?;

        let mut acc = vec![0.0; dim * dim];
        for (u, w) in rule.abscissae().zip(&rule.rule.weights) {
            let poly = polynomial_parts(sigma, dim, u);
            for &a in &domain {
                let wa = w * poly[a];
                for &b in &domain {
                    acc[a * dim + b] += wa * poly[b];
                }
            }
        }
        let mask = CMatrix::from_fn(dim, dim, |a, b| c(acc[a * dim + b] * rule.prefactor, 0.0));
        if !domain.is_empty() {
            let min = linalg::min_eigenvalue(&linalg::principal_submatrix(&mask, &domain));
            if min < -psd {
                return Err(Error::MaskNotPSD {
                    min_eigenvalue: min,
                });
            }
        }
        masks.push((sigma, mask));
    }
    let truncation_defect = (0..dim)
        .map(|j| (1.0 - masks.iter().map(|(_, m)| m[(j, j)].re).sum::<f64>()).abs())
        .collect();
    Ok(GaussianDecomposition {
        params: params.clone(),
        masks,
        truncation_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_mask_closed_form() {
        for s in [0.3, 0.5, 1.0, 2.0] {
            let m = gaussian_mask(0, 0, 0, s, 64).unwrap();
            assert!((m - 1.0 / (1.0 + 2.0 * s * s)).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_shift_law_is_geometric() {
        // M_σ(0,0) = ∫ e^{−u} u^σ/σ! e^{−u/(2s²)} du/(2s²) = q (1−q)^σ
        let s = 1.0;
        let q = 1.0 / (1.0 + 2.0 * s * s);
        for sigma in 0..10 {
            let m = gaussian_mask(sigma, 0, 0, s, 64).unwrap();
            assert!((m - q * (1.0 - q).powi(sigma as i32)).abs() < 1e-13);
        }
    }

    #[test]
    fn masks_symmetric_and_below_vacuum_vanish() {
        let m = gaussian_mask(2, 1, 4, 0.7, 64).unwrap();
        let n = gaussian_mask(2, 4, 1, 0.7, 64).unwrap();
        assert!((m - n).abs() < 1e-15);
        assert_eq!(gaussian_mask(-3, 2, 5, 0.7, 64).unwrap(), 0.0);
    }

    #[test]
    fn narrow_distribution_approaches_identity() {
        let s = 1e-4;
        for (j, jp) in [(0, 0), (1, 3), (5, 5)] {
            assert!((gaussian_mask(0, j, jp, s, 64).unwrap() - 1.0).abs() < 1e-6);
        }
        assert!(gaussian_mask(1, 2, 2, s, 64).unwrap() < 1e-6);
        assert!(gaussian_mask(-1, 2, 2, s, 64).unwrap() < 1e-6);
    }

    #[test]
    fn under_resolved_quadrature() {
        assert!(matches!(
            gaussian_mask(3, 5, 5, 1.0, 4),
            Err(Error::QuadratureUnderResolved { .. })
        ));
    }

    #[test]
    fn decomposition_matches_pointwise_masks() {
        let params = FockParams::new(8, 0.6);
        let d = gaussian_decomposition(&params).unwrap();
        for (sigma, j, jp) in [(0, 2, 5), (3, 1, 4), (-2, 3, 6), (-7, 7, 7)] {
            let direct = gaussian_mask(sigma, j, jp, 0.6, params.quad_points).unwrap();
            let m = d.mask(sigma).unwrap();
            assert!((m[(j, jp)].re - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn vacuum_truncation_defect() {
        // Σ_{σ≤8} 2/3^{σ+1} = 1 − 3^{−9} at s = 0.5
        let mut params = FockParams::new(16, 0.5);
        params.sigma_max = 8;
        let d = gaussian_decomposition(&params).unwrap();
        assert!((d.truncation_defect[0] - 3f64.powi(-9)).abs() < 1e-12);
        let p0 = d.mask(0).unwrap()[(0, 0)].re;
        assert!((p0 - 1.0 / 1.5).abs() < 1e-12);
        // nothing below the vacuum
        for sigma in 1..=8 {
            for jp in 0..16 {
                assert_eq!(d.mask(-sigma).unwrap()[(0, jp)].re, 0.0);
            }
        }
    }

    #[test]
    fn params_validation() {
        let mut p = FockParams::new(4, 1.0);
        p.sigma_max = 4;
        assert!(p.validate().is_err());
        let mut p = FockParams::new(4, 1.0);
        p.quad_points = 7;
        assert!(p.validate().is_err());
        assert!(FockParams::new(1, 1.0).validate().is_err());
        assert!(FockParams::new(4, 0.0).validate().is_err());
    }
}
