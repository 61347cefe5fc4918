//! Displacement operators `D(z, r) = exp(r (z̄ a† − z a))` on a truncated
//! Fock space and their energy-shift sectors.
//!
//! `D(z, r) = Σ_σ z̄^σ D_σ(r)`, where the real matrix `D_σ(r)` holds the
//! entries of `D(1, r)` on the σ-th subdiagonal:
//!
//! * σ ≥ 0: `⟨j+σ|D|j⟩ = e^{−r²/2} r^σ √(j!/(j+σ)!) L_j^{(σ)}(r²)`
//! * σ < 0: `⟨j+σ|D|j⟩ = e^{−r²/2} (−r)^{−σ} √((j+σ)!/j!) L_{j+σ}^{(−σ)}(r²)`

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::laguerre::laguerre;
use crate::matcore::linalg::{self, c, CMatrix, CVector};

/// Truncated annihilation operator on levels `0 … dim−1`.
pub fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = c((k as f64).sqrt(), 0.0);
    }
    a
}

/// Exponential of the truncated generator, computed once per dimension.
///
/// `r (a† − a)` is real antisymmetric, so `i (a† − a)` is Hermitian with a
/// fixed eigenbasis and `D(1, r) = V e^{−iλr} V†` for every `r`. A phase
/// `z` enters through `D(z, r) = Z D(1, r) Z†` with `Z = diag(z̄^m)`.
#[derive(Debug, Clone)]
pub struct Displacer {
    dim: usize,
    values: Vec<f64>,
    vectors: CMatrix,
    vectors_adj: CMatrix,
}

impl Displacer {
    pub fn new(dim: usize) -> Self {
        let a = annihilation(dim);
        let generator = (a.adjoint() - a) * c(0.0, 1.0);
        let eig = linalg::eigh(&generator);
        Self {
            dim,
            vectors_adj: eig.vectors.adjoint(),
            vectors: eig.vectors,
            values: eig.values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn phases(&self, r: f64) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l * r))
            .collect()
    }

    fn rotation(&self, z: Complex64) -> Vec<Complex64> {
        let zc = z.conj();
        let mut out = Vec::with_capacity(self.dim);
        let mut p = c(1.0, 0.0);
        for _ in 0..self.dim {
            out.push(p);
            p *= zc;
        }
        out
    }

    /// `D(z, r)` as a dense matrix.
    pub fn matrix(&self, z: Complex64, r: f64) -> CMatrix {
        let ph = self.phases(r);
        let mut scaled = self.vectors.clone();
        for (k, p) in ph.iter().enumerate() {
            for i in 0..self.dim {
                scaled[(i, k)] *= p;
            }
        }
        let mut d = scaled * &self.vectors_adj;
        let rot = self.rotation(z);
        for m in 0..self.dim {
            for n in 0..self.dim {
                d[(m, n)] *= rot[m] * rot[n].conj();
            }
        }
        d
    }

    /// `D(z, r) ψ` without forming the matrix.
    pub fn apply(&self, z: Complex64, r: f64, psi: &CVector) -> CVector {
        let rot = self.rotation(z);
        let rotated = CVector::from_fn(self.dim, |n, _| rot[n].conj() * psi[n]);
        let mut coeff = &self.vectors_adj * rotated;
        for (k, p) in self.phases(r).iter().enumerate() {
            coeff[k] *= p;
        }
        let out = &self.vectors * coeff;
        CVector::from_fn(self.dim, |m, _| rot[m] * out[m])
    }
}

/// `exp(r (z̄ a† − z a))` truncated to `dim` levels.
pub fn displacement_matrix(z: Complex64, r: f64, dim: usize) -> Result<CMatrix> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "|z| = {} must be 1",
            z.norm()
        )));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("displacement radius {r}")));
    }
    Ok(Displacer::new(dim).matrix(z, r))
}

/// `√(lo! / hi!)` for `lo ≤ hi`.
fn factorial_ratio_sqrt(lo: usize, hi: usize) -> f64 {
    ((lo + 1)..=hi).fold(1.0, |acc, k| acc / (k as f64).sqrt())
}

/// Untruncated `⟨j+σ| D(1, r) |j⟩`; zero when `j + σ < 0`.
pub fn sector_amplitude(sigma: i64, j: usize, r: f64) -> f64 {
    let target = j as i64 + sigma;
    if target < 0 {
        return 0.0;
    }
    let u = r * r;
    let envelope = (-u / 2.0).exp();
    if sigma >= 0 {
        let s = sigma as usize;
        envelope * r.powi(s as i32) * factorial_ratio_sqrt(j, j + s) * laguerre(j, s, u)
    } else {
        let s = (-sigma) as usize;
        let t = target as usize;
        envelope * (-r).powi(s as i32) * factorial_ratio_sqrt(t, j) * laguerre(t, s, u)
    }
}

/// The real matrix `D_σ(r)` on `dim` levels: entries `(j+σ, j)` only.
pub fn displacement_sector(sigma: i64, r: f64, dim: usize) -> Result<CMatrix> {
    if sigma.unsigned_abs() as usize >= dim {
        return Err(Error::SectorOutOfRange { sigma, dim });
    }
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let t = j as i64 + sigma;
        if (0..dim as i64).contains(&t) {
            m[(t as usize, j)] = c(sector_amplitude(sigma, j, r), 0.0);
        }
    }
    Ok(m)
}

/// `dim − 4⌈r²⌉`, the coarse cutoff used when nothing better is needed.
pub fn heuristic_safe_level(r: f64, dim: usize) -> Option<usize> {
    let margin = 4 * (r * r).ceil() as usize;
    dim.checked_sub(margin)
}

/// Entrywise bound on `|⟨a| P D(1, r) P − D_dim(1, r) |b⟩|`, where `P`
/// projects onto the first `dim` levels and `D_dim` is the truncated
/// exponential.
///
/// The truncated generator misses only the coupling `√dim |dim−1⟩⟨dim|`, so
/// the deviation equals
/// `√dim ∫₀^r ⟨a| D_dim(r−ρ) |dim−1⟩ ⟨dim| D(1, ρ) |b⟩ dρ`; the bound
/// integrates the modulus of the integrand with the trapezoid rule.
pub fn truncation_error_bounds(r: f64, dim: usize) -> DMatrix<f64> {
    const GRID: usize = 256;
    let mut bounds = DMatrix::zeros(dim, dim);
    if dim == 0 || r == 0.0 {
        return bounds;
    }
    let displacer = Displacer::new(dim);
    let top = CVector::from_fn(dim, |m, _| {
        if m + 1 == dim {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let h = r / GRID as f64;
    for k in 0..=GRID {
        let rho = h * k as f64;
        let weight = if k == 0 || k == GRID { 0.5 * h } else { h };
        let back = displacer.apply(c(1.0, 0.0), r - rho, &top);
        for b in 0..dim {
            let out = sector_amplitude((dim - b) as i64, b, rho).abs();
            for a in 0..dim {
                bounds[(a, b)] += weight * back[a].norm() * out;
            }
        }
    }
    bounds * (dim as f64).sqrt()
}

/// Weight `Σ_{m ≥ dim} |⟨m| D(1, r) |j⟩|²` that leaves the first `dim` levels.
pub fn leakage(j: usize, r: f64, dim: usize) -> f64 {
    let kept: f64 = (0..dim)
        .map(|m| sector_amplitude(m as i64 - j as i64, j, r).powi(2))
        .sum();
    (1.0 - kept).max(0.0)
}

/// Highest level `L` such that the truncated displacement matches the
/// untruncated amplitudes within `tol` on all entries `a, b ≤ L`, and each
/// column `b ≤ L` leaks at most `tol` of its weight past the cutoff.
pub fn safe_level(r: f64, dim: usize, tol: f64) -> Option<usize> {
    let bounds = truncation_error_bounds(r, dim);
    (0..dim)
        .take_while(|&l| {
            leakage(l, r, dim) <= tol
                && (0..=l).all(|a| bounds[(a, l)] <= tol && bounds[(l, a)] <= tol)
        })
        .last()
}
