//! Coherent information and the quantum-capacity lower bound of Hadamard
//! (Schur multiplier) channels `ρ ↦ M ∗ ρ`.
//!
//! For a positive mask with unit diagonal the coherent information at the
//! maximally mixed input equals `log₂ n − S(M/n)`: writing
//! `M = Σ_j |m_j⟩⟨m_j|` with orthogonal `m_j`, the Kraus operators
//! `D_j = diag(m_j)` satisfy `tr(D_j† D_i) = ⟨m_j|m_i⟩`, so the environment
//! output has eigenvalues `⟨m_j|m_j⟩/n`, the spectrum of `M/n`.

use crate::error::{Error, Result};
use crate::matcore::entropy::{shannon_bits, von_neumann_entropy};
use crate::matcore::linalg::{self, c, CMatrix, CVector};
use crate::matcore::{Channel, DensityMatrix, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub coherent_information: f64,
    pub hadamard_bound: Option<f64>,
    pub input_dim: usize,
}

/// Purification `Σ_k √λ_k |k⟩_R ⊗ |e_k⟩` of `ρ = Σ_k λ_k |e_k⟩⟨e_k|`,
/// reference factor first.
pub fn purify(rho: &DensityMatrix) -> Result<CVector> {
    let n = rho.dim();
    let eig = linalg::eigh(rho.matrix());
    let psd = Tolerances::default().psd;
    let mut psi = CVector::zeros(n * n);
    for (k, &l) in eig.values.iter().enumerate() {
        if l < -psd {
            return Err(Error::NotDensityMatrix(format!("eigenvalue {l:e}")));
        }
        let amp = l.max(0.0).sqrt();
        for a in 0..n {
            psi[k * n + a] = eig.vectors[(a, k)] * amp;
        }
    }
    Ok(psi)
}

/// Traces out the left factor of a state on `left ⊗ right`.
pub fn partial_trace_left(x: &CMatrix, left: usize, right: usize) -> Result<CMatrix> {
    if x.shape() != (left * right, left * right) {
        return Err(Error::DimensionMismatch(format!(
            "operator shape {:?} vs {left} x {right}",
            x.shape()
        )));
    }
    Ok(CMatrix::from_fn(right, right, |a, b| {
        (0..left).map(|r| x[(r * right + a, r * right + b)]).sum()
    }))
}

/// Coherent information `S(G(ρ)) − S((id ⊗ G)(|φ⟩⟨φ|))` in bits, for a
/// purification `φ` of `ρ` given on `reference ⊗ system` (reference first,
/// of the same dimension as the system).
pub fn coherent_information_of_purification(channel: &Channel, phi: &CVector) -> Result<f64> {
    if !channel.is_square() {
        return Err(Error::DimensionMismatch(
            "coherent information needs a square channel".into(),
        ));
    }
    let n = channel.dim_in();
    if phi.len() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "purification length {} vs {}",
            phi.len(),
            n * n
        )));
    }
    let joint = DensityMatrix::pure(phi)?;
    let rho = DensityMatrix::from_trusted(partial_trace_left(joint.matrix(), n, n)?);
    let out = channel.apply(&rho)?;
    let joint_out = channel.bipartite_apply(&joint)?;
    Ok(von_neumann_entropy(&out)? - von_neumann_entropy(&joint_out)?)
}

pub fn coherent_information(channel: &Channel, rho: &DensityMatrix) -> Result<f64> {
    if !channel.is_square() || channel.dim_in() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs channel {} -> {}",
            rho.dim(),
            channel.dim_in(),
            channel.dim_out()
        )));
    }
    coherent_information_of_purification(channel, &purify(rho)?)
}

fn validate_mask(mask: &CMatrix, n: usize) -> Result<()> {
    let tol = Tolerances::default();
    if mask.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "mask shape {:?}, expected ({n}, {n})",
            mask.shape()
        )));
    }
    let herm = linalg::hermiticity_defect(mask);
    if herm > tol.hermitian {
        return Err(Error::MaskNotPSD {
            min_eigenvalue: f64::NAN,
        });
    }
    let min = linalg::min_eigenvalue(mask);
    if min < -tol.psd {
        return Err(Error::MaskNotPSD {
            min_eigenvalue: min,
        });
    }
    for i in 0..n {
        let d = mask[(i, i)];
        if (d.re - 1.0).abs() > tol.trace || d.im.abs() > tol.hermitian {
            return Err(Error::DiagonalNotUnit {
                index: i,
                value: d.re,
            });
        }
    }
    Ok(())
}

/// The Hadamard channel `ρ ↦ M ∗ ρ` with Kraus operators `diag(√λ_k v_k)`
/// from the spectral decomposition `M = Σ λ_k v_k v_k†`.
pub fn hadamard_channel(mask: &CMatrix) -> Result<Channel> {
    let n = mask.nrows();
    validate_mask(mask, n)?;
    let eig = linalg::eigh(mask);
    let kraus: Vec<CMatrix> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, &l)| {
            let s = l.sqrt();
            CMatrix::from_fn(n, n, |a, b| {
                if a == b {
                    eig.vectors[(a, k)] * s
                } else {
                    linalg::ZERO
                }
            })
        })
        .collect();
    Channel::new(n, n, kraus)
}

/// `log₂ n − S(M/n)` for a positive unit-diagonal mask.
pub fn hadamard_bound(mask: &CMatrix, n: usize) -> Result<f64> {
    validate_mask(mask, n)?;
    let psd = Tolerances::default().psd;
    let probs: Vec<f64> = linalg::eigvalsh(mask)
        .into_iter()
        .map(|l| {
            if l < 0.0 && l >= -psd {
                0.0
            } else {
                l / n as f64
            }
        })
        .collect();
    Ok((n as f64).log2() - shannon_bits(&probs))
}

/// `|I_c(M ∗ ·, 1/n) − (log₂ n − S(M/n))|`; vanishes up to roundoff.
pub fn verify_hqc(mask: &CMatrix, n: usize) -> Result<f64> {
    let bound = hadamard_bound(mask, n)?;
    let channel = hadamard_channel(mask)?;
    let ci = coherent_information(&channel, &DensityMatrix::maximally_mixed(n))?;
    Ok((ci - bound).abs())
}

/// Report for a Hadamard channel evaluated at the maximally mixed input.
pub fn hadamard_report(mask: &CMatrix) -> Result<CapacityReport> {
    let n = mask.nrows();
    let bound = hadamard_bound(mask, n)?;
    let ci = coherent_information(&hadamard_channel(mask)?, &DensityMatrix::maximally_mixed(n))?;
    Ok(CapacityReport {
        coherent_information: ci,
        hadamard_bound: Some(bound),
        input_dim: n,
    })
}

pub fn channel_report(channel: &Channel, rho: &DensityMatrix) -> Result<CapacityReport> {
    Ok(CapacityReport {
        coherent_information: coherent_information(channel, rho)?,
        hadamard_bound: None,
        input_dim: channel.dim_in(),
    })
}

/// The 2×2 mask `[[1, c], [c, 1]]`.
pub fn qubit_mask(coherence: f64) -> CMatrix {
    CMatrix::from_fn(2, 2, |a, b| {
        if a == b {
            c(1.0, 0.0)
        } else {
            c(coherence, 0.0)
        }
    })
}
