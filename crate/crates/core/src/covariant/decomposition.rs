//! Canonical decomposition of a covariant channel into partial shifts and
//! Hadamard dephasing masks, `G(ρ) = Σ_σ S_σ (M_σ ∗ ρ) S_σ†`.

use crate::covariant::spectrum::{covariance_defect, Spectrum};
use crate::error::{Error, Result};
use crate::matcore::linalg::{self, CMatrix, ONE, ZERO};
use crate::matcore::{Channel, DensityMatrix, Tolerances};

/// The 0/1 partial permutation `S_σ = Σ_{j ∈ dom σ} |idx(ω_j + σ)⟩⟨j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialShift {
    sigma: f64,
    matrix: CMatrix,
    /// Input levels `j` for which `ω_j + σ` is again a level.
    domain: Vec<usize>,
    /// `targets[k]` is the level reached from `domain[k]`.
    targets: Vec<usize>,
}

impl PartialShift {
    pub fn new(spectrum: &Spectrum, sigma: f64) -> Self {
        let n = spectrum.dim();
        let mut matrix = CMatrix::zeros(n, n);
        let mut domain = Vec::new();
        let mut targets = Vec::new();
        for j in 0..n {
            if let Some(t) = spectrum.shifted(j, sigma) {
                matrix[(t, j)] = ONE;
                domain.push(j);
                targets.push(t);
            }
        }
        Self {
            sigma,
            matrix,
            domain,
            targets,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Projector `S_σ† S_σ` onto the domain.
    pub fn domain_projector(&self) -> CMatrix {
        self.matrix.adjoint() * &self.matrix
    }

    /// Projector `S_σ S_σ†` onto the range.
    pub fn range_projector(&self) -> CMatrix {
        &self.matrix * self.matrix.adjoint()
    }
}

/// Dephasing mask of one sector, zero outside `dom σ × dom σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMask {
    pub sigma: f64,
    pub mask: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub shift: PartialShift,
    pub mask: SectorMask,
}

impl Sector {
    pub fn sigma(&self) -> f64 {
        self.shift.sigma
    }

    /// Principal submatrix of the mask on the shift domain.
    pub fn domain_mask(&self) -> CMatrix {
        linalg::principal_submatrix(&self.mask.mask, &self.shift.domain)
    }

    /// Kraus operators `S_σ · diag(d)` with `M_σ = Σ d d†`.
    fn kraus(&self, tol: &Tolerances) -> Result<Vec<CMatrix>> {
        let dom = &self.shift.domain;
        if dom.is_empty() {
            return Ok(Vec::new());
        }
        let eig = linalg::eigh(&self.domain_mask());
        if eig.min() < -tol.psd {
            return Err(Error::MaskNotPSD {
                min_eigenvalue: eig.min(),
            });
        }
        let n = self.mask.mask.nrows();
        let mut out = Vec::new();
        for (k, &l) in eig.values.iter().enumerate() {
            if l <= 0.0 {
                continue;
            }
            let s = l.sqrt();
            let mut a = CMatrix::zeros(n, n);
            for (pos, (&j, &t)) in dom.iter().zip(&self.shift.targets).enumerate() {
                a[(t, j)] = eig.vectors[(pos, k)] * s;
            }
            out.push(a);
        }
        Ok(out)
    }
}

/// The canonical family `σ ↦ (S_σ, M_σ)` over the energy differences
/// present in a covariant channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition {
    spectrum: Spectrum,
    sectors: Vec<Sector>,
}

impl SectorDecomposition {
    /// Assembles a decomposition from `(σ, mask)` pairs.
    ///
    /// Each σ must be an energy difference of the spectrum; masks must be
    /// Hermitian and vanish outside their domain. Positivity is checked
    /// lazily by [`reconstruct`] and [`SectorDecomposition::min_mask_eigenvalue`].
    pub fn new(spectrum: Spectrum, masks: Vec<(f64, CMatrix)>) -> Result<Self> {
        let tol = Tolerances::default();
        let n = spectrum.dim();
        let mut sectors: Vec<Sector> = Vec::with_capacity(masks.len());
        for (sigma, mut mask) in masks {
            let sigma = spectrum
                .canonical_difference(sigma)
                .ok_or(Error::UnknownSector(sigma))?;
            if sectors.iter().any(|s| s.sigma() == sigma) {
                return Err(Error::InvalidParameter(format!("duplicate sector {sigma}")));
            }
            if mask.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "mask for sector {sigma} has shape {:?}, expected ({n}, {n})",
                    mask.shape()
                )));
            }
            let herm = linalg::hermiticity_defect(&mask);
            if herm > tol.hermitian {
                return Err(Error::InvalidParameter(format!(
                    "mask for sector {sigma} is not Hermitian (defect {herm:e})"
                )));
            }
            let shift = PartialShift::new(&spectrum, sigma);
            let mut in_domain = vec![false; n];
            for &j in shift.domain() {
                in_domain[j] = true;
            }
            for a in 0..n {
                for b in 0..n {
                    if !(in_domain[a] && in_domain[b]) {
                        if mask[(a, b)].norm() > tol.hermitian {
                            return Err(Error::InvalidParameter(format!(
                                "mask for sector {sigma} has support outside its domain at ({a}, {b})"
                            )));
                        }
                        mask[(a, b)] = ZERO;
                    }
                }
            }
            sectors.push(Sector {
                shift,
                mask: SectorMask { sigma, mask },
            });
        }
        sectors.sort_by(|a, b| a.sigma().total_cmp(&b.sigma()));
        Ok(Self { spectrum, sectors })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.sectors.iter().map(Sector::sigma).collect()
    }

    pub fn sector(&self, sigma: f64) -> Result<&Sector> {
        self.sectors
            .iter()
            .find(|s| self.spectrum.same(s.sigma(), sigma))
            .ok_or(Error::UnknownSector(sigma))
    }

    pub fn mask(&self, sigma: f64) -> Result<&CMatrix> {
        Ok(&self.sector(sigma)?.mask.mask)
    }

    /// Adds `delta` to the diagonal entry `M_σ(level, level)`; the level
    /// must lie in the sector's domain.
    pub fn perturb_diagonal(&mut self, sigma: f64, level: usize, delta: f64) -> Result<()> {
        let idx = self
            .sectors
            .iter()
            .position(|s| self.spectrum.same(s.sigma(), sigma))
            .ok_or(Error::UnknownSector(sigma))?;
        let sector = &mut self.sectors[idx];
        if !sector.shift.domain.contains(&level) {
            return Err(Error::InvalidParameter(format!(
                "level {level} is outside the domain of sector {sigma}"
            )));
        }
        sector.mask.mask[(level, level)] += linalg::c(delta, 0.0);
        Ok(())
    }

    /// `Σ_σ M_σ(ω, ω)` for every level ω; all ones iff the channel is
    /// trace preserving.
    pub fn diagonal_sums(&self) -> Vec<f64> {
        let n = self.spectrum.dim();
        (0..n)
            .map(|j| self.sectors.iter().map(|s| s.mask.mask[(j, j)].re).sum())
            .collect()
    }

    pub fn tp_defect(&self) -> f64 {
        self.diagonal_sums()
            .iter()
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue over all mask domain submatrices.
    pub fn min_mask_eigenvalue(&self) -> f64 {
        self.sectors
            .iter()
            .filter(|s| !s.shift.domain.is_empty())
            .map(|s| linalg::min_eigenvalue(&s.domain_mask()))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Extracts the canonical decomposition from the Choi matrix,
/// `M_σ(ω_j, ω_k) = ⟨j+σ| G(|j⟩⟨k|) |k+σ⟩`.
///
/// Channels whose covariance defect is at most `tol` are accepted; their
/// cross-sector Choi entries are discarded (sector projection). Sectors
/// whose mask vanishes identically are omitted.
pub fn decompose(channel: &Channel, spectrum: &Spectrum, tol: f64) -> Result<SectorDecomposition> {
    let defect = covariance_defect(channel, spectrum)?;
    if defect > tol {
        return Err(Error::NotCovariant { defect, tol });
    }
    let n = spectrum.dim();
    let choi = channel.choi();
    let tols = Tolerances::default();
    let mut masks = Vec::new();
    for sigma in spectrum.energy_differences() {
        let shift = PartialShift::new(spectrum, sigma);
        let mut mask = CMatrix::zeros(n, n);
        for (&j, &jp) in shift.domain().iter().zip(shift.targets()) {
            for (&k, &kp) in shift.domain().iter().zip(shift.targets()) {
                mask[(j, k)] = choi.entry(jp, j, kp, k);
            }
        }
        if linalg::max_abs(&mask) <= SECTOR_ZERO {
            continue;
        }
        let mask = linalg::hermitian_part(&mask);
        let min = linalg::min_eigenvalue(&linalg::principal_submatrix(&mask, shift.domain()));
        if min < -tols.psd {
            return Err(Error::NotCP {
                min_eigenvalue: min,
            });
        }
        masks.push((sigma, mask));
    }
    SectorDecomposition::new(spectrum.clone(), masks)
}

const SECTOR_ZERO: f64 = 1e-15;

/// Kraus family `{S_σ · diag(d)}` over all sectors, with `M_σ = Σ d d†`.
pub fn reconstruct(decomp: &SectorDecomposition) -> Result<Channel> {
    let tol = Tolerances::default();
    let n = decomp.spectrum.dim();
    let mut kraus = Vec::new();
    for s in &decomp.sectors {
        kraus.extend(s.kraus(&tol)?);
    }
    if kraus.is_empty() {
        kraus.push(CMatrix::zeros(n, n));
    }
    Channel::new(n, n, kraus)
}

/// The CP (possibly trace-decreasing) part `ρ ↦ S_σ (M_σ ∗ ρ) S_σ†`.
pub fn sector_channel(decomp: &SectorDecomposition, sigma: f64) -> Result<Channel> {
    let n = decomp.spectrum.dim();
    let mut kraus = decomp.sector(sigma)?.kraus(&Tolerances::default())?;
    if kraus.is_empty() {
        kraus.push(CMatrix::zeros(n, n));
    }
    Channel::new(n, n, kraus)
}

/// Applies one sector directly from its mask, valid for any operator.
pub fn apply_sector(decomp: &SectorDecomposition, sigma: f64, x: &CMatrix) -> Result<CMatrix> {
    decomp.spectrum.check_operator(x)?;
    let s = decomp.sector(sigma)?;
    let masked = linalg::hadamard(&s.mask.mask, x)?;
    Ok(s.shift.matrix() * masked * s.shift.matrix().adjoint())
}

/// Probabilities `p(σ) = tr G_σ(ρ)` of the energy shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyShiftDistribution {
    pub pairs: Vec<(f64, f64)>,
}

impl EnergyShiftDistribution {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(sigma, p) in &pairs {
            if !(sigma.is_finite() && p.is_finite()) || p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "invalid shift probability ({sigma}, {p})"
                )));
            }
        }
        Ok(Self { pairs })
    }

    pub fn total(&self) -> f64 {
        self.pairs.iter().map(|(_, p)| p).sum()
    }

    pub fn probability(&self, sigma: f64, tol: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|(s, _)| (s - sigma).abs() <= tol)
            .map(|(_, p)| p)
            .sum()
    }
}

pub fn shift_distribution(
    decomp: &SectorDecomposition,
    rho: &DensityMatrix,
) -> Result<EnergyShiftDistribution> {
    decomp.spectrum.check_operator(rho.matrix())?;
    let psd = Tolerances::default().psd;
    let mut pairs = Vec::with_capacity(decomp.sectors.len());
    for s in &decomp.sectors {
        let out = apply_sector(decomp, s.sigma(), rho.matrix())?;
        let p = linalg::trace(&out).re;
        if p < -psd {
            return Err(Error::MaskNotPSD { min_eigenvalue: p });
        }
        pairs.push((s.sigma(), p.clamp(0.0, 1.0)));
    }
    Ok(EnergyShiftDistribution { pairs })
}
