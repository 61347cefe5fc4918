use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::linalg::{self, CMatrix};
use crate::matcore::{Channel, DensityMatrix};

/// Non-degenerate energy spectrum `ω₁ < ω₂ < … < ωₙ` of a diagonal
/// Hamiltonian, together with the tolerance under which two energies (or
/// two energy differences) are considered equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    energies: Vec<f64>,
    match_tol: f64,
}

const MIN_MATCH_TOL: f64 = 1e-15;

impl Spectrum {
    /// Spectrum with the default match tolerance `1e-9 · max|ω|`.
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        let scale = energies.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        Self::with_match_tol(energies, (1e-9 * scale).max(MIN_MATCH_TOL))
    }

    pub fn with_match_tol(energies: Vec<f64>, match_tol: f64) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidSpectrum("no energies".into()));
        }
        if !(match_tol.is_finite() && match_tol >= 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "match tolerance {match_tol}"
            )));
        }
        if energies.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite energy".into()));
        }
        for w in energies.windows(2) {
            if (w[1] - w[0]).abs() <= match_tol {
                return Err(Error::DegenerateSpectrum(w[0], w[1]));
            }
            if w[1] < w[0] {
                return Err(Error::InvalidSpectrum(format!(
                    "energies must be increasing ({} before {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self {
            energies,
            match_tol,
        })
    }

    /// Equally spaced levels `0, 1, …, dim−1` (a truncated oscillator).
    pub fn integer(dim: usize) -> Self {
        Self::new((0..dim).map(|k| k as f64).collect()).expect("integer spectrum is valid")
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn match_tol(&self) -> f64 {
        self.match_tol
    }

    pub fn same(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.match_tol
    }

    /// Index of the level with energy `w`, if any.
    pub fn index_of(&self, w: f64) -> Option<usize> {
        let pos = self.energies.partition_point(|&e| e < w - self.match_tol);
        (pos < self.energies.len() && self.same(self.energies[pos], w)).then_some(pos)
    }

    /// Index of the level reached from level `j` by the energy shift `sigma`.
    pub fn shifted(&self, j: usize, sigma: f64) -> Option<usize> {
        self.index_of(self.energies[j] + sigma)
    }

    /// Sorted distinct energy differences `ω_j − ω_k`, clustered within the
    /// match tolerance. Always contains 0.
    pub fn energy_differences(&self) -> Vec<f64> {
        let mut diffs: Vec<f64> = self
            .energies
            .iter()
            .flat_map(|a| self.energies.iter().map(move |b| a - b))
            .collect();
        diffs.sort_by(f64::total_cmp);
        let mut clusters: Vec<Vec<f64>> = Vec::new();
        for d in diffs {
            match clusters.last_mut() {
                Some(cl) if (d - cl[0]).abs() <= self.match_tol => cl.push(d),
                _ => clusters.push(vec![d]),
            }
        }
        clusters
            .into_iter()
            .map(|cl| {
                if cl.contains(&0.0) {
                    0.0
                } else {
                    cl.iter().sum::<f64>() / cl.len() as f64
                }
            })
            .collect()
    }

    /// Representative of the energy-difference cluster containing `sigma`.
    pub fn canonical_difference(&self, sigma: f64) -> Option<f64> {
        self.energy_differences()
            .into_iter()
            .find(|&d| self.same(d, sigma))
    }

    /// `e^{−iHt} = diag(e^{−iω_j t})`.
    pub fn evolution(&self, t: f64) -> CMatrix {
        let n = self.dim();
        let mut u = CMatrix::zeros(n, n);
        for (j, &w) in self.energies.iter().enumerate() {
            u[(j, j)] = Complex64::from_polar(1.0, -w * t);
        }
        u
    }

    /// Phases `ω_j·t mod 2π` spread: zero iff `e^{−iHt}` is proportional to
    /// the identity.
    pub fn periodicity_defect(&self, period: f64) -> f64 {
        let ref_phase = self.energies[0] * period;
        self.energies
            .iter()
            .map(|w| {
                let d = (w * period - ref_phase).rem_euclid(std::f64::consts::TAU);
                d.min(std::f64::consts::TAU - d)
            })
            .fold(0.0, f64::max)
    }

    fn check_dim(&self, n: usize, what: &str) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{what} dimension {n} vs spectrum dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_channel(&self, channel: &Channel) -> Result<()> {
        if !channel.is_square() {
            return Err(Error::DimensionMismatch("channel must be square".into()));
        }
        self.check_dim(channel.dim_in(), "channel")
    }

    pub(crate) fn check_operator(&self, m: &CMatrix) -> Result<()> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator shape {:?} is not square",
                m.shape()
            )));
        }
        self.check_dim(m.nrows(), "operator")
    }
}

/// `α_t(ρ) = e^{−iHt} ρ e^{iHt}`.
pub fn evolve(spectrum: &Spectrum, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(evolve_operator(
        spectrum,
        t,
        rho.matrix(),
    )?))
}

pub fn evolve_operator(spectrum: &Spectrum, t: f64, x: &CMatrix) -> Result<CMatrix> {
    spectrum.check_operator(x)?;
    let u = spectrum.evolution(t);
    Ok(&u * x * u.adjoint())
}

/// Energy differences of a spectrum; see [`Spectrum::energy_differences`].
pub fn energy_differences(spectrum: &Spectrum) -> Vec<f64> {
    spectrum.energy_differences()
}

/// Largest Choi entry whose row and column belong to different energy
/// sectors, i.e. with `ω_{j'} − ω_j ≠ ω_{k'} − ω_k`. Zero iff the channel
/// commutes with the time evolution.
pub fn covariance_defect(channel: &Channel, spectrum: &Spectrum) -> Result<f64> {
    spectrum.check_channel(channel)?;
    let n = spectrum.dim();
    let w = spectrum.energies();
    let choi = channel.choi();
    let shift_of = |idx: usize| w[idx / n] - w[idx % n];
    let mut worst: f64 = 0.0;
    for row in 0..n * n {
        for col in 0..n * n {
            if !spectrum.same(shift_of(row), shift_of(col)) {
                worst = worst.max(choi.matrix()[(row, col)].norm());
            }
        }
    }
    Ok(worst)
}

/// Zeroes every cross-sector Choi entry and rebuilds a Kraus family.
///
/// The result is covariant, completely positive whenever the input is, and
/// trace preserving whenever the input is, because the trace condition
/// only involves same-sector entries. Returns the channel together with
/// the Frobenius norm of the removed entries.
pub fn project_to_covariant(channel: &Channel, spectrum: &Spectrum) -> Result<(Channel, f64)> {
    spectrum.check_channel(channel)?;
    let n = spectrum.dim();
    let w = spectrum.energies();
    let choi = channel.choi();
    let shift_of = |idx: usize| w[idx / n] - w[idx % n];
    let mut projected = choi.matrix().clone();
    let mut removed = 0.0;
    for row in 0..n * n {
        for col in 0..n * n {
            if !spectrum.same(shift_of(row), shift_of(col)) {
                removed += projected[(row, col)].norm_sqr();
                projected[(row, col)] = linalg::ZERO;
            }
        }
    }
    let choi = crate::matcore::ChoiMatrix::new(n, n, projected)?;
    Ok((choi.to_channel(1e-14)?, f64::sqrt(removed)))
}
