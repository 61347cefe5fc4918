//! Reliable timing and the circulant Hadamard channel it induces.
//!
//! If the outputs of `ρ = |φ₀⟩⟨φ₀|` and of its time translates
//! `α_{sj}(ρ)`, `j = 0, …, N−1`, are mutually orthogonal and the dynamics
//! has period `sN`, then the channel restricted to the orbit is a Hadamard
//! channel with circulant mask `V_{jk} = v(j − k)`, where
//! `v(j) = tr(U_{sj} P G(|φ₀⟩⟨φ_{sj}|))`. Its coherent information is
//! `log₂ N − S(q)`, with `q` the discrete Fourier transform of `v`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::covariant::{EnergyShiftDistribution, PartialShift, Spectrum};
use crate::error::{Error, Result};
use crate::matcore::entropy::shannon_bits;
use crate::matcore::linalg::{self, CMatrix, CVector};
use crate::matcore::{Channel, DensityMatrix, Tolerances};

/// Phase tolerance of the periodicity check `e^{−iH sN} ∝ 1`.
pub const PERIOD_PHASE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TimingChannelReport {
    /// Number of orbit points `N`.
    pub steps: usize,
    /// Time step `s`.
    pub s: f64,
    /// Coherence vector `v(0), …, v(N−1)`.
    pub v: Vec<Complex64>,
    /// Eigenvalues of `V/N`, `q_k = (1/N) Σ_j v(j) e^{−2πijk/N}`.
    pub q: Vec<f64>,
    /// `log₂ N − S(q)` in bits.
    pub bound: f64,
    /// Largest `tr(G(ρ_{sj}) G(ρ_{sk}))` over `j ≠ k`.
    pub orthogonality_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingCheck {
    /// `tr(G(ρ) G(ρ_s))`, zero iff the outputs are orthogonal.
    pub defect: f64,
    pub holds: bool,
}

fn normalized_state(spectrum: &Spectrum, phi0: &CVector) -> Result<DensityMatrix> {
    if phi0.len() != spectrum.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state length {} vs spectrum dimension {}",
            phi0.len(),
            spectrum.dim()
        )));
    }
    let norm = phi0.norm();
    if (norm - 1.0).abs() > Tolerances::default().trace {
        return Err(Error::InvalidParameter(format!(
            "initial state has norm {norm}"
        )));
    }
    DensityMatrix::pure(phi0)
}

fn overlap(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::trace(&(a * b)).re.max(0.0)
}

/// Orthogonality defect `tr(G(ρ) G(α_s(ρ)))` for `ρ = |φ₀⟩⟨φ₀|`.
pub fn is_reliable_timing(
    channel: &Channel,
    spectrum: &Spectrum,
    phi0: &CVector,
    s: f64,
    tol: f64,
) -> Result<TimingCheck> {
    if !channel.is_square() || channel.dim_in() != spectrum.dim() {
        return Err(Error::DimensionMismatch(
            "channel and spectrum dimensions differ".into(),
        ));
    }
    let rho = normalized_state(spectrum, phi0)?;
    let out = channel.apply_operator(rho.matrix())?;
    let moved = crate::covariant::evolve_operator(spectrum, s, rho.matrix())?;
    let out_s = channel.apply_operator(&moved)?;
    let defect = overlap(&out, &out_s);
    Ok(TimingCheck {
        defect,
        holds: defect <= tol,
    })
}

/// Coherence vector `v(j) = Σ_σ p(σ) e^{−iσsj}` from the energy-shift
/// distribution of the initial state.
pub fn v_from_distribution(dist: &EnergyShiftDistribution, s: f64, steps: usize) -> Vec<Complex64> {
    (0..steps)
        .map(|j| {
            dist.pairs
                .iter()
                .map(|&(sigma, p)| Complex64::from_polar(p, -sigma * s * j as f64))
                .sum()
        })
        .collect()
}

/// Circulant matrix `V_{jk} = v((j − k) mod N)`.
pub fn circulant(v: &[Complex64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |j, k| v[(j + n - k) % n])
}

/// `q_k = (1/N) Σ_j v(j) e^{−2πijk/N}`, real parts.
pub fn dft_spectrum(v: &[Complex64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|k| {
            let sum: Complex64 = v
                .iter()
                .enumerate()
                .map(|(j, &vj)| {
                    vj * Complex64::from_polar(1.0, -TAU * (j * k % n) as f64 / n as f64)
                })
                .sum();
            sum.re / n as f64
        })
        .collect()
}

/// `log₂ N − S(q)`, with roundoff negatives of `q` clipped to zero.
pub fn timing_bound(q: &[f64]) -> f64 {
    let clipped: Vec<f64> = q.iter().map(|&x| x.max(0.0)).collect();
    (q.len() as f64).log2() - shannon_bits(&clipped)
}

/// Assembles a report from a coherence vector.
pub fn report_from_v(v: Vec<Complex64>, s: f64, orthogonality_defect: f64) -> TimingChannelReport {
    let q = dft_spectrum(&v);
    TimingChannelReport {
        steps: v.len(),
        s,
        bound: timing_bound(&q),
        v,
        q,
        orthogonality_defect,
    }
}

/// Support projector of a PSD matrix: eigenvectors whose eigenvalue
/// exceeds `rel_tol` times the largest one.
pub fn support_projector(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let eig = linalg::eigh(m);
    let cutoff = rel_tol * eig.max().max(0.0);
    let n = m.nrows();
    let mut p = CMatrix::zeros(n, n);
    for (k, &l) in eig.values.iter().enumerate() {
        if l > cutoff {
            let v = eig.vector(k);
            p += &v * v.adjoint();
        }
    }
    p
}

pub fn timing_channel(
    channel: &Channel,
    spectrum: &Spectrum,
    phi0: &CVector,
    s: f64,
    steps: usize,
    tol: f64,
) -> Result<TimingChannelReport> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "need at least one orbit point".into(),
        ));
    }
    if !channel.is_square() || channel.dim_in() != spectrum.dim() {
        return Err(Error::DimensionMismatch(
            "channel and spectrum dimensions differ".into(),
        ));
    }
    let rho = normalized_state(spectrum, phi0)?;
    let phase_defect = spectrum.periodicity_defect(s * steps as f64);
    if phase_defect > PERIOD_PHASE_TOL {
        return Err(Error::NotPeriodic { phase_defect });
    }

    let outputs: Vec<CMatrix> = (0..steps)
        .map(|j| {
            let moved = crate::covariant::evolve_operator(spectrum, s * j as f64, rho.matrix())?;
            channel.apply_operator(&moved)
        })
        .collect::<Result<_>>()?;
    let mut defect: f64 = 0.0;
    for j in 0..steps {
        for k in j + 1..steps {
            defect = defect.max(overlap(&outputs[j], &outputs[k]));
        }
    }
    if defect > tol {
        return Err(Error::NotReliableTiming { defect, tol });
    }

    let p = support_projector(&outputs[0], Tolerances::default().psd);
    let v = (0..steps)
        .map(|j| {
            let u = spectrum.evolution(s * j as f64);
            let phi_j = &u * phi0;
            let coherence = phi0 * phi_j.adjoint();
            let out = channel.apply_operator(&coherence)?;
            Ok(linalg::trace(&(u * &p * out)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report_from_v(v, s, defect))
}

/// A mixture of partial shifts `ρ ↦ Σ_j p_j S_{σ_j} ρ S_{σ_j}†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftMixture {
    pub channel: Channel,
    /// Levels on which every shift with `p_j > 0` acts isometrically; the
    /// channel is trace preserving on their span.
    pub tp_subspace: Vec<usize>,
    pub trace_preserving: bool,
}

pub fn build_shift_mixture(spectrum: &Spectrum, shifts: &[(f64, f64)]) -> Result<ShiftMixture> {
    if shifts.is_empty() {
        return Err(Error::InvalidParameter("no shifts".into()));
    }
    let total: f64 = shifts.iter().map(|(_, p)| p).sum();
    if shifts.iter().any(|&(_, p)| !p.is_finite() || p < 0.0)
        || (total - 1.0).abs() > Tolerances::default().trace
    {
        return Err(Error::InvalidParameter(format!(
            "shift probabilities must be non-negative and sum to 1 (sum {total})"
        )));
    }
    let n = spectrum.dim();
    let mut kraus = Vec::with_capacity(shifts.len());
    let mut covered = vec![true; n];
    for &(sigma, p) in shifts {
        let sigma = spectrum
            .canonical_difference(sigma)
            .ok_or(Error::UnknownSector(sigma))?;
        let shift = PartialShift::new(spectrum, sigma);
        if p > 0.0 {
            let mut in_domain = vec![false; n];
            for &j in shift.domain() {
                in_domain[j] = true;
            }
            for (c, d) in covered.iter_mut().zip(in_domain) {
                *c &= d;
            }
        }
        kraus.push(shift.matrix().scale(p.sqrt()));
    }
    let tp_subspace: Vec<usize> = (0..n).filter(|&j| covered[j]).collect();
    Ok(ShiftMixture {
        channel: Channel::new(n, n, kraus)?,
        trace_preserving: tp_subspace.len() == n,
        tp_subspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::{covariance_defect, decompose, shift_distribution};
    use crate::matcore::linalg::c;
    use std::f64::consts::PI;

    fn plus() -> CVector {
        CVector::from_vec(vec![c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)])
    }

    fn low_plus(n: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[0] = c(0.5f64.sqrt(), 0.0);
        v[1] = c(0.5f64.sqrt(), 0.0);
        v
    }

    #[test]
    fn reliable_timing_examples() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let id = is_reliable_timing(&Channel::identity(2), &s, &plus(), PI, 1e-12).unwrap();
        assert!(id.defect < 1e-15 && id.holds);
        let deph = is_reliable_timing(&Channel::dephasing(2), &s, &plus(), PI, 1e-12).unwrap();
        assert!((deph.defect - 0.5).abs() < 1e-15 && !deph.holds);

        let s4 = Spectrum::integer(4);
        let mix = build_shift_mixture(&s4, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
        let chk = is_reliable_timing(&mix.channel, &s4, &low_plus(4), PI, 1e-12).unwrap();
        assert!(chk.defect < 1e-12);
    }

    #[test]
    fn shift_mixture_examples() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let id = build_shift_mixture(&s, &[(0.0, 1.0)]).unwrap();
        assert!(id.trace_preserving);
        assert!(id.channel.choi().distance(&Channel::identity(2).choi()) < 1e-15);

        let s4 = Spectrum::integer(4);
        let mix = build_shift_mixture(&s4, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
        assert!(!mix.trace_preserving);
        assert_eq!(mix.tp_subspace, vec![0, 1]);
        assert!(covariance_defect(&mix.channel, &s4).unwrap() < 1e-15);

        let up = build_shift_mixture(&s, &[(1.0, 1.0)]).unwrap();
        assert_eq!(up.tp_subspace, vec![0]);
        let lost = up.channel.apply(&DensityMatrix::basis(2, 1)).unwrap();
        assert!(linalg::trace(lost.matrix()).norm() < 1e-15);

        assert!(build_shift_mixture(&s, &[(0.0, 0.7)]).is_err());
        assert!(matches!(
            build_shift_mixture(&s, &[(0.5, 1.0)]),
            Err(Error::UnknownSector(_))
        ));
    }

    #[test]
    fn timing_identity_qubit() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let r = timing_channel(&Channel::identity(2), &s, &plus(), PI, 2, 1e-12).unwrap();
        assert!((r.v[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r.v[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r.q[0] - 1.0).abs() < 1e-12 && r.q[1].abs() < 1e-12);
        assert!((r.bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn timing_dephasing_fails() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let err = timing_channel(&Channel::dephasing(2), &s, &plus(), PI, 2, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotReliableTiming { .. }));
    }

    #[test]
    fn timing_requires_periodicity() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let err = timing_channel(&Channel::identity(2), &s, &plus(), 1.0, 2, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotPeriodic { .. }));
    }

    #[test]
    fn timing_shift_mixture_matches_distribution() {
        let s4 = Spectrum::integer(4);
        let mix = build_shift_mixture(&s4, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
        let r = timing_channel(&mix.channel, &s4, &low_plus(4), PI, 2, 1e-12).unwrap();
        assert!((r.v[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r.bound - 1.0).abs() < 1e-12);

        let d = decompose(&mix.channel, &s4, 1e-12).unwrap();
        let rho = DensityMatrix::pure(&low_plus(4)).unwrap();
        let dist = shift_distribution(&d, &rho).unwrap();
        let v = v_from_distribution(&dist, PI, 2);
        for (a, b) in v.iter().zip(&r.v) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn v_from_distribution_examples() {
        let point = EnergyShiftDistribution::new(vec![(0.0, 1.0)]).unwrap();
        for z in v_from_distribution(&point, 0.37, 5) {
            assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        }
        let even = EnergyShiftDistribution::new(vec![(0.0, 0.5), (2.0, 0.5)]).unwrap();
        let v = v_from_distribution(&even, PI, 2);
        assert!((v[1] - c(1.0, 0.0)).norm() < 1e-15);
        let odd = EnergyShiftDistribution::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let v = v_from_distribution(&odd, PI, 2);
        assert!(v[1].norm() < 1e-15);
        let r = report_from_v(v, PI, 0.0);
        assert!(r.bound.abs() < 1e-12);
    }

    #[test]
    fn circulant_spectrum_is_dft() {
        let v = vec![c(1.0, 0.0), c(0.3, 0.1), c(0.2, 0.0), c(0.3, -0.1)];
        let q = dft_spectrum(&v);
        let mut eig = linalg::eigvalsh(&circulant(&v).scale(0.25));
        eig.sort_by(f64::total_cmp);
        let mut q_sorted = q.clone();
        q_sorted.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&q_sorted) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_extremes() {
        assert!((timing_bound(&[1.0, 0.0, 0.0, 0.0]) - 2.0).abs() < 1e-15);
        assert!(timing_bound(&[0.25; 4]).abs() < 1e-15);
    }
}
