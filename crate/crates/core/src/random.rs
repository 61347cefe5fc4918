//! Random states, masks and channels for property tests and fixtures.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::covariant::{project_to_covariant, Spectrum};
use crate::error::Result;
use crate::matcore::linalg::{self, c, CMatrix, CVector};
use crate::matcore::{Channel, DensityMatrix};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    let v = ginibre(n, 1, rng).column(0).into_owned();
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, k)] *= phase;
            }
        }
    }
    q
}

/// Positive semidefinite `G G†` with a square Ginibre `G`.
pub fn random_psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    &g * g.adjoint()
}

/// Density matrix of rank `min(rank, n)`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(n, rank.clamp(1, n), rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    DensityMatrix::new(linalg::hermitian_part(&m.scale(1.0 / tr))).expect("Wishart state is valid")
}

/// Positive mask with unit diagonal, `D^{−1/2} P D^{−1/2}` for a random PSD `P`.
pub fn random_unit_diagonal_mask<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let rank = rng.random_range(1..=n);
    let g = ginibre(n, rank, rng);
    let p = &g * g.adjoint();
    let scale: Vec<f64> = (0..n).map(|i| 1.0 / p[(i, i)].re.sqrt()).collect();
    let mut m = CMatrix::from_fn(n, n, |a, b| p[(a, b)] * scale[a] * scale[b]);
    for i in 0..n {
        m[(i, i)] = c(1.0, 0.0);
    }
    linalg::hermitian_part(&m)
}

/// CPTP channel with `n_kraus` operators, `A_j = B_j (Σ B†B)^{−1/2}`.
/// Needs `n_kraus · dim_out ≥ dim_in` for the Gram matrix to be invertible.
pub fn random_cptp<R: Rng + ?Sized>(
    dim_in: usize,
    dim_out: usize,
    n_kraus: usize,
    rng: &mut R,
) -> Channel {
    let raw: Vec<CMatrix> = (0..n_kraus.max(1))
        .map(|_| ginibre(dim_out, dim_in, rng))
        .collect();
    let mut gram = CMatrix::zeros(dim_in, dim_in);
    for b in &raw {
        gram += b.adjoint() * b;
    }
    let inv_sqrt = linalg::hermitian_function(&gram, |x| c(1.0 / x.sqrt(), 0.0));
    Channel::new(dim_in, dim_out, raw.iter().map(|b| b * &inv_sqrt).collect())
        .expect("shapes are consistent")
}

/// Random covariant CPTP channel: a random channel with its cross-sector
/// Choi entries removed.
pub fn random_covariant<R: Rng + ?Sized>(
    spectrum: &Spectrum,
    n_kraus: usize,
    rng: &mut R,
) -> Result<Channel> {
    let n = spectrum.dim();
    let g = random_cptp(n, n, n_kraus, rng);
    Ok(project_to_covariant(&g, spectrum)?.0)
}

/// Spectrum of `n` levels with random positive gaps.
pub fn random_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Spectrum {
    let mut energies = Vec::with_capacity(n);
    let mut w: f64 = rng.random_range(-1.0..1.0);
    for _ in 0..n {
        energies.push(w);
        w += rng.random_range(0.2..1.5);
    }
    Spectrum::new(energies).expect("gaps exceed the match tolerance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_objects() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(4, &mut rng);
        assert!(linalg::frobenius_distance(&(u.adjoint() * &u), &linalg::identity(4)) < 1e-12);
        let g = random_cptp(3, 3, 4, &mut rng);
        assert!(g.cptp_report().holds(1e-12));
        let m = random_unit_diagonal_mask(5, &mut rng);
        assert!(linalg::min_eigenvalue(&m) > -1e-12);
        let s = random_spectrum(4, &mut rng);
        let cov = random_covariant(&s, 3, &mut rng).unwrap();
        assert!(cov.cptp_report().holds(1e-10));
        assert!(crate::covariant::covariance_defect(&cov, &s).unwrap() < 1e-12);
    }
}
