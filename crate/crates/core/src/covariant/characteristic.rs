//! The characteristic function `f_{K,ρ}(t) = tr(K G(ρ e^{−iHt}) e^{iHt})` and
//! the identities it satisfies for covariant channels.

use num_complex::Complex64;

use crate::covariant::decomposition::{apply_sector, SectorDecomposition};
use crate::covariant::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::matcore::linalg::{self, CMatrix};
use crate::matcore::{Channel, DensityMatrix};

pub fn characteristic_function(
    channel: &Channel,
    spectrum: &Spectrum,
    observable: &CMatrix,
    rho: &DensityMatrix,
    t: f64,
) -> Result<Complex64> {
    spectrum.check_channel(channel)?;
    spectrum.check_operator(observable)?;
    spectrum.check_operator(rho.matrix())?;
    let u = spectrum.evolution(t);
    let out = channel.apply_operator(&(rho.matrix() * &u))?;
    Ok(linalg::trace(&(observable * out * u.adjoint())))
}

/// Fourier form `Σ_σ tr(K G_σ(ρ)) e^{iσt}` of the characteristic function.
pub fn characteristic_fourier(
    decomp: &SectorDecomposition,
    observable: &CMatrix,
    rho: &DensityMatrix,
    t: f64,
) -> Result<Complex64> {
    decomp.spectrum().check_operator(observable)?;
    let mut f = Complex64::new(0.0, 0.0);
    for s in decomp.sectors() {
        let out = apply_sector(decomp, s.sigma(), rho.matrix())?;
        f += linalg::trace(&(observable * out)) * Complex64::from_polar(1.0, s.sigma() * t);
    }
    Ok(f)
}

/// Minimum eigenvalue of the Gram matrix `F[k, l] = f_{K,ρ}(t_k − t_l)`.
///
/// Non-negative (up to roundoff) for covariant CP maps and PSD `K`.
pub fn bochner_check(
    channel: &Channel,
    spectrum: &Spectrum,
    observable: &CMatrix,
    rho: &DensityMatrix,
    times: &[f64],
) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("no time points".into()));
    }
    let m = times.len();
    let mut gram = CMatrix::zeros(m, m);
    for k in 0..m {
        for l in 0..m {
            gram[(k, l)] =
                characteristic_function(channel, spectrum, observable, rho, times[k] - times[l])?;
        }
    }
    Ok(linalg::min_eigenvalue(&gram))
}

/// `max_σ ‖G_σ(ρ e^{−iHt}) − G_σ(ρ) e^{−iHt} e^{iσt}‖_F`, with the left side
/// evaluated on the non-Hermitian operator `ρ e^{−iHt}` directly.
pub fn domain_extension_check(
    decomp: &SectorDecomposition,
    rho: &DensityMatrix,
    t: f64,
) -> Result<f64> {
    let u = decomp.spectrum().evolution(t);
    let shifted = rho.matrix() * &u;
    let mut worst: f64 = 0.0;
    for s in decomp.sectors() {
        let lhs = apply_sector(decomp, s.sigma(), &shifted)?;
        let rhs = apply_sector(decomp, s.sigma(), rho.matrix())?
            * &u
            * Complex64::from_polar(1.0, s.sigma() * t);
        worst = worst.max(linalg::frobenius_distance(&lhs, &rhs));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::decomposition::decompose;
    use crate::matcore::linalg::{c, from_real_rows};
    use std::f64::consts::PI;

    fn qubit() -> Spectrum {
        Spectrum::new(vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn value_at_zero_is_output_trace() {
        let rho = DensityMatrix::new(from_real_rows(2, 2, &[0.3, 0.2, 0.2, 0.7])).unwrap();
        let ad = Channel::amplitude_damping(0.2).unwrap();
        let f = characteristic_function(&ad, &qubit(), &linalg::identity(2), &rho, 0.0).unwrap();
        assert!((f - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn amplitude_damping_closed_form() {
        let ad = Channel::amplitude_damping(0.5).unwrap();
        let rho = DensityMatrix::basis(2, 1);
        let d = decompose(&ad, &qubit(), 1e-12).unwrap();
        for t in [0.0, 0.3, 1.0, PI, 5.5] {
            let expected = c(0.5, 0.0) + Complex64::from_polar(0.5, -t);
            let f = characteristic_function(&ad, &qubit(), &linalg::identity(2), &rho, t).unwrap();
            assert!((f - expected).norm() < 1e-14);
            let g = characteristic_fourier(&d, &linalg::identity(2), &rho, t).unwrap();
            assert!((g - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_is_flat() {
        let rho = DensityMatrix::new(from_real_rows(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        for t in [0.0, 1.0, 2.0] {
            let f = characteristic_function(
                &Channel::identity(2),
                &qubit(),
                &linalg::identity(2),
                &rho,
                t,
            )
            .unwrap();
            assert!((f - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn bochner_examples() {
        let ad = Channel::amplitude_damping(0.5).unwrap();
        let rho = DensityMatrix::basis(2, 1);
        let single = bochner_check(&ad, &qubit(), &linalg::identity(2), &rho, &[0.7]).unwrap();
        assert!((single - 1.0).abs() < 1e-14);
        let min = bochner_check(
            &ad,
            &qubit(),
            &linalg::identity(2),
            &rho,
            &[0.0, PI, 2.0 * PI],
        )
        .unwrap();
        assert!(min >= -1e-10);
    }

    #[test]
    fn domain_extension_examples() {
        let ad = Channel::amplitude_damping(0.5).unwrap();
        let d = decompose(&ad, &qubit(), 1e-12).unwrap();
        let plus = DensityMatrix::new(from_real_rows(2, 2, &[0.5; 4])).unwrap();
        assert!(domain_extension_check(&d, &plus, 0.0).unwrap() < 1e-15);
        assert!(domain_extension_check(&d, &plus, 1.0).unwrap() < 1e-10);
    }
}
