use crate::error::Result;
use crate::matcore::density::DensityMatrix;
use crate::matcore::Tolerances;

/// Shannon entropy in bits of a probability vector, with `0·log 0 = 0`.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Von Neumann entropy `−tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    von_neumann_entropy_with(rho, &Tolerances::default())
}

pub fn von_neumann_entropy_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(shannon_bits(&rho.spectrum(tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::linalg::diag_real;

    fn entropy_of_diag(d: &[f64]) -> f64 {
        von_neumann_entropy(&DensityMatrix::new(diag_real(d)).unwrap()).unwrap()
    }

    #[test]
    fn pure_and_mixed_qubit() {
        assert_eq!(entropy_of_diag(&[1.0, 0.0]), 0.0);
        assert!((entropy_of_diag(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn biased_qubit() {
        // scalar evaluation of −p log p − (1−p) log (1−p)
        let p: f64 = 0.8536;
        let expected = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let s = entropy_of_diag(&[p, 1.0 - p]);
        assert!((s - expected).abs() < 1e-14);
        // (1 + √½)/2 ≈ 0.8536 gives ≈ 0.6009 bits
        let exact = (1.0 + 0.5f64.sqrt()) / 2.0;
        assert!((entropy_of_diag(&[exact, 1.0 - exact]) - 0.6009).abs() < 1e-4);
    }
}
