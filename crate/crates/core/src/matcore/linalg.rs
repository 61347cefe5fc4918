//! Dense complex linear algebra helpers on top of `nalgebra`.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the raw carrier for operators, states and masks.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from real row-major entries.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(rows * cols, data.len());
    CMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
}

/// `|a⟩⟨b|` for computational basis vectors.
pub fn unit(n: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(a, b)] = ONE;
    m
}

/// `|psi⟩⟨psi|`.
pub fn projector(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius(&(a - b))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn hadamard(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "hadamard product of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.component_mul(b))
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector is gauge
/// fixed so that its first entry of maximal modulus is real and positive,
/// and ties between equal eigenvalues are broken by comparing the
/// eigenvectors entry by entry.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

const TIE_TOL: f64 = 1e-12;

fn cmp_complex(a: Complex64, b: Complex64) -> Ordering {
    if (a.re - b.re).abs() > TIE_TOL {
        return b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal);
    }
    if (a.im - b.im).abs() > TIE_TOL {
        return b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal);
    }
    Ordering::Equal
}

fn fix_phase(v: &mut CVector) {
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in v.iter().enumerate() {
        // first entry whose modulus is maximal up to roundoff
        if z.norm() > best + TIE_TOL {
            best = z.norm();
            pivot = i;
        }
    }
    if best > 0.0 {
        let phase = v[pivot].conj() / v[pivot].norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Hermitian eigendecomposition with deterministic ordering and gauge.
pub fn eigh(m: &CMatrix) -> Eigh {
    let n = m.nrows();
    if n == 0 {
        return Eigh {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut pairs: Vec<(f64, CVector)> = (0..n)
        .map(|k| {
            let mut v = eig.eigenvectors.column(k).into_owned();
            fix_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        if (la - lb).abs() > TIE_TOL * (1.0 + la.abs().max(lb.abs())) {
            return lb.partial_cmp(la).unwrap_or(Ordering::Equal);
        }
        va.iter()
            .zip(vb.iter())
            .map(|(&x, &y)| cmp_complex(x, y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    let values = pairs.iter().map(|(l, _)| *l).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(k, v);
    }
    Eigh { values, vectors }
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    values
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigvalsh(m).last().copied().unwrap_or(0.0)
}

/// Principal submatrix on the given index set.
pub fn principal_submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let e = eigh(m);
    let n = m.nrows();
    let mut scaled = e.vectors.clone();
    for k in 0..n {
        let fk = f(e.values[k]);
        for i in 0..n {
            scaled[(i, k)] *= fk;
        }
    }
    scaled * e.vectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_descending_and_reconstructs() {
        let m = from_real_rows(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0]);
        let e = eigh(&m);
        assert!((e.values[0] - 5.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
        assert!((e.values[2] - 1.0).abs() < 1e-12);
        let back = &e.vectors * diag_real(&e.values) * e.vectors.adjoint();
        assert!(frobenius_distance(&back, &m) < 1e-12);
    }

    #[test]
    fn eigh_gauge_is_deterministic() {
        let m = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => ONE,
        });
        let a = eigh(&m);
        let b = eigh(&m.clone());
        assert_eq!(a.vectors, b.vectors);
        for k in 0..2 {
            let v = a.vector(k);
            let best = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = v.iter().find(|z| z.norm() > best - 1e-12).unwrap();
            assert!(pivot.im.abs() < 1e-14 && pivot.re > 0.0);
        }
    }

    #[test]
    fn hadamard_examples() {
        let rho = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.3, 0.0),
            (0, 1) => c(0.1, 0.2),
            (1, 0) => c(0.1, -0.2),
            _ => c(0.7, 0.0),
        });
        let ones = CMatrix::from_element(2, 2, ONE);
        assert_eq!(hadamard(&ones, &rho).unwrap(), rho);
        assert_eq!(
            hadamard(&identity(2), &rho).unwrap(),
            diag_real(&[0.3, 0.7])
        );
        let m = from_real_rows(2, 2, &[1.0, 0.4, 0.4, 1.0]);
        let out = hadamard(&m, &rho).unwrap();
        assert_eq!(out[(0, 1)], rho[(0, 1)] * 0.4);
        assert_eq!(out[(1, 0)], rho[(1, 0)] * 0.4);
        assert_eq!(out[(0, 0)], rho[(0, 0)]);
    }

    #[test]
    fn hadamard_rejects_shape_mismatch() {
        assert!(hadamard(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn hermitian_function_square_root() {
        let m = diag_real(&[4.0, 9.0]);
        let r = hermitian_function(&m, |x| c(x.sqrt(), 0.0));
        assert!(frobenius_distance(&r, &diag_real(&[2.0, 3.0])) < 1e-14);
    }
}
