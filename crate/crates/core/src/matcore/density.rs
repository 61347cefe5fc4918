use crate::error::{Error, Result};
use crate::matcore::linalg::{self, CMatrix, CVector};
use crate::matcore::Tolerances;

/// A validated density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotDensityMatrix(format!(
                "shape {:?} is not square",
                matrix.shape()
            )));
        }
        if !linalg::is_finite(&matrix) {
            return Err(Error::NotDensityMatrix("non-finite entries".into()));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > tol.hermitian {
            return Err(Error::NotDensityMatrix(format!(
                "hermiticity defect {herm:e}"
            )));
        }
        let tr = linalg::trace(&matrix).re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        let min = linalg::min_eigenvalue(&matrix);
        if min < -tol.psd {
            return Err(Error::NotDensityMatrix(format!("min eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to be a state, e.g. the output of a CPTP map on
    /// a state. Only the shape is checked.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// `|psi⟩⟨psi|` for a vector normalized here.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotDensityMatrix("zero state vector".into()));
        }
        Ok(Self {
            matrix: linalg::projector(&(psi / linalg::c(norm, 0.0))),
        })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            matrix: linalg::unit(dim, k, k),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: linalg::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues with roundoff negatives in `[-psd, 0)` clipped to zero.
    pub fn spectrum(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        let values = linalg::eigvalsh(&self.matrix);
        values
            .into_iter()
            .map(|l| {
                if l >= 0.0 {
                    Ok(l)
                } else if l >= -tol.psd {
                    Ok(0.0)
                } else {
                    Err(Error::NotDensityMatrix(format!("eigenvalue {l:e}")))
                }
            })
            .collect()
    }
}
