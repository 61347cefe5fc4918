use crate::error::{Error, Result};
use crate::matcore::density::DensityMatrix;
use crate::matcore::linalg::{self, CMatrix, CVector};
use crate::matcore::Tolerances;

/// A completely positive map in Kraus form, `G(X) = Σ_j A_j X A_j†`.
///
/// Construction only checks shapes; trace preservation and complete
/// positivity are measured by [`Channel::cptp_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

/// Choi matrix of a map with entries `C[(j', j), (k', k)] = ⟨j'| G(|j⟩⟨k|) |k'⟩`.
///
/// The composite index `(j', j)` is flattened output-major:
/// `row = j' * dim_in + j`. With this convention the Choi matrix is
/// `Σ_m vec(A_m) vec(A_m)†`, where `vec` is row-major vectorization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim_in: usize,
    dim_out: usize,
    matrix: CMatrix,
}

/// Defects of the trace-preservation and complete-positivity conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    /// `‖Σ A†A − I‖_F`
    pub tp_defect: f64,
    /// `max(0, −λ_min(Choi))`
    pub cp_defect: f64,
}

impl CptpReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.tp_defect <= tol && self.cp_defect <= tol
    }
}

impl Channel {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::DimensionMismatch(
                "channel dimensions must be positive".into(),
            ));
        }
        for (m, a) in kraus.iter().enumerate() {
            if a.shape() != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {m} has shape {:?}, expected ({dim_out}, {dim_in})",
                    a.shape()
                )));
            }
            if !linalg::is_finite(a) {
                return Err(Error::InvalidParameter(format!(
                    "Kraus operator {m} has non-finite entries"
                )));
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    /// Square channel from a non-empty Kraus list.
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let (rows, cols) = kraus
            .first()
            .map(|a| a.shape())
            .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
        Self::new(cols, rows, kraus)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![linalg::identity(dim)],
        }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::from_kraus(vec![u])
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: (0..dim).map(|k| linalg::unit(dim, k, k)).collect(),
        }
    }

    /// Qubit amplitude damping `A₀ = diag(1, √(1−γ))`, `A₁ = √γ |0⟩⟨1|`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "damping {gamma} outside [0, 1]"
            )));
        }
        let a0 = linalg::diag_real(&[1.0, (1.0 - gamma).sqrt()]);
        let a1 = linalg::unit(2, 0, 1).scale(gamma.sqrt());
        Self::new(2, 2, vec![a0, a1])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Applies the map to an arbitrary (not necessarily Hermitian) operator.
    pub fn apply_operator(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "operator shape {:?} vs channel input dimension {}",
                x.shape(),
                self.dim_in
            )));
        }
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.kraus {
            out += a * x * a.adjoint();
        }
        Ok(out)
    }

    /// `Σ_j A_j ρ A_j†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?;
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&out)))
    }

    /// Applies `id ⊗ G` to a state on `dim_in²`, the reference factor on the left.
    pub fn bipartite_apply(&self, state: &DensityMatrix) -> Result<DensityMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "bipartite_apply needs a square channel".into(),
            ));
        }
        let n = self.dim_in;
        if state.dim() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "bipartite state dimension {} vs {}",
                state.dim(),
                n * n
            )));
        }
        let id = linalg::identity(n);
        let mut out = CMatrix::zeros(n * n, n * n);
        for a in &self.kraus {
            let big = linalg::kron(&id, a);
            out += &big * state.matrix() * big.adjoint();
        }
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&out)))
    }

    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim_in * self.dim_out;
        let mut matrix = CMatrix::zeros(d, d);
        for a in &self.kraus {
            let v = vec_row_major(a);
            matrix += &v * v.adjoint();
        }
        ChoiMatrix {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix,
        }
    }

    pub fn cptp_report(&self) -> CptpReport {
        let mut gram = CMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.kraus {
            gram += a.adjoint() * a;
        }
        let tp_defect = linalg::frobenius(&(gram - linalg::identity(self.dim_in)));
        let cp_defect = (-linalg::min_eigenvalue(self.choi().matrix())).max(0.0);
        CptpReport {
            tp_defect,
            cp_defect,
        }
    }
}

fn vec_row_major(a: &CMatrix) -> CVector {
    let (rows, cols) = a.shape();
    CVector::from_fn(rows * cols, |k, _| a[(k / cols, k % cols)])
}

impl ChoiMatrix {
    pub fn new(dim_in: usize, dim_out: usize, matrix: CMatrix) -> Result<Self> {
        let d = dim_in * dim_out;
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix shape {:?}, expected ({d}, {d})",
                matrix.shape()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn index(&self, out: usize, inp: usize) -> usize {
        out * self.dim_in + inp
    }

    /// `C[(j', j), (k', k)]`.
    pub fn entry(&self, jp: usize, j: usize, kp: usize, k: usize) -> num_complex::Complex64 {
        self.matrix[(self.index(jp, j), self.index(kp, k))]
    }

    pub fn distance(&self, other: &ChoiMatrix) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        linalg::frobenius_distance(&self.matrix, &other.matrix)
    }

    /// Kraus family from the spectral decomposition of the Choi matrix.
    ///
    /// Operators come in descending eigenvalue order; eigenvalues in
    /// `[-tol, tol]` contribute nothing.
    pub fn to_channel(&self, tol: f64) -> Result<Channel> {
        let herm = linalg::hermiticity_defect(&self.matrix);
        if herm > tol.max(Tolerances::default().hermitian) {
            return Err(Error::NotCP {
                min_eigenvalue: f64::NAN,
            });
        }
        let eig = linalg::eigh(&self.matrix);
        if eig.min() < -tol {
            return Err(Error::NotCP {
                min_eigenvalue: eig.min(),
            });
        }
        let kraus = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > tol)
            .map(|(k, &l)| {
                let v = eig.vectors.column(k);
                let s = l.sqrt();
                CMatrix::from_fn(self.dim_out, self.dim_in, |a, b| v[a * self.dim_in + b] * s)
            })
            .collect();
        Channel::new(self.dim_in, self.dim_out, kraus)
    }
}

/// Kraus family recovered from a Choi matrix; see [`ChoiMatrix::to_channel`].
pub fn kraus_from_choi(choi: &ChoiMatrix, tol: f64) -> Result<Channel> {
    choi.to_channel(tol)
}
