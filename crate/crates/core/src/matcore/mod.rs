//! Dense complex linear algebra and the quantum primitives shared by every
//! other module: density matrices, Kraus channels, Choi matrices, entropy.

pub mod channel;
pub mod density;
pub mod entropy;
pub mod linalg;

pub use channel::{kraus_from_choi, Channel, ChoiMatrix, CptpReport};
pub use density::DensityMatrix;
pub use entropy::{shannon_bits, von_neumann_entropy};
pub use linalg::{hadamard as hadamard_product, CMatrix, CVector};

/// Numerical tolerances used by validating constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest accepted `|A_ij − conj(A_ji)|`.
    pub hermitian: f64,
    /// Largest accepted `|tr ρ − 1|`.
    pub trace: f64,
    /// Eigenvalues in `[-psd, 0)` count as roundoff and are clipped.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-9,
            trace: 1e-9,
            psd: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            hermitian: tol,
            trace: tol,
            psd: tol,
        }
    }
}
