//! Python bindings. Matrices cross the boundary as nested lists of
//! `complex`, row-major.

use covchan_core::capacity;
use covchan_core::covariant::{self, SectorDecomposition};
use covchan_core::fock::{self, FockParams};
use covchan_core::timing;
use covchan_core::{CMatrix, CVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Rows = Vec<Vec<Complex64>>;

fn err(e: covchan_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn density(rows: Rows) -> PyResult<covchan_core::DensityMatrix> {
    covchan_core::DensityMatrix::new(to_matrix(rows)?).map_err(err)
}

#[pyclass(name = "Spectrum", module = "covchan", from_py_object)]
#[derive(Clone)]
struct PySpectrum(covariant::Spectrum);

#[pymethods]
impl PySpectrum {
    #[new]
    #[pyo3(signature = (energies, match_tol=None))]
    fn new(energies: Vec<f64>, match_tol: Option<f64>) -> PyResult<Self> {
        let sp = match match_tol {
            Some(t) => covariant::Spectrum::with_match_tol(energies, t),
            None => covariant::Spectrum::new(energies),
        };
        sp.map(Self).map_err(err)
    }

    #[staticmethod]
    fn integer(dim: usize) -> Self {
        Self(covariant::Spectrum::integer(dim))
    }

    #[getter]
    fn energies(&self) -> Vec<f64> {
        self.0.energies().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn energy_differences(&self) -> Vec<f64> {
        self.0.energy_differences()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum({:?})", self.0.energies())
    }
}

#[pyclass(name = "Channel", module = "covchan", from_py_object)]
#[derive(Clone)]
struct PyChannel(covchan_core::Channel);

#[pymethods]
impl PyChannel {
    /// Channel from its Kraus operators.
    #[new]
    fn new(kraus: Vec<Rows>) -> PyResult<Self> {
        let ops = kraus.into_iter().map(to_matrix).collect::<PyResult<_>>()?;
        covchan_core::Channel::from_kraus(ops)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        Self(covchan_core::Channel::identity(dim))
    }

    #[staticmethod]
    fn dephasing(dim: usize) -> Self {
        Self(covchan_core::Channel::dephasing(dim))
    }

    #[staticmethod]
    fn amplitude_damping(gamma: f64) -> PyResult<Self> {
        covchan_core::Channel::amplitude_damping(gamma)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn dim_in(&self) -> usize {
        self.0.dim_in()
    }

    #[getter]
    fn dim_out(&self) -> usize {
        self.0.dim_out()
    }

    #[getter]
    fn kraus(&self) -> Vec<Rows> {
        self.0.kraus().iter().map(from_matrix).collect()
    }

    fn apply(&self, x: Rows) -> PyResult<Rows> {
        self.0
            .apply_operator(&to_matrix(x)?)
            .map(|y| from_matrix(&y))
            .map_err(err)
    }

    fn choi(&self) -> Rows {
        from_matrix(self.0.choi().matrix())
    }

    /// `(tp_defect, cp_defect)`.
    fn cptp_defects(&self) -> (f64, f64) {
        let r = self.0.cptp_report();
        (r.tp_defect, r.cp_defect)
    }

    fn covariance_defect(&self, spectrum: &PySpectrum) -> PyResult<f64> {
        covariant::covariance_defect(&self.0, &spectrum.0).map_err(err)
    }

    fn coherent_information(&self, rho: Rows) -> PyResult<f64> {
        capacity::coherent_information(&self.0, &density(rho)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Channel(dim_in={}, dim_out={}, kraus={})",
            self.0.dim_in(),
            self.0.dim_out(),
            self.0.kraus().len()
        )
    }
}

#[pyclass(name = "SectorDecomposition", module = "covchan", from_py_object)]
#[derive(Clone)]
struct PyDecomposition(SectorDecomposition);

#[pymethods]
impl PyDecomposition {
    #[new]
    fn new(spectrum: &PySpectrum, masks: Vec<(f64, Rows)>) -> PyResult<Self> {
        let masks = masks
            .into_iter()
            .map(|(s, m)| Ok((s, to_matrix(m)?)))
            .collect::<PyResult<_>>()?;
        SectorDecomposition::new(spectrum.0.clone(), masks)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn sigmas(&self) -> Vec<f64> {
        self.0.sigmas()
    }

    #[getter]
    fn spectrum(&self) -> PySpectrum {
        PySpectrum(self.0.spectrum().clone())
    }

    fn mask(&self, sigma: f64) -> PyResult<Rows> {
        self.0.mask(sigma).map(from_matrix).map_err(err)
    }

    fn diagonal_sums(&self) -> Vec<f64> {
        self.0.diagonal_sums()
    }

    fn tp_defect(&self) -> f64 {
        self.0.tp_defect()
    }

    fn min_mask_eigenvalue(&self) -> f64 {
        self.0.min_mask_eigenvalue()
    }

    fn reconstruct(&self) -> PyResult<PyChannel> {
        covariant::reconstruct(&self.0).map(PyChannel).map_err(err)
    }

    /// `[(σ, p(σ))]` for input state `rho`.
    fn shift_distribution(&self, rho: Rows) -> PyResult<Vec<(f64, f64)>> {
        covariant::shift_distribution(&self.0, &density(rho)?)
            .map(|d| d.pairs)
            .map_err(err)
    }
}

#[pyfunction]
#[pyo3(signature = (channel, spectrum, tol=1e-9))]
fn decompose(channel: &PyChannel, spectrum: &PySpectrum, tol: f64) -> PyResult<PyDecomposition> {
    covariant::decompose(&channel.0, &spectrum.0, tol)
        .map(PyDecomposition)
        .map_err(err)
}

/// `log₂ n − S(M/n)` for a positive mask with unit diagonal.
#[pyfunction]
fn hadamard_bound(mask: Rows) -> PyResult<f64> {
    let m = to_matrix(mask)?;
    let n = m.nrows();
    capacity::hadamard_bound(&m, n).map_err(err)
}

#[pyclass(
    name = "TimingReport",
    module = "covchan",
    get_all,
    skip_from_py_object
)]
struct PyTimingReport {
    steps: usize,
    s: f64,
    v: Vec<Complex64>,
    q: Vec<f64>,
    bound: f64,
    orthogonality_defect: f64,
}

#[pyfunction]
#[pyo3(signature = (channel, spectrum, phi0, s, n, tol=1e-12))]
fn timing_channel(
    channel: &PyChannel,
    spectrum: &PySpectrum,
    phi0: Vec<Complex64>,
    s: f64,
    n: usize,
    tol: f64,
) -> PyResult<PyTimingReport> {
    let phi0 = CVector::from_vec(phi0);
    let r = timing::timing_channel(&channel.0, &spectrum.0, &phi0, s, n, tol).map_err(err)?;
    Ok(PyTimingReport {
        steps: r.steps,
        s: r.s,
        v: r.v,
        q: r.q,
        bound: r.bound,
        orthogonality_defect: r.orthogonality_defect,
    })
}

fn params(
    std_dev: f64,
    dim: usize,
    sigma_max: Option<usize>,
    quad_points: Option<usize>,
) -> FockParams {
    let mut p = FockParams::new(dim, std_dev);
    if let Some(m) = sigma_max {
        p.sigma_max = m;
    }
    if let Some(q) = quad_points {
        p.quad_points = q;
    }
    p
}

#[pyclass(
    name = "GaussianDecomposition",
    module = "covchan",
    get_all,
    skip_from_py_object
)]
struct PyGaussian {
    /// `[(σ, mask)]`
    masks: Vec<(i64, Rows)>,
    truncation_defect: Vec<f64>,
}

#[pyfunction]
#[pyo3(signature = (std_dev, dim, sigma_max=None, quad_points=None))]
fn gaussian_decomposition(
    std_dev: f64,
    dim: usize,
    sigma_max: Option<usize>,
    quad_points: Option<usize>,
) -> PyResult<PyGaussian> {
    let d =
        fock::gaussian_decomposition(&params(std_dev, dim, sigma_max, quad_points)).map_err(err)?;
    Ok(PyGaussian {
        masks: d.masks.iter().map(|(s, m)| (*s, from_matrix(m))).collect(),
        truncation_defect: d.truncation_defect,
    })
}

/// Monte Carlo average of `D ρ D†` over Gaussian displacements:
/// `(mean, std_error)`.
#[pyfunction]
#[pyo3(signature = (rho, std_dev, samples=100_000, seed=0))]
fn monte_carlo(
    rho: Rows,
    std_dev: f64,
    samples: usize,
    seed: u64,
) -> PyResult<(Rows, Vec<Vec<f64>>)> {
    let rho = density(rho)?;
    let mut p = FockParams::new(rho.dim(), std_dev);
    p.mc_samples = samples;
    p.seed = seed;
    let est = fock::monte_carlo_channel(&rho, &p).map_err(err)?;
    let se = &est.std_error;
    let se_rows = (0..se.nrows())
        .map(|i| (0..se.ncols()).map(|j| se[(i, j)]).collect())
        .collect();
    Ok((from_matrix(&est.mean), se_rows))
}

#[pymodule]
fn covchan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyDecomposition>()?;
    m.add_class::<PyTimingReport>()?;
    m.add_class::<PyGaussian>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(hadamard_bound, m)?)?;
    m.add_function(wrap_pyfunction!(timing_channel, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    Ok(())
}
