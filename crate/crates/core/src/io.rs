//! JSON file formats.
//!
//! * matrix: `{"rows": n, "cols": m, "data": [[re, im], …]}`, row-major
//! * state vector: `{"dim": n, "data": [[re, im], …]}`
//! * channel: `{"dim_in": n, "dim_out": m, "kraus": [matrix, …]}`
//! * spectrum: `{"energies": […], "match_tol": x}`
//! * sector decomposition: `{"spectrum": …, "sectors": [{"sigma": s, "mask": matrix}, …]}`;
//!   partial shifts are rebuilt from σ and the spectrum
//! * capacity report: `{"coherent_information_bits": x, "hadamard_bound_bits": y|null, "dim": n}`
//! * timing report: `{"N", "s", "v", "q", "bound", "orthogonality_defect"}`
//!
//! Numbers are written in the shortest form that parses back to the same
//! double.

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::capacity::CapacityReport;
use crate::covariant::{SectorDecomposition, Spectrum};
use crate::fock::{ComparisonReport, FockParams, GaussianDecomposition};
use crate::matcore::linalg::{c, CMatrix, CVector};
use crate::matcore::Channel;
use crate::timing::TimingChannelReport;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid content: {0}")]
    Invalid(#[from] crate::error::Error),
    #[error("{0}")]
    Shape(String),
}

/// Byte offset of a 1-based (line, column) position as reported by serde_json.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("wire types always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self { rows, cols, data }
    }
}

impl TryFrom<&MatrixJson> for CMatrix {
    type Error = FormatError;

    fn try_from(m: &MatrixJson) -> Result<Self, FormatError> {
        if m.rows * m.cols != m.data.len() {
            return Err(FormatError::Shape(format!(
                "matrix declares {}x{} but has {} entries",
                m.rows,
                m.cols,
                m.data.len()
            )));
        }
        if m.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(FormatError::Shape("non-finite matrix entry".into()));
        }
        Ok(CMatrix::from_fn(m.rows, m.cols, |i, j| {
            let [re, im] = m.data[i * m.cols + j];
            c(re, im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CVector> for VectorJson {
    fn from(v: &CVector) -> Self {
        Self {
            dim: v.len(),
            data: v.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<&VectorJson> for CVector {
    type Error = FormatError;

    fn try_from(v: &VectorJson) -> Result<Self, FormatError> {
        if v.dim != v.data.len() {
            return Err(FormatError::Shape(format!(
                "vector declares dim {} but has {} entries",
                v.dim,
                v.data.len()
            )));
        }
        Ok(CVector::from_iterator(
            v.dim,
            v.data.iter().map(|&[re, im]| c(re, im)),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixJson>,
}

impl From<&Channel> for ChannelJson {
    fn from(ch: &Channel) -> Self {
        Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<&ChannelJson> for Channel {
    type Error = FormatError;

    fn try_from(ch: &ChannelJson) -> Result<Self, FormatError> {
        let kraus = ch
            .kraus
            .iter()
            .map(CMatrix::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Channel::new(ch.dim_in, ch.dim_out, kraus)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub energies: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_tol: Option<f64>,
}

impl From<&Spectrum> for SpectrumJson {
    fn from(s: &Spectrum) -> Self {
        Self {
            energies: s.energies().to_vec(),
            match_tol: Some(s.match_tol()),
        }
    }
}

impl TryFrom<&SpectrumJson> for Spectrum {
    type Error = FormatError;

    fn try_from(s: &SpectrumJson) -> Result<Self, FormatError> {
        Ok(match s.match_tol {
            Some(tol) => Spectrum::with_match_tol(s.energies.clone(), tol)?,
            None => Spectrum::new(s.energies.clone())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorJson {
    pub sigma: f64,
    pub mask: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub spectrum: SpectrumJson,
    pub sectors: Vec<SectorJson>,
}

impl From<&SectorDecomposition> for DecompositionJson {
    fn from(d: &SectorDecomposition) -> Self {
        Self {
            spectrum: d.spectrum().into(),
            sectors: d
                .sectors()
                .iter()
                .map(|s| SectorJson {
                    sigma: s.sigma(),
                    mask: (&s.mask.mask).into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&DecompositionJson> for SectorDecomposition {
    type Error = FormatError;

    fn try_from(d: &DecompositionJson) -> Result<Self, FormatError> {
        let spectrum = Spectrum::try_from(&d.spectrum)?;
        let masks = d
            .sectors
            .iter()
            .map(|s| Ok((s.sigma, CMatrix::try_from(&s.mask)?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(SectorDecomposition::new(spectrum, masks)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReportJson {
    pub coherent_information_bits: f64,
    pub hadamard_bound_bits: Option<f64>,
    pub dim: usize,
}

impl From<&CapacityReport> for CapacityReportJson {
    fn from(r: &CapacityReport) -> Self {
        Self {
            coherent_information_bits: r.coherent_information,
            hadamard_bound_bits: r.hadamard_bound,
            dim: r.input_dim,
        }
    }
}

fn complex_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReportJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub s: f64,
    pub v: Vec<[f64; 2]>,
    pub q: Vec<f64>,
    pub bound: f64,
    pub orthogonality_defect: f64,
}

impl From<&TimingChannelReport> for TimingReportJson {
    fn from(r: &TimingChannelReport) -> Self {
        Self {
            n: r.steps,
            s: r.s,
            v: complex_pairs(&r.v),
            q: r.q.clone(),
            bound: r.bound,
            orthogonality_defect: r.orthogonality_defect,
        }
    }
}

impl From<&TimingReportJson> for TimingChannelReport {
    fn from(r: &TimingReportJson) -> Self {
        Self {
            steps: r.n,
            s: r.s,
            v: r.v.iter().map(|&[re, im]| c(re, im)).collect(),
            q: r.q.clone(),
            bound: r.bound,
            orthogonality_defect: r.orthogonality_defect,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockParamsJson {
    pub dim: usize,
    pub std_dev: f64,
    pub sigma_max: usize,
    pub quad_points: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl From<&FockParams> for FockParamsJson {
    fn from(p: &FockParams) -> Self {
        Self {
            dim: p.dim,
            std_dev: p.std_dev,
            sigma_max: p.sigma_max,
            quad_points: p.quad_points,
            mc_samples: p.mc_samples,
            seed: p.seed,
        }
    }
}

impl From<&FockParamsJson> for FockParams {
    fn from(p: &FockParamsJson) -> Self {
        Self {
            dim: p.dim,
            std_dev: p.std_dev,
            sigma_max: p.sigma_max,
            quad_points: p.quad_points,
            mc_samples: p.mc_samples,
            seed: p.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMaskJson {
    pub sigma: i64,
    pub mask: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianDecompositionJson {
    pub params: FockParamsJson,
    pub masks: Vec<GaussianMaskJson>,
    pub truncation_defect: Vec<f64>,
}

impl From<&GaussianDecomposition> for GaussianDecompositionJson {
    fn from(d: &GaussianDecomposition) -> Self {
        Self {
            params: (&d.params).into(),
            masks: d
                .masks
                .iter()
                .map(|(s, m)| GaussianMaskJson {
                    sigma: *s,
                    mask: m.into(),
                })
                .collect(),
            truncation_defect: d.truncation_defect.clone(),
        }
    }
}

impl TryFrom<&GaussianDecompositionJson> for GaussianDecomposition {
    type Error = FormatError;

    fn try_from(d: &GaussianDecompositionJson) -> Result<Self, FormatError> {
        Ok(Self {
            params: (&d.params).into(),
            masks: d
                .masks
                .iter()
                .map(|m| Ok((m.sigma, CMatrix::try_from(&m.mask)?)))
                .collect::<Result<_, FormatError>>()?,
            truncation_defect: d.truncation_defect.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub params: FockParamsJson,
    pub max_entry_deviation: f64,
    pub max_allowed: f64,
    pub worst_ratio: f64,
    pub worst_entry: [usize; 2],
    pub truncation_defect: f64,
    pub within_tolerance: bool,
    pub decomposition_output: MatrixJson,
    pub monte_carlo_output: MatrixJson,
    pub monte_carlo_std_error: Vec<f64>,
}

impl ComparisonJson {
    pub fn new(params: &FockParams, r: &ComparisonReport) -> Self {
        Self {
            params: params.into(),
            max_entry_deviation: r.max_entry_deviation,
            max_allowed: r.max_allowed,
            worst_ratio: r.worst_ratio,
            worst_entry: [r.worst_entry.0, r.worst_entry.1],
            truncation_defect: r.truncation_defect,
            within_tolerance: r.within_tolerance,
            decomposition_output: (&r.decomposition).into(),
            monte_carlo_output: (&r.monte_carlo.mean).into(),
            monte_carlo_std_error: r
                .monte_carlo
                .std_error
                .transpose()
                .iter()
                .copied()
                .collect(),
        }
    }
}

pub fn channel_to_json(ch: &Channel) -> String {
    to_json(&ChannelJson::from(ch))
}

pub fn channel_from_json(text: &str) -> Result<Channel, FormatError> {
    Channel::try_from(&parse::<ChannelJson>(text)?)
}

pub fn spectrum_from_json(text: &str) -> Result<Spectrum, FormatError> {
    Spectrum::try_from(&parse::<SpectrumJson>(text)?)
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix, FormatError> {
    CMatrix::try_from(&parse::<MatrixJson>(text)?)
}

pub fn vector_from_json(text: &str) -> Result<CVector, FormatError> {
    CVector::try_from(&parse::<VectorJson>(text)?)
}

pub fn decomposition_from_json(text: &str) -> Result<SectorDecomposition, FormatError> {
    SectorDecomposition::try_from(&parse::<DecompositionJson>(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::decompose;

    #[test]
    fn parse_error_reports_byte_offset() {
        let text = "{\n  \"rows\": 2,\n  \"cols\": ,\n}";
        match parse::<MatrixJson>(text) {
            Err(FormatError::Parse { offset, line, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(&text[offset..offset + 1], ",");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let m = MatrixJson {
            rows: 2,
            cols: 2,
            data: vec![[1.0, 0.0]; 3],
        };
        assert!(CMatrix::try_from(&m).is_err());
    }

    #[test]
    fn channel_round_trip_is_bitwise() {
        let ch = Channel::amplitude_damping(0.3).unwrap();
        let back = channel_from_json(&channel_to_json(&ch)).unwrap();
        assert_eq!(back, ch);
    }

    #[test]
    fn decomposition_round_trip() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let d = decompose(&Channel::amplitude_damping(0.3).unwrap(), &s, 1e-12).unwrap();
        let text = to_json(&DecompositionJson::from(&d));
        let back = decomposition_from_json(&text).unwrap();
        assert_eq!(back, d);
    }
}
