//! `covchan`: command-line front end for covchan-core.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage or parse error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use covchan_core::capacity::{channel_report, hadamard_report, verify_hqc};
use covchan_core::covariant::{covariance_defect, decompose, reconstruct, Spectrum};
use covchan_core::fock::{compare_decomposition_to_mc, gaussian_decomposition, FockParams};
use covchan_core::io::{self, ComparisonJson, DecompositionJson, FormatError};
use covchan_core::matcore::linalg;
use covchan_core::timing::timing_channel;
use covchan_core::{CMatrix, CVector, Channel, DensityMatrix, Error};

use report::{Report, Table};

#[derive(Parser, Debug)]
#[command(
    name = "covchan",
    version,
    about = "Time-covariant quantum channel toolkit"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// CPTP and covariance defects of a channel.
    Check(CheckArgs),
    /// Sector decomposition of a covariant channel.
    Decompose(DecomposeArgs),
    /// Coherent information, and the Hadamard bound for masks.
    Capacity(CapacityArgs),
    /// Circulant timing channel and its capacity bound.
    Timing(TimingArgs),
    /// Dephasing masks of the Gaussian displacement channel.
    Gaussian(GaussianArgs),
    /// Gaussian masks compared against a Monte Carlo estimate.
    McGaussian(McGaussianArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    spectrum: PathBuf,
    /// Largest accepted defect.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    spectrum: PathBuf,
    /// Largest accepted cross-sector Choi entry.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the decomposition here instead of embedding it in the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputState {
    MaximallyMixed,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("map").required(true).args(["channel", "mask"])))]
struct CapacityArgs {
    #[arg(long)]
    channel: Option<PathBuf>,
    /// Unit-diagonal positive mask of a Hadamard channel.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(
        long,
        value_enum,
        default_value = "maximally-mixed",
        conflicts_with = "state"
    )]
    input: InputState,
    /// Density matrix file used as the channel input.
    #[arg(long, conflicts_with = "mask")]
    state: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TimingArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    spectrum: PathBuf,
    /// Initial state vector file.
    #[arg(long)]
    phi0: PathBuf,
    /// Time step.
    #[arg(long)]
    s: f64,
    /// Number of orbit points.
    #[arg(long = "N", alias = "n")]
    n: usize,
    /// Largest accepted output overlap.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
struct GaussianArgs {
    #[arg(long)]
    std_dev: f64,
    #[arg(long)]
    dim: usize,
    /// Defaults to dim − 1.
    #[arg(long)]
    sigma_max: Option<usize>,
    /// Defaults to max(2·dim, 64).
    #[arg(long)]
    quad_points: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FockInput {
    /// |0⟩⟨0|
    Vacuum,
    /// (|0⟩ + |1⟩)/√2
    Plus,
}

#[derive(Args, Debug)]
struct McGaussianArgs {
    #[command(flatten)]
    gaussian: GaussianArgs,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, env = "COVCHAN_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "vacuum", conflicts_with = "state")]
    input: FockInput,
    /// Density matrix file used as the channel input.
    #[arg(long)]
    state: Option<PathBuf>,
}

/// A failed run: message and exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn violation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCP { .. }
            | Error::NotCovariant { .. }
            | Error::MaskNotPSD { .. }
            | Error::DiagonalNotUnit { .. }
            | Error::NotReliableTiming { .. }
            | Error::NotPeriodic { .. } => Failure::violation(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, FormatError>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| match e {
        FormatError::Invalid(inner) => {
            let f = Failure::from(inner);
            Failure {
                message: format!("{}: {}", path.display(), f.message),
                ..f
            }
        }
        other => Failure::usage(format!("{}: {other}", path.display())),
    })
}

fn load_density(path: &Path) -> Result<DensityMatrix, Failure> {
    let m = load(path, io::matrix_from_json)?;
    DensityMatrix::new(m).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_pair(channel: &Path, spectrum: &Path) -> Result<(Channel, Spectrum), Failure> {
    let ch = load(channel, io::channel_from_json)?;
    let sp = load(spectrum, io::spectrum_from_json)?;
    if !ch.is_square() || ch.dim_in() != sp.dim() {
        return Err(Failure::usage(format!(
            "channel is {}x{} but the spectrum has {} levels",
            ch.dim_out(),
            ch.dim_in(),
            sp.dim()
        )));
    }
    Ok((ch, sp))
}

#[derive(Serialize)]
struct CheckJson {
    tp_defect: f64,
    cp_defect: f64,
    covariance_defect: f64,
    tol: f64,
    ok: bool,
}

fn cmd_check(a: &CheckArgs) -> Result<Report, Failure> {
    let (ch, sp) = load_pair(&a.channel, &a.spectrum)?;
    let cptp = ch.cptp_report();
    let cov = covariance_defect(&ch, &sp)?;
    let ok = cptp.tp_defect <= a.tol && cptp.cp_defect <= a.tol && cov <= a.tol;
    let out = CheckJson {
        tp_defect: cptp.tp_defect,
        cp_defect: cptp.cp_defect,
        covariance_defect: cov,
        tol: a.tol,
        ok,
    };
    let mut t = Table::default();
    t.scalar("tp_defect", out.tp_defect);
    t.scalar("cp_defect", out.cp_defect);
    t.scalar("covariance_defect", out.covariance_defect);
    t.scalar("tol", out.tol);
    Ok(Report::new(&out, t).failing_if(!ok))
}

#[derive(Serialize)]
struct DecomposeJson {
    sigmas: Vec<f64>,
    diagonal_sums: Vec<f64>,
    tp_defect: f64,
    reconstruction_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<DecompositionJson>,
}

fn cmd_decompose(a: &DecomposeArgs) -> Result<Report, Failure> {
    let (ch, sp) = load_pair(&a.channel, &a.spectrum)?;
    let d = decompose(&ch, &sp, a.tol)?;
    let back = reconstruct(&d)?;
    let wire = DecompositionJson::from(&d);
    if let Some(path) = &a.out {
        fs::write(path, io::to_json(&wire))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let out = DecomposeJson {
        sigmas: d.sigmas(),
        diagonal_sums: d.diagonal_sums(),
        tp_defect: d.tp_defect(),
        reconstruction_distance: back.choi().distance(&ch.choi()),
        decomposition: a.out.is_none().then_some(wire),
    };
    let mut t = Table::default();
    t.list("sigma", &out.sigmas);
    t.list("diagonal_sum", &out.diagonal_sums);
    t.scalar("tp_defect", out.tp_defect);
    t.scalar("reconstruction_distance", out.reconstruction_distance);
    for s in d.sectors() {
        t.matrix(&format!("mask[{}]", s.sigma()), &s.mask.mask);
    }
    Ok(Report::new(&out, t))
}

#[derive(Serialize)]
struct CapacityJson {
    #[serde(flatten)]
    report: io::CapacityReportJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    hqc_difference: Option<f64>,
}

fn cmd_capacity(a: &CapacityArgs) -> Result<Report, Failure> {
    let (report, hqc) = if let Some(path) = &a.mask {
        let m: CMatrix = load(path, io::matrix_from_json)?;
        let report = hadamard_report(&m)?;
        (report, Some(verify_hqc(&m, m.nrows())?))
    } else {
        let path = a.channel.as_ref().expect("clap enforces channel or mask");
        let ch = load(path, io::channel_from_json)?;
        let rho = match &a.state {
            Some(p) => load_density(p)?,
            None => match a.input {
                InputState::MaximallyMixed => DensityMatrix::maximally_mixed(ch.dim_in()),
            },
        };
        (channel_report(&ch, &rho)?, None)
    };
    let out = CapacityJson {
        report: (&report).into(),
        hqc_difference: hqc,
    };
    let mut t = Table::default();
    t.scalar("coherent_information_bits", report.coherent_information);
    if let Some(b) = report.hadamard_bound {
        t.scalar("hadamard_bound_bits", b);
    }
    t.scalar("dim", report.input_dim as f64);
    if let Some(h) = hqc {
        t.scalar("hqc_difference", h);
    }
    Ok(Report::new(&out, t))
}

fn cmd_timing(a: &TimingArgs) -> Result<Report, Failure> {
    let (ch, sp) = load_pair(&a.channel, &a.spectrum)?;
    let phi0: CVector = load(&a.phi0, io::vector_from_json)?;
    let r = timing_channel(&ch, &sp, &phi0, a.s, a.n, a.tol)?;
    let out = io::TimingReportJson::from(&r);
    let mut t = Table::default();
    t.scalar("N", r.steps as f64);
    t.scalar("s", r.s);
    t.complex_list("v", &r.v);
    t.list("q", &r.q);
    t.scalar("bound", r.bound);
    t.scalar("orthogonality_defect", r.orthogonality_defect);
    Ok(Report::new(&out, t))
}

fn fock_params(a: &GaussianArgs) -> FockParams {
    let mut p = FockParams::new(a.dim, a.std_dev);
    if let Some(s) = a.sigma_max {
        p.sigma_max = s;
    }
    if let Some(q) = a.quad_points {
        p.quad_points = q;
    }
    p
}

fn cmd_gaussian(a: &GaussianArgs) -> Result<Report, Failure> {
    let d = gaussian_decomposition(&fock_params(a))?;
    let out = io::GaussianDecompositionJson::from(&d);
    let mut t = Table::default();
    for (sigma, m) in &d.masks {
        t.matrix(&format!("mask[{sigma}]"), m);
    }
    t.list("truncation_defect", &d.truncation_defect);
    Ok(Report::new(&out, t))
}

fn cmd_mc_gaussian(a: &McGaussianArgs) -> Result<Report, Failure> {
    let mut p = fock_params(&a.gaussian);
    p.mc_samples = a.samples;
    p.seed = a.seed;
    let rho = match &a.state {
        Some(path) => load_density(path)?,
        None => {
            if p.dim < 2 {
                return Err(Failure::usage("dim must be at least 2"));
            }
            let mut psi = CVector::zeros(p.dim);
            match a.input {
                FockInput::Vacuum => psi[0] = linalg::ONE,
                FockInput::Plus => {
                    psi[0] = linalg::c(0.5f64.sqrt(), 0.0);
                    psi[1] = psi[0];
                }
            }
            DensityMatrix::pure(&psi)?
        }
    };
    let r = compare_decomposition_to_mc(&p, &rho)?;
    let out = ComparisonJson::new(&p, &r);
    let mut t = Table::default();
    t.scalar("max_entry_deviation", r.max_entry_deviation);
    t.scalar("max_allowed", r.max_allowed);
    t.scalar("worst_ratio", r.worst_ratio);
    t.scalar("truncation_defect", r.truncation_defect);
    t.matrix("decomposition_output", &r.decomposition);
    t.matrix("monte_carlo_output", &r.monte_carlo.mean);
    t.real_matrix("monte_carlo_std_error", &r.monte_carlo.std_error);
    Ok(Report::new(&out, t).failing_if(!r.within_tolerance))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Timing(a) => cmd_timing(a),
        Command::Gaussian(a) => cmd_gaussian(a),
        Command::McGaussian(a) => cmd_mc_gaussian(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => print!("{}", report.json),
                Format::Csv => print!("{}", report.table.to_csv()),
            }
            ExitCode::from(report.exit_code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
