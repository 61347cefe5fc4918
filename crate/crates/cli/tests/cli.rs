use std::path::Path;
use std::process::{Command, Output};

use covchan_core::io::{self, DecompositionJson, TimingReportJson};
use serde::Deserialize;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn covchan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covchan"))
        .args(args)
        .env_remove("COVCHAN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[derive(Deserialize)]
struct Check {
    tp_defect: f64,
    cp_defect: f64,
    covariance_defect: f64,
    ok: bool,
}

#[derive(Deserialize)]
struct Decompose {
    sigmas: Vec<f64>,
    tp_defect: f64,
    reconstruction_distance: f64,
    decomposition: Option<DecompositionJson>,
}

#[derive(Deserialize)]
struct Capacity {
    coherent_information_bits: f64,
    hadamard_bound_bits: Option<f64>,
    hqc_difference: Option<f64>,
}

#[test]
fn check_accepts_amplitude_damping() {
    let o = covchan(&[
        "check",
        "--channel",
        &fixture("amplitude_damping_0.3.json"),
        "--spectrum",
        &fixture("spectrum_qubit.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: Check = io::parse(&stdout(&o)).unwrap();
    assert!(r.ok && r.covariance_defect < 1e-12 && r.tp_defect < 1e-12 && r.cp_defect < 1e-12);
}

#[test]
fn check_rejects_hadamard_gate() {
    let o = covchan(&[
        "check",
        "--channel",
        &fixture("hadamard_gate.json"),
        "--spectrum",
        &fixture("spectrum_qubit.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: Check = io::parse(&stdout(&o)).unwrap();
    assert!(!r.ok && r.covariance_defect > 0.2);
}

#[test]
fn malformed_json_reports_byte_offset() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"energies\": [0, 1,, 2]}").unwrap();
    let o = covchan(&[
        "check",
        "--channel",
        &fixture("identity_qubit.json"),
        "--spectrum",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("byte 19"), "{err}");
}

#[test]
fn dimension_mismatch_is_a_usage_error() {
    let o = covchan(&[
        "check",
        "--channel",
        &fixture("identity_4.json"),
        "--spectrum",
        &fixture("spectrum_qubit.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    assert_eq!(covchan(&[]).status.code(), Some(2));
}

#[test]
fn decompose_identity() {
    let o = covchan(&[
        "decompose",
        "--channel",
        &fixture("identity_qubit.json"),
        "--spectrum",
        &fixture("spectrum_qubit.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: Decompose = io::parse(&stdout(&o)).unwrap();
    assert_eq!(r.sigmas, vec![0.0]);
    assert!(r.reconstruction_distance < 1e-10);
    let d = r.decomposition.unwrap();
    assert!(d.sectors[0]
        .mask
        .data
        .iter()
        .all(|&[re, im]| re == 1.0 && im == 0.0));
}

#[test]
fn decompose_amplitude_damping_masks() {
    let o = covchan(&[
        "decompose",
        "--channel",
        &fixture("amplitude_damping_0.3.json"),
        "--spectrum",
        &fixture("spectrum_qubit.json"),
    ]);
    let r: Decompose = io::parse(&stdout(&o)).unwrap();
    assert_eq!(r.sigmas, vec![-1.0, 0.0]);
    assert!(r.tp_defect < 1e-12);
    let d = r.decomposition.unwrap();
    let down = &d.sectors[0].mask.data;
    assert!((down[3][0] - 0.3).abs() < 1e-12);
    assert!(down[..3].iter().all(|z| z[0].abs() < 1e-12));
    let stay = &d.sectors[1].mask.data;
    let expected = [1.0, 0.7f64.sqrt(), 0.7f64.sqrt(), 0.7];
    for (z, e) in stay.iter().zip(expected) {
        assert!((z[0] - e).abs() < 1e-12 && z[1].abs() < 1e-12);
    }
}

#[test]
fn decompose_random_fixture_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = covchan(&[
        "decompose",
        "--channel",
        &fixture("random_covariant_5.json"),
        "--spectrum",
        &fixture("spectrum_random_5.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: Decompose = io::parse(&stdout(&o)).unwrap();
    assert!(r.reconstruction_distance < 1e-10 && r.decomposition.is_none());
    let text = std::fs::read_to_string(&out).unwrap();
    let wire: DecompositionJson = io::parse(&text).unwrap();
    assert_eq!(io::to_json(&wire), text);
    let d = io::decomposition_from_json(&text).unwrap();
    assert_eq!(DecompositionJson::from(&d), wire);
}

#[test]
fn decompose_rejects_non_covariant_channel() {
    let o = covchan(&[
        "decompose",
        "--channel",
        &fixture("hadamard_gate.json"),
        "--spectrum",
        &fixture("spectrum_qubit.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("defect"));
}

#[test]
fn decompose_rejects_degenerate_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let sp = dir.path().join("s.json");
    std::fs::write(&sp, "{\"energies\": [0.0, 0.0]}").unwrap();
    let o = covchan(&[
        "decompose",
        "--channel",
        &fixture("identity_qubit.json"),
        "--spectrum",
        sp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

fn capacity_of_mask(name: &str) -> Capacity {
    let o = covchan(&["capacity", "--mask", &fixture(name)]);
    assert_eq!(o.status.code(), Some(0));
    io::parse(&stdout(&o)).unwrap()
}

#[test]
fn capacity_mask_examples() {
    let ones = capacity_of_mask("mask_ones_3.json");
    assert!((ones.hadamard_bound_bits.unwrap() - 3f64.log2()).abs() < 1e-9);
    let id = capacity_of_mask("mask_identity_3.json");
    assert!(id.hadamard_bound_bits.unwrap().abs() < 1e-9);
    let q = capacity_of_mask("mask_qubit_sqrt_half.json");
    assert!((q.hadamard_bound_bits.unwrap() - 0.3991).abs() < 1e-4);
    for r in [ones, id, q] {
        assert!(r.hqc_difference.unwrap() < 1e-9);
        assert!((r.coherent_information_bits - r.hadamard_bound_bits.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn capacity_rejects_indefinite_mask() {
    let o = covchan(&["capacity", "--mask", &fixture("mask_not_psd.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn capacity_of_channel_at_a_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("rho.json");
    std::fs::write(
        &state,
        "{\"rows\": 2, \"cols\": 2, \"data\": [[1,0],[0,0],[0,0],[0,0]]}",
    )
    .unwrap();
    let o = covchan(&[
        "capacity",
        "--channel",
        &fixture("identity_qubit.json"),
        "--state",
        state.to_str().unwrap(),
    ]);
    let r: Capacity = io::parse(&stdout(&o)).unwrap();
    assert!(r.coherent_information_bits.abs() < 1e-12 && r.hadamard_bound_bits.is_none());
}

fn timing(channel: &str, spectrum: &str, phi0: &str) -> Output {
    covchan(&[
        "timing",
        "--channel",
        &fixture(channel),
        "--spectrum",
        &fixture(spectrum),
        "--phi0",
        &fixture(phi0),
        "--s",
        &std::f64::consts::PI.to_string(),
        "--N",
        "2",
    ])
}

#[test]
fn timing_examples() {
    for (ch, sp, phi) in [
        (
            "identity_qubit.json",
            "spectrum_qubit.json",
            "phi0_plus.json",
        ),
        (
            "shift_mixture_4.json",
            "spectrum_4.json",
            "phi0_low_plus_4.json",
        ),
    ] {
        let o = timing(ch, sp, phi);
        assert_eq!(o.status.code(), Some(0));
        let r: TimingReportJson = io::parse(&stdout(&o)).unwrap();
        assert_eq!(r.n, 2);
        assert!((r.bound - 1.0).abs() < 1e-12);
        assert!((r.q[0] - 1.0).abs() < 1e-12 && r.q[1].abs() < 1e-12);
    }
    let o = timing(
        "dephasing_qubit.json",
        "spectrum_qubit.json",
        "phi0_plus.json",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("orthogonality defect"));
}

#[test]
fn csv_output_has_header_and_complex_columns() {
    let o = covchan(&[
        "--format",
        "csv",
        "gaussian",
        "--std-dev",
        "1",
        "--dim",
        "3",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("field,row,col,re,im"));
    let vacuum = lines.find(|l| l.starts_with("mask[0],0,0,")).unwrap();
    let re: f64 = vacuum.split(',').nth(3).unwrap().parse().unwrap();
    assert!((re - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn seed_falls_back_to_environment() {
    let args = [
        "mc-gaussian",
        "--std-dev",
        "0.7",
        "--dim",
        "6",
        "--samples",
        "300",
    ];
    let explicit = covchan(&[&args[..], &["--seed", "77"]].concat());
    let from_env = Command::new(env!("CARGO_BIN_EXE_covchan"))
        .args(args)
        .env("COVCHAN_SEED", "77")
        .output()
        .unwrap();
    let other = covchan(&[&args[..], &["--seed", "78"]].concat());
    assert_eq!(explicit.stdout, from_env.stdout);
    assert_ne!(explicit.stdout, other.stdout);
}

#[test]
fn emitted_reports_reparse_to_identical_text() {
    let o = timing(
        "shift_mixture_4.json",
        "spectrum_4.json",
        "phi0_low_plus_4.json",
    );
    let text = stdout(&o);
    let r: TimingReportJson = io::parse(&text).unwrap();
    assert_eq!(io::to_json(&r), text);

    let o = covchan(&["gaussian", "--std-dev", "0.5", "--dim", "5"]);
    let text = stdout(&o);
    let g: io::GaussianDecompositionJson = io::parse(&text).unwrap();
    assert_eq!(io::to_json(&g), text);
}
