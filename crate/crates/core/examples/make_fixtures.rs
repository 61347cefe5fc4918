//! Regenerates the JSON fixtures under `fixtures/`.
//!
//! cargo run -p covchan-core --example make_fixtures -- fixtures

use std::fs;
use std::path::PathBuf;

use covchan_core::capacity::qubit_mask;
use covchan_core::covariant::Spectrum;
use covchan_core::io::{self, MatrixJson, SpectrumJson, VectorJson};
use covchan_core::matcore::linalg::{self, c};
use covchan_core::random::{random_covariant, random_spectrum};
use covchan_core::timing::build_shift_mixture;
use covchan_core::{CMatrix, CVector, Channel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: String| fs::write(dir.join(name), text).unwrap();
    let spectrum = |s: &Spectrum| {
        io::to_json(&SpectrumJson {
            energies: s.energies().to_vec(),
            match_tol: None,
        })
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;

    let qubit = Spectrum::integer(2);
    let four = Spectrum::integer(4);
    write("spectrum_qubit.json", spectrum(&qubit));
    write("spectrum_4.json", spectrum(&four));

    for gamma in [0.3, 0.7] {
        let ad = Channel::amplitude_damping(gamma).unwrap();
        write(
            &format!("amplitude_damping_{gamma}.json"),
            io::channel_to_json(&ad),
        );
    }
    write(
        "identity_qubit.json",
        io::channel_to_json(&Channel::identity(2)),
    );
    write(
        "identity_4.json",
        io::channel_to_json(&Channel::identity(4)),
    );
    write(
        "dephasing_qubit.json",
        io::channel_to_json(&Channel::dephasing(2)),
    );
    let mix = build_shift_mixture(&four, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
    write("shift_mixture_4.json", io::channel_to_json(&mix.channel));
    let hadamard = linalg::from_real_rows(2, 2, &[h, h, h, -h]);
    write(
        "hadamard_gate.json",
        io::channel_to_json(&Channel::unitary(hadamard).unwrap()),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s5 = random_spectrum(5, &mut rng);
    let g5 = random_covariant(&s5, 3, &mut rng).unwrap();
    write("spectrum_random_5.json", spectrum(&s5));
    write("random_covariant_5.json", io::channel_to_json(&g5));

    let plus = CVector::from_vec(vec![c(h, 0.0), c(h, 0.0)]);
    write("phi0_plus.json", io::to_json(&VectorJson::from(&plus)));
    let mut low = CVector::zeros(4);
    low[0] = c(h, 0.0);
    low[1] = c(h, 0.0);
    write("phi0_low_plus_4.json", io::to_json(&VectorJson::from(&low)));

    let ones = CMatrix::from_element(3, 3, c(1.0, 0.0));
    write("mask_ones_3.json", io::to_json(&MatrixJson::from(&ones)));
    write(
        "mask_identity_3.json",
        io::to_json(&MatrixJson::from(&linalg::identity(3))),
    );
    write(
        "mask_qubit_sqrt_half.json",
        io::to_json(&MatrixJson::from(&qubit_mask(0.5f64.sqrt()))),
    );
    let bad = linalg::from_real_rows(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    write("mask_not_psd.json", io::to_json(&MatrixJson::from(&bad)));
}
