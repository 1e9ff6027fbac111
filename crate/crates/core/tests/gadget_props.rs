use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uvlab::gadget::{
    cascade, cascade_acceptance, end_to_end_reduction, haar_unitary2, ideal_chain, magic_gadget,
    random_angles, single_qubit_proof_verifier, zhzhz_decompose, GadgetMode, GadgetProgram, Unitary2, Zhzhz,
};
use uvlab::state::{PureState, RegisterShape};

type M = [[Complex64; 2]; 2];

fn mul(a: M, b: M) -> M {
    let mut o = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    o
}

fn rz_raw(w: f64) -> M {
    [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, w)]]
}

fn h_raw() -> M {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `e^{iθ} Rz(α) H Rz(β) H Rz(γ)` by explicit 2×2 products.
fn oracle_unitary(d: &Zhzhz) -> M {
    let m = mul(mul(mul(mul(rz_raw(d.alpha), h_raw()), rz_raw(d.beta)), h_raw()), rz_raw(d.gamma));
    let p = Complex64::from_polar(1.0, d.theta);
    m.map(|row| row.map(|z| z * p))
}

fn max_entry_gap(a: M, b: &Unitary2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[(i, j)]).norm());
        }
    }
    worst
}

fn qubit(a: Complex64, b: Complex64) -> PureState {
    PureState::normalized(RegisterShape::single("q", 2).unwrap(), vec![a, b]).unwrap()
}

#[test]
fn haar_decompositions_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        let u = haar_unitary2(&mut rng);
        let d = zhzhz_decompose(&u).unwrap();
        // Entrywise gap bounds the operator-norm gap up to a factor 2.
        assert!(max_entry_gap(oracle_unitary(&d), &u) <= 0.5e-10);
        for a in [d.theta, d.alpha, d.beta, d.gamma] {
            assert!((0.0..TAU).contains(&a));
        }
    }
}

#[test]
fn degenerate_inputs() {
    let z = Complex64::new(0.0, 0.0);
    let x: Unitary2 = Unitary2::new(z, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), z);
    let d = zhzhz_decompose(&x).unwrap();
    assert!(max_entry_gap(oracle_unitary(&d), &x) < 1e-12);
    let phase = Unitary2::identity() * Complex64::from_polar(1.0, 2.0);
    let d = zhzhz_decompose(&phase).unwrap();
    assert!(max_entry_gap(oracle_unitary(&d), &phase) < 1e-12);
    assert!(zhzhz_decompose(&(Unitary2::identity() * Complex64::new(2.0, 0.0))).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gadget_success_is_half_and_applies_rz(
        re0 in -1.0f64..1.0, im0 in -1.0f64..1.0, re1 in -1.0f64..1.0, im1 in -1.0f64..1.0, w in 0.0f64..TAU,
    ) {
        let (a, b) = (Complex64::new(re0, im0), Complex64::new(re1, im1));
        prop_assume!(a.norm_sqr() + b.norm_sqr() > 1e-6);
        let target = qubit(a, b);
        let [ok, fail] = magic_gadget(&target, w).unwrap();
        prop_assert!((ok.probability - 0.5).abs() < 1e-12);
        prop_assert!((fail.probability - 0.5).abs() < 1e-12);
        let amps = target.amplitudes();
        let expect = qubit(amps[0], amps[1] * Complex64::from_polar(1.0, w));
        prop_assert!((ok.post_state.state().unwrap().fidelity(&expect).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain_success_halves_each_step(t in 1usize..10, seed in any::<u64>(), p in 0.0f64..=1.0) {
        let angles = random_angles(t, seed);
        let (ps, state) = cascade(&angles).unwrap();
        prop_assert!((ps - 0.5f64.powi(t as i32)).abs() < 1e-12);
        prop_assert!((state.fidelity(&ideal_chain(&angles).unwrap()).unwrap() - 1.0).abs() < 1e-10);
        let w = cascade_acceptance(&angles, p).unwrap();
        prop_assert!((w - (1.0 - ps + ps * p)).abs() < 1e-15);
    }
}

#[test]
fn gap_scales_as_two_to_minus_t() {
    for t in 1..=10 {
        let angles = random_angles(t, t as u64);
        let (c, s) = (0.9, 0.3);
        let gap = cascade_acceptance(&angles, c).unwrap() - cascade_acceptance(&angles, s).unwrap();
        assert!((gap - 0.5f64.powi(t as i32) * (c - s)).abs() < 1e-12);
    }
}

#[test]
fn reduction_is_invariant() {
    for t in 1..=6 {
        let r = end_to_end_reduction(&random_angles(t, 100 + t as u64)).unwrap();
        assert!((r.prepared_fidelity - 1.0).abs() < 1e-10);
        assert!((r.gap - r.predicted_gap).abs() < 1e-12);
        assert!(r.w_completeness > r.w_soundness);
    }
}

#[test]
fn sampled_verifier_converges() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let program = GadgetProgram::new(
        (0..2).map(|_| zhzhz_decompose(&haar_unitary2(&mut rng)).unwrap()).collect(),
    )
    .unwrap();
    let exact = single_qubit_proof_verifier(0.4, &program, GadgetMode::Exact).unwrap();
    assert!((exact - (1.0 - 0.5f64.powi(6) * 0.6)).abs() < 1e-12);
    let n = 200_000;
    let sampled = single_qubit_proof_verifier(0.4, &program, GadgetMode::Sampled { samples: n, seed: 2 }).unwrap();
    let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
    assert!((sampled - exact).abs() <= 4.0 * sigma, "{sampled} vs {exact}");
}

#[test]
fn program_json_round_trip_and_validation() {
    let p = GadgetProgram::new(vec![Zhzhz { theta: 0.1, alpha: 1.0, beta: 2.0, gamma: 3.0 }]).unwrap();
    assert_eq!(GadgetProgram::from_json(&p.to_json()).unwrap(), p);
    assert_eq!(p.magic_angles(), vec![3.0, 2.0, 1.0]);
    assert!(GadgetProgram::from_json(r#"{"unitaries":[],"t":3}"#).is_err());
    assert!(GadgetProgram::from_json(
        r#"{"unitaries":[{"theta":0,"alpha":7,"beta":0,"gamma":0}],"t":3}"#
    )
    .is_err());
    assert!(single_qubit_proof_verifier(1.5, &p, GadgetMode::Exact).is_err());
}
