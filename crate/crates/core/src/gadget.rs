//! Single-qubit unitaries as `e^{iθ} Rz(α) H Rz(β) H Rz(γ)`, magic-state injection of
//! `Rz`, and the verifier that trades a quantum proof for its classical description.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{tensor, Gate, MeasurementBranch, PostState, PureState, RegisterShape};

pub type Unitary2 = Matrix2<Complex64>;

/// Unitarity tolerance for decomposition inputs.
pub const UNITARY_TOL: f64 = 1e-9;
/// Below this an off-diagonal or diagonal entry counts as exactly zero.
const DEGENERATE_TOL: f64 = 1e-15;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reduce(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU { 0.0 } else { r }
}

pub fn rz(w: f64) -> Unitary2 {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, w))
}

pub fn hadamard() -> Unitary2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
}

/// Largest singular value, from the closed form for 2×2 matrices.
pub fn operator_norm(m: &Unitary2) -> f64 {
    let fro: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm_sqr();
    ((fro + (fro * fro - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt()
}

/// Haar-random element of U(2).
pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    let mut g = || c(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (g(), g());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
    Matrix2::new(a, -b.conj() * phase, b, a.conj() * phase)
}

/// `t` angles uniform in `[0, 2π)`, reproducible from `seed`.
pub fn random_angles(t: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..t).map(|_| rng.random_range(0.0..TAU)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zhzhz {
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Zhzhz {
    pub fn unitary(&self) -> Unitary2 {
        let h = hadamard();
        rz(self.alpha) * h * rz(self.beta) * h * rz(self.gamma)
            * Complex64::from_polar(1.0, self.theta)
    }

    /// Magic-state angles in the order the gadgets consume them.
    pub fn injection_order(&self) -> [f64; 3] {
        [self.gamma, self.beta, self.alpha]
    }

    fn in_range(&self) -> bool {
        [self.theta, self.alpha, self.beta, self.gamma]
            .iter()
            .all(|a| a.is_finite() && (0.0..TAU).contains(a))
    }
}

/// `‖U†U − I‖`.
pub fn unitarity_error(u: &Unitary2) -> f64 {
    operator_norm(&(u.adjoint() * u - Unitary2::identity()))
}

pub fn zhzhz_decompose(u: &Unitary2) -> Result<Zhzhz> {
    let err = unitarity_error(u);
    if !err.is_finite() || err > UNITARY_TOL {
        return Err(Error::NonUnitary(err));
    }
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let d = if u10.norm() <= DEGENERATE_TOL && u01.norm() <= DEGENERATE_TOL {
        Zhzhz { theta: u00.arg(), alpha: u11.arg() - u00.arg(), beta: 0.0, gamma: 0.0 }
    } else if u00.norm() <= DEGENERATE_TOL {
        let theta = u10.arg();
        Zhzhz { theta, alpha: 0.0, beta: PI, gamma: u01.arg() - theta }
    } else {
        // H Rz(β) H = e^{iβ/2} Rx(β), so |u00| = cos(β/2) and each off-diagonal entry
        // carries a −i from Rx.
        let beta = 2.0 * u00.norm().min(1.0).acos();
        Zhzhz {
            theta: u00.arg() - beta / 2.0,
            alpha: u10.arg() - u00.arg() + FRAC_PI_2,
            beta,
            gamma: u01.arg() - u00.arg() + FRAC_PI_2,
        }
    };
    Ok(Zhzhz {
        theta: reduce(d.theta),
        alpha: reduce(d.alpha),
        beta: reduce(d.beta),
        gamma: reduce(d.gamma),
    })
}

/// Operator-norm distance between `u` and its reconstruction.
pub fn reconstruction_error(u: &Unitary2, d: &Zhzhz) -> f64 {
    operator_norm(&(d.unitary() - u))
}

fn qubit_shape(label: &str) -> RegisterShape {
    RegisterShape::single(label, 2).expect("qubit shape is valid")
}

/// `(|0⟩ + e^{iω}|1⟩)/√2`.
pub fn magic_state(w: f64) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(qubit_shape("magic"), vec![c(h, 0.0), Complex64::from_polar(h, w)])
        .expect("magic state is normalized")
}

pub fn apply_unitary(s: &PureState, u: &Unitary2) -> Result<PureState> {
    if s.shape().dims() != [2] {
        return Err(Error::ShapeMismatch(format!("{:?} is not one qubit", s.shape().dims())));
    }
    let a = s.amplitudes();
    let out = u * nalgebra::Vector2::new(a[0], a[1]);
    PureState::normalized(s.shape().clone(), vec![out[0], out[1]])
}

/// Injects `Rz(ω)` into a single-qubit `target` using `|m_ω⟩`.
///
/// Branch 0 projects `|m_ω⟩ ⊗ target` onto `span{|00⟩, |11⟩}`, applies CNOT from the magic
/// qubit onto the target, and discards the target qubit, leaving `Rz(ω)·target` in the
/// magic qubit's slot. Branch 1 is the projection onto `span{|01⟩, |10⟩}`, left as a
/// two-qubit state.
pub fn magic_gadget(target: &PureState, w: f64) -> Result<[MeasurementBranch; 2]> {
    if target.shape().dims() != [2] {
        return Err(Error::ShapeMismatch(format!(
            "gadget target {:?} is not one qubit",
            target.shape().dims()
        )));
    }
    let joint = tensor(&magic_state(w), target)?;
    let a = joint.amplitudes();
    let zero = Complex64::new(0.0, 0.0);
    let even = MeasurementBranch::from_projection(0, &joint, vec![a[0], zero, zero, a[3]]);
    let odd = MeasurementBranch::from_projection(1, &joint, vec![zero, a[1], a[2], zero]);
    let even = match even.post_state {
        PostState::Defined(s) => {
            let out = s.apply_gate(Gate::Cnot, &[0, 1])?.drop_register(1, 0, 1e-12)?;
            MeasurementBranch {
                post_state: PostState::Defined(out.with_shape(qubit_shape("q"))?),
                ..even
            }
        }
        PostState::Undefined => even,
    };
    Ok([even, odd])
}

/// Runs the gadget chain `Rz(ω_0), H, Rz(ω_1), H, …` on `|0⟩`, following the success
/// branch. Returns the product of success probabilities and the final state.
pub fn cascade(angles: &[f64]) -> Result<(f64, PureState)> {
    let mut state = PureState::basis(qubit_shape("q"), &[0])?;
    let mut p_success = 1.0;
    for (i, &w) in angles.iter().enumerate() {
        if i > 0 {
            state = state.apply_gate(Gate::H, &[0])?;
        }
        let [ok, _] = magic_gadget(&state, w)?;
        p_success *= ok.probability;
        match ok.post_state {
            PostState::Defined(s) => state = s,
            PostState::Undefined => return Err(Error::InvalidArgument("gadget success branch vanished".into())),
        }
    }
    Ok((p_success, state))
}

/// The state the chain would produce with ideal `Rz` gates.
pub fn ideal_chain(angles: &[f64]) -> Result<PureState> {
    let mut state = PureState::basis(qubit_shape("q"), &[0])?;
    for (i, &w) in angles.iter().enumerate() {
        if i > 0 {
            state = state.apply_gate(Gate::H, &[0])?;
        }
        state = state.apply_gate(Gate::Rz(w), &[0])?;
    }
    Ok(state)
}

/// Acceptance of the transformed verifier for one chain: any gadget failure accepts,
/// full success runs the inner verifier, which accepts with `p`.
pub fn cascade_acceptance(angles: &[f64], p: f64) -> Result<f64> {
    check_probability(p)?;
    let (ps, _) = cascade(angles)?;
    Ok(1.0 - ps + ps * p)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")))
    }
}

/// Classical proof: one decomposition per single-qubit proof, plus the magic-state count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetProgram {
    pub unitaries: Vec<Zhzhz>,
    pub t: usize,
}

impl GadgetProgram {
    pub fn new(unitaries: Vec<Zhzhz>) -> Result<Self> {
        let p = GadgetProgram { t: 3 * unitaries.len(), unitaries };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t != 3 * self.unitaries.len() {
            return Err(Error::InvalidArgument(format!(
                "t = {} but {} unitaries need {}",
                self.t,
                self.unitaries.len(),
                3 * self.unitaries.len()
            )));
        }
        if let Some(i) = self.unitaries.iter().position(|u| !u.in_range()) {
            return Err(Error::InvalidArgument(format!("unitary {i} has an angle outside [0, 2π)")));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: GadgetProgram =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("program serializes")
    }

    /// Magic angles in consumption order.
    pub fn magic_angles(&self) -> Vec<f64> {
        self.unitaries.iter().flat_map(|u| u.injection_order()).collect()
    }

    /// Per-proof states after successful injection.
    pub fn prepared_states(&self) -> Result<Vec<PureState>> {
        self.unitaries
            .iter()
            .map(|u| cascade(&u.injection_order()).map(|(_, s)| s))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GadgetMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

/// Acceptance of the verifier that builds each proof from its classical description.
pub fn single_qubit_proof_verifier(p: f64, program: &GadgetProgram, mode: GadgetMode) -> Result<f64> {
    check_probability(p)?;
    program.validate()?;
    let mut gadget_probs = Vec::with_capacity(program.t);
    for u in &program.unitaries {
        let mut state = PureState::basis(qubit_shape("q"), &[0])?;
        for (i, w) in u.injection_order().into_iter().enumerate() {
            if i > 0 {
                state = state.apply_gate(Gate::H, &[0])?;
            }
            let [ok, _] = magic_gadget(&state, w)?;
            gadget_probs.push(ok.probability);
            state = ok.post_state.state().cloned().ok_or_else(|| {
                Error::InvalidArgument("gadget success branch vanished".into())
            })?;
        }
    }
    match mode {
        GadgetMode::Exact => {
            let ps: f64 = gadget_probs.iter().product();
            Ok(1.0 - ps + ps * p)
        }
        GadgetMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidArgument("zero samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut accepted = 0u64;
            for _ in 0..samples {
                let all_ok = gadget_probs.iter().all(|&q| rng.random_bool(q.clamp(0.0, 1.0)));
                if !all_ok || rng.random_bool(p) {
                    accepted += 1;
                }
            }
            Ok(accepted as f64 / samples as f64)
        }
    }
}

/// End-to-end run of the transformation on a one-qubit inner protocol whose yes-instance
/// measures `|τ⟩⟨τ|` and whose no-instance measures `½|τ⟩⟨τ|`, where `τ` is the ideal
/// output of the honest chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub t: usize,
    pub inner_completeness: f64,
    pub inner_soundness: f64,
    pub w_completeness: f64,
    pub w_soundness: f64,
    pub gap: f64,
    pub predicted_gap: f64,
    pub prepared_fidelity: f64,
}

pub fn end_to_end_reduction(honest_angles: &[f64]) -> Result<ReductionReport> {
    let tau = ideal_chain(honest_angles)?;
    let (_, prepared) = cascade(honest_angles)?;
    let fidelity = prepared.fidelity(&tau)?.clamp(0.0, 1.0);
    let c = fidelity;
    let s = 0.5 * fidelity;
    let w_c = cascade_acceptance(honest_angles, c)?;
    let w_s = cascade_acceptance(honest_angles, s)?;
    let t = honest_angles.len();
    Ok(ReductionReport {
        t,
        inner_completeness: c,
        inner_soundness: s,
        w_completeness: w_c,
        w_soundness: w_s,
        gap: w_c - w_s,
        predicted_gap: 2f64.powi(-(t as i32)) * (c - s),
        prepared_fidelity: fidelity,
    })
}
