use super::gate::Gate;
use super::measure::MeasurementBranch;
use super::shape::RegisterShape;
use super::vector::{tensor, PureState};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapTestMode {
    /// `½(1 + |⟨a|b⟩|²)` directly.
    ClosedForm,
    /// Ancilla, H, controlled swaps register by register, H, measure the ancilla.
    Circuit,
}

#[derive(Clone, Debug)]
pub struct SwapTestResult {
    pub acceptance: f64,
    /// Ancilla outcome branches (0 = accept), circuit mode only.
    pub branches: Option<[MeasurementBranch; 2]>,
}

pub fn swap_test(a: &PureState, b: &PureState, mode: SwapTestMode) -> Result<SwapTestResult> {
    a.check_same_dims(b)?;
    match mode {
        SwapTestMode::ClosedForm => Ok(SwapTestResult {
            acceptance: 0.5 * (1.0 + a.overlap_sqr(b)?),
            branches: None,
        }),
        SwapTestMode::Circuit => {
            let anc = PureState::basis(RegisterShape::single("swap_anc", 2)?, &[0])?;
            let mut s = tensor(&tensor(&anc, a)?, b)?;
            let k = a.shape().len();
            s = s.apply_gate(Gate::H, &[0])?;
            for r in 0..k {
                s = s.apply_gate(Gate::Cswap, &[0, 1 + r, 1 + k + r])?;
            }
            s = s.apply_gate(Gate::H, &[0])?;
            let [b0, b1] = computational_branches(&s)?;
            Ok(SwapTestResult { acceptance: b0.probability, branches: Some([b0, b1]) })
        }
    }
}

fn computational_branches(s: &PureState) -> Result<[MeasurementBranch; 2]> {
    let mut it = s.computational_measure(&[0])?.into_iter().map(|o| MeasurementBranch {
        outcome: o.outcome[0],
        probability: o.probability,
        post_state: o.post_state,
    });
    let b0 = it.next().expect("qubit has two outcomes");
    let b1 = it.next().expect("qubit has two outcomes");
    Ok([b0, b1])
}

/// Trace distance between two pure states, `√(1 − |⟨a|b⟩|²)`.
pub fn pure_trace_distance(a: &PureState, b: &PureState) -> Result<f64> {
    Ok((1.0 - a.overlap_sqr(b)?).max(0.0).sqrt())
}
