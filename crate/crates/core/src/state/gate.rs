use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::shape::Address;
use super::vector::PureState;
use crate::error::{Error, Result};

/// Gates the verifiers and gadgets need.
///
/// `Rz(ω) = |0⟩⟨0| + e^{iω}|1⟩⟨1|` (no global phase), `Rx(ω) = cos(ω/2) I − i sin(ω/2) X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H,
    Cnot,
    Rx(f64),
    Rz(f64),
    Swap,
    Cswap,
}

impl Gate {
    /// Number of register operands.
    pub fn arity(&self) -> usize {
        match self {
            Gate::H | Gate::Rx(_) | Gate::Rz(_) => 1,
            Gate::Cnot | Gate::Swap => 2,
            Gate::Cswap => 3,
        }
    }

    /// 2×2 matrix (row-major) for the single-qubit gates.
    pub fn matrix2(&self) -> Option<[Complex64; 4]> {
        let r = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Gate::H => Some([r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]),
            Gate::Rx(w) => {
                let (s, c) = (w / 2.0).sin_cos();
                let ms = Complex64::new(0.0, -s);
                Some([r(c), ms, ms, r(c)])
            }
            Gate::Rz(w) => Some([r(1.0), r(0.0), r(0.0), Complex64::from_polar(1.0, w)]),
            _ => None,
        }
    }
}

impl PureState {
    /// Applies `gate` to the registers in `targets` (controls first).
    pub fn apply_gate<A: Address + Copy>(&self, gate: Gate, targets: &[A]) -> Result<PureState> {
        if targets.len() != gate.arity() {
            return Err(Error::Address(format!(
                "{gate:?} takes {} registers, got {}",
                gate.arity(),
                targets.len()
            )));
        }
        let regs = targets
            .iter()
            .map(|t| self.shape().resolve(*t))
            .collect::<Result<Vec<_>>>()?;
        for (i, r) in regs.iter().enumerate() {
            if regs[..i].contains(r) {
                return Err(Error::Address(format!("register {r} used twice")));
            }
        }
        let dim = |r: usize| self.shape().dim(r);
        let need_qubit = |r: usize| -> Result<()> {
            if dim(r) == 2 {
                Ok(())
            } else {
                Err(Error::Address(format!(
                    "{gate:?} needs a qubit register, register {r} has dimension {}",
                    dim(r)
                )))
            }
        };
        let need_pair = |a: usize, b: usize| -> Result<()> {
            if dim(a) == dim(b) {
                Ok(())
            } else {
                Err(Error::Address(format!(
                    "{gate:?} needs equal dimensions, got {} and {}",
                    dim(a),
                    dim(b)
                )))
            }
        };
        match gate {
            Gate::H | Gate::Rx(_) | Gate::Rz(_) => {
                need_qubit(regs[0])?;
                Ok(self.apply_local(regs[0], &gate.matrix2().expect("single-qubit gate")))
            }
            Gate::Cnot => {
                need_qubit(regs[0])?;
                need_qubit(regs[1])?;
                Ok(self.permute(|d| {
                    if d[regs[0]] == 1 {
                        d[regs[1]] ^= 1;
                    }
                }))
            }
            Gate::Swap => {
                need_pair(regs[0], regs[1])?;
                Ok(self.permute(|d| d.swap(regs[0], regs[1])))
            }
            Gate::Cswap => {
                need_qubit(regs[0])?;
                need_pair(regs[1], regs[2])?;
                Ok(self.permute(|d| {
                    if d[regs[0]] == 1 {
                        d.swap(regs[1], regs[2]);
                    }
                }))
            }
        }
    }

    /// Applies a `d×d` row-major matrix to register `reg` of dimension `d`.
    pub(crate) fn apply_local(&self, reg: usize, matrix: &[Complex64]) -> PureState {
        let d = self.shape().dim(reg);
        debug_assert_eq!(matrix.len(), d * d);
        let stride = self.shape().stride(reg);
        let src = self.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
        let block = stride * d;
        let mut col = vec![Complex64::new(0.0, 0.0); d];
        for base in (0..src.len()).step_by(block) {
            for off in 0..stride {
                for (j, slot) in col.iter_mut().enumerate() {
                    *slot = src[base + off + j * stride];
                }
                for i in 0..d {
                    let row = &matrix[i * d..(i + 1) * d];
                    out[base + off + i * stride] = row.iter().zip(&col).map(|(m, a)| m * a).sum();
                }
            }
        }
        PureState::from_parts_unchecked(self.shape().clone(), out)
    }

    /// Basis permutation `|d⟩ ↦ |f(d)⟩` where `f` edits the digit tuple in place.
    fn permute(&self, f: impl Fn(&mut Vec<usize>)) -> PureState {
        let shape = self.shape();
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, a) in self.amplitudes().iter().enumerate() {
            let mut d = shape.digits_of(i);
            f(&mut d);
            out[shape.index_of(&d).expect("permutation stays in range")] = *a;
        }
        PureState::from_parts_unchecked(shape.clone(), out)
    }
}
