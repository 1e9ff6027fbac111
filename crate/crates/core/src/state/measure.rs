use num_complex::Complex64;

use super::shape::Address;
use super::vector::PureState;
use crate::error::Result;

/// Below this probability a branch has no well-defined post-measurement state.
pub const ZERO_BRANCH_TOL: f64 = 1e-300;

/// Post-measurement state of one branch.
#[derive(Clone, Debug, PartialEq)]
pub enum PostState {
    Defined(PureState),
    /// The branch has probability zero; there is nothing to renormalize.
    Undefined,
}

impl PostState {
    pub fn state(&self) -> Option<&PureState> {
        match self {
            PostState::Defined(s) => Some(s),
            PostState::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, PostState::Defined(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: PostState,
}

impl MeasurementBranch {
    pub(crate) fn from_projection(outcome: usize, like: &PureState, amps: Vec<Complex64>) -> Self {
        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let post_state = if probability > ZERO_BRANCH_TOL {
            let s = 1.0 / probability.sqrt();
            PostState::Defined(PureState::from_parts_unchecked(
                like.shape().clone(),
                amps.into_iter().map(|a| a * s).collect(),
            ))
        } else {
            PostState::Undefined
        };
        MeasurementBranch { outcome, probability, post_state }
    }
}

/// One outcome tuple of a computational-basis measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisOutcome {
    pub outcome: Vec<usize>,
    pub probability: f64,
    pub post_state: PostState,
}

impl PureState {
    /// Measures register `target` with `{P0 = |u_m⟩⟨u_m|, P1 = I − P0}`; returns the
    /// branches for outcomes 0 and 1 in that order.
    pub fn uniformity_measure(&self, target: impl Address) -> Result<[MeasurementBranch; 2]> {
        let reg = self.shape().resolve(target)?;
        let d = self.shape().dim(reg);
        let stride = self.shape().stride(reg);
        let src = self.amplitudes();
        let mut p0 = vec![Complex64::new(0.0, 0.0); src.len()];
        let inv_d = 1.0 / d as f64;
        for base in (0..src.len()).step_by(stride * d) {
            for off in 0..stride {
                let sum: Complex64 = (0..d).map(|j| src[base + off + j * stride]).sum();
                let proj = sum * inv_d;
                for j in 0..d {
                    p0[base + off + j * stride] = proj;
                }
            }
        }
        let p1: Vec<Complex64> = src.iter().zip(&p0).map(|(a, b)| a - b).collect();
        Ok([
            MeasurementBranch::from_projection(0, self, p0),
            MeasurementBranch::from_projection(1, self, p1),
        ])
    }

    /// Probability of outcome 0 of the uniformity measurement on `target`, without
    /// building post states.
    pub fn uniformity_zero_probability(&self, target: impl Address) -> Result<f64> {
        let reg = self.shape().resolve(target)?;
        let d = self.shape().dim(reg);
        let stride = self.shape().stride(reg);
        let src = self.amplitudes();
        let mut total = 0.0;
        for base in (0..src.len()).step_by(stride * d) {
            for off in 0..stride {
                let sum: Complex64 = (0..d).map(|j| src[base + off + j * stride]).sum();
                total += sum.norm_sqr() / d as f64;
            }
        }
        Ok(total)
    }

    /// Marginal distribution of the registers in `targets`, indexed mixed-radix in the
    /// order given.
    pub fn marginal<A: Address + Copy>(&self, targets: &[A]) -> Result<Vec<f64>> {
        let regs = self.resolve_all(targets)?;
        let dims: Vec<usize> = regs.iter().map(|&r| self.shape().dim(r)).collect();
        let mut out = vec![0.0; dims.iter().product()];
        for (i, a) in self.amplitudes().iter().enumerate() {
            out[self.outcome_index(i, &regs, &dims)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Full computational-basis measurement of `targets`: every outcome tuple with its
    /// probability and collapsed state (the measured registers stay in the shape).
    pub fn computational_measure<A: Address + Copy>(
        &self,
        targets: &[A],
    ) -> Result<Vec<BasisOutcome>> {
        let regs = self.resolve_all(targets)?;
        let dims: Vec<usize> = regs.iter().map(|&r| self.shape().dim(r)).collect();
        let count: usize = dims.iter().product();
        let mut buckets: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); count];
        for (i, a) in self.amplitudes().iter().enumerate() {
            buckets[self.outcome_index(i, &regs, &dims)].push((i, *a));
        }
        Ok(buckets
            .into_iter()
            .enumerate()
            .map(|(o, entries)| {
                let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
                for (i, a) in entries {
                    amps[i] = a;
                }
                let branch = MeasurementBranch::from_projection(o, self, amps);
                BasisOutcome {
                    outcome: split_index(o, &dims),
                    probability: branch.probability,
                    post_state: branch.post_state,
                }
            })
            .collect())
    }

    fn resolve_all<A: Address + Copy>(&self, targets: &[A]) -> Result<Vec<usize>> {
        targets.iter().map(|t| self.shape().resolve(*t)).collect()
    }

    fn outcome_index(&self, flat: usize, regs: &[usize], dims: &[usize]) -> usize {
        let shape = self.shape();
        regs.iter()
            .zip(dims)
            .fold(0, |acc, (&r, &d)| acc * d + (flat / shape.stride(r)) % d)
    }
}

fn split_index(mut o: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = o % d;
        o /= d;
    }
    out
}
