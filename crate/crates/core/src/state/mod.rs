//! Mixed-radix pure-state engine.
//!
//! States are dense complex vectors over an ordered list of named registers. Node
//! registers have dimension `2^n` and color registers dimension 3; neither is split
//! into qubits, so projectors onto `|u_m⟩` act on a register as a whole.

mod gate;
mod measure;
mod shape;
mod swap;
mod vector;

pub use gate::Gate;
pub use measure::{BasisOutcome, MeasurementBranch, PostState, ZERO_BRANCH_TOL};
pub use shape::{Address, RegisterShape, MAX_TOTAL_DIM};
pub use swap::{pure_trace_distance, swap_test, SwapTestMode, SwapTestResult};
pub use vector::{
    tensor, uniform_amplitudes, uniform_state, PureState, INPUT_NORM_TOL, INTERNAL_NORM_TOL,
};
