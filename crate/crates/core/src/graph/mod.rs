//! Small-circuit graph representation, its text format, and brute-force oracles.

mod circuit;
mod coloring;
mod explicit;
mod sgc;

pub use circuit::{GateOp, PairOutput, SuccinctCircuit, WireId, MAX_BITS, MAX_GATES};
pub use coloring::{
    brute_force_3color, min_violation_coloring, Coloring, MAX_MIN_VIOLATION_VERTICES,
    MAX_ORACLE_VERTICES,
};
pub use explicit::{encode_explicit, expand, ExplicitGraph, MAX_EXPAND_BITS};
pub use sgc::{parse_sgc, write_sgc};

impl std::str::FromStr for SuccinctCircuit {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        parse_sgc(s)
    }
}
