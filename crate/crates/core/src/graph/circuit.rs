use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on gate count accepted from any source.
pub const MAX_GATES: usize = 100_000;
/// Largest label width; vertex labels are held in a `u64`.
pub const MAX_BITS: u32 = 32;

/// A wire is an input bit or the output of an earlier gate.
///
/// Wires are numbered `0..n` for `u` bits, `n..2n` for `v` bits, then `2n + k` for gate `k`.
pub type WireId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateOp {
    And(WireId, WireId),
    Or(WireId, WireId),
    Not(WireId),
    Const0,
    Const1,
}

impl GateOp {
    fn inputs(&self) -> impl Iterator<Item = WireId> {
        let (a, b) = match *self {
            GateOp::And(a, b) | GateOp::Or(a, b) => (Some(a), Some(b)),
            GateOp::Not(a) => (Some(a), None),
            GateOp::Const0 | GateOp::Const1 => (None, None),
        };
        a.into_iter().chain(b)
    }
}

/// The two output bits of a small circuit, after range and ordering checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairOutput {
    /// `00`: a label out of range or `u ≥ v`.
    Invalid,
    /// `10`: a valid pair that is not an edge.
    NonEdge,
    /// `11`: an edge.
    Edge,
}

impl PairOutput {
    pub fn bits(self) -> u8 {
        match self {
            PairOutput::Invalid => 0b00,
            PairOutput::NonEdge => 0b10,
            PairOutput::Edge => 0b11,
        }
    }
}

/// Boolean circuit with two `n`-bit inputs describing a graph on `m ≤ 2^n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccinctCircuit {
    n: u32,
    m: u64,
    gates: Vec<GateOp>,
    out_pair: WireId,
    out_edge: WireId,
}

impl SuccinctCircuit {
    pub fn new(
        n: u32,
        m: u64,
        gates: Vec<GateOp>,
        out_pair: WireId,
        out_edge: WireId,
    ) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::InvalidArgument(format!("n must be in 1..={MAX_BITS}, got {n}")));
        }
        if m == 0 || m > 1u64 << n {
            return Err(Error::InvalidArgument(format!("m must be in 1..=2^{n}, got {m}")));
        }
        if gates.len() > MAX_GATES {
            return Err(Error::Capacity(format!(
                "{} gates exceed the limit of {MAX_GATES}",
                gates.len()
            )));
        }
        let inputs = 2 * n as usize;
        for (k, g) in gates.iter().enumerate() {
            if let Some(w) = g.inputs().find(|&w| w >= inputs + k) {
                return Err(Error::InvalidArgument(format!(
                    "gate {k} reads wire {w}, which is not an input or earlier gate"
                )));
            }
        }
        let wires = inputs + gates.len();
        for w in [out_pair, out_edge] {
            if w >= wires {
                return Err(Error::InvalidArgument(format!("output wire {w} does not exist")));
            }
        }
        Ok(SuccinctCircuit { n, m, gates, out_pair, out_edge })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `2^n`, the number of node labels.
    pub fn label_count(&self) -> u64 {
        1u64 << self.n
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn out_pair(&self) -> WireId {
        self.out_pair
    }

    pub fn out_edge(&self) -> WireId {
        self.out_edge
    }

    /// Raw `(pair, edge)` bits with no range or ordering discipline.
    pub fn eval_raw(&self, u: u64, v: u64) -> (bool, bool) {
        let n = self.n as usize;
        let mut wires = Vec::with_capacity(2 * n + self.gates.len());
        wires.extend((0..n).map(|i| (u >> i) & 1 == 1));
        wires.extend((0..n).map(|i| (v >> i) & 1 == 1));
        for g in &self.gates {
            let bit = match *g {
                GateOp::And(a, b) => wires[a] && wires[b],
                GateOp::Or(a, b) => wires[a] || wires[b],
                GateOp::Not(a) => !wires[a],
                GateOp::Const0 => false,
                GateOp::Const1 => true,
            };
            wires.push(bit);
        }
        (wires[self.out_pair], wires[self.out_edge])
    }

    /// Output on `(u, v)`. Out-of-range labels and `u ≥ v` give `00` whatever the
    /// circuit computes; for valid pairs the edge bit is `pair ∧ edge` of the raw circuit.
    pub fn eval_pair(&self, u: u64, v: u64) -> PairOutput {
        if u >= v || u >= self.m || v >= self.m {
            return PairOutput::Invalid;
        }
        match self.eval_raw(u, v) {
            (true, true) => PairOutput::Edge,
            _ => PairOutput::NonEdge,
        }
    }

    /// Edge query on an unordered pair: orders the labels first.
    pub fn is_edge(&self, a: u64, b: u64) -> bool {
        self.eval_pair(a.min(b), a.max(b)) == PairOutput::Edge
    }
}
