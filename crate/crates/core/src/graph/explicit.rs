use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::{GateOp, PairOutput, SuccinctCircuit, MAX_GATES};
use crate::error::{Error, Result};

/// Largest label width `expand` will enumerate.
pub const MAX_EXPAND_BITS: u32 = 16;

/// Undirected simple graph on `0..m`, edges stored as `(low, high)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitGraph {
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ExplicitGraph {
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at {a}")));
            }
            if a >= m || b >= m {
                return Err(Error::InvalidArgument(format!("edge ({a},{b}) outside 0..{m}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(ExplicitGraph { m, edges: set })
    }

    pub fn edgeless(m: usize) -> Self {
        ExplicitGraph { m, edges: BTreeSet::new() }
    }

    pub fn complete(m: usize) -> Self {
        let edges = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        ExplicitGraph { m, edges }
    }

    pub fn cycle(m: usize) -> Self {
        Self::new(m, (0..m).map(|i| (i, (i + 1) % m))).expect("cycle needs m ≥ 3")
    }

    /// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i — i+5`.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Self::new(10, outer.chain(inner).chain(spokes)).expect("static graph")
    }

    /// Subgraph induced on the first `k` vertices.
    pub fn induced_prefix(&self, k: usize) -> Self {
        let k = k.min(self.m);
        ExplicitGraph {
            m: k,
            edges: self.edges.iter().copied().filter(|&(_, b)| b < k).collect(),
        }
    }

    /// Erdős–Rényi `G(m, p)`.
    pub fn random<R: Rng + ?Sized>(m: usize, p: f64, rng: &mut R) -> Self {
        let edges = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|_| rng.random_bool(p))
            .collect();
        ExplicitGraph { m, edges }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Enumerates the graph a circuit describes.
pub fn expand(c: &SuccinctCircuit) -> Result<ExplicitGraph> {
    if c.n() > MAX_EXPAND_BITS {
        return Err(Error::Capacity(format!(
            "expanding 2^{} labels exceeds the 2^{MAX_EXPAND_BITS} cap",
            c.n()
        )));
    }
    let m = c.m() as usize;
    let mut edges = BTreeSet::new();
    for u in 0..m {
        for v in u + 1..m {
            if c.eval_pair(u as u64, v as u64) == PairOutput::Edge {
                edges.insert((u, v));
            }
        }
    }
    Ok(ExplicitGraph { m, edges })
}

/// Lookup-table circuit for `g` with `n`-bit labels: the edge output is an OR of one
/// minterm per edge and the pair output is constant 1.
pub fn encode_explicit(g: &ExplicitGraph, n: u32) -> Result<SuccinctCircuit> {
    if n == 0 || n > MAX_EXPAND_BITS || g.m() as u64 > 1u64 << n {
        return Err(Error::Capacity(format!(
            "{} vertices do not fit {n}-bit labels (cap 2^{MAX_EXPAND_BITS})",
            g.m()
        )));
    }
    let bits = 2 * n as usize;
    let estimate = bits + g.edge_count() * bits + 2;
    if estimate > MAX_GATES {
        return Err(Error::Capacity(format!("encoding needs about {estimate} gates")));
    }
    let mut gates: Vec<GateOp> = (0..bits).map(GateOp::Not).collect();
    let wire_of_gate = |k: usize| bits + k;
    // literal for input bit `i` taking value `b`
    let literal = |i: usize, b: bool| if b { i } else { wire_of_gate(i) };
    let mut minterms = Vec::with_capacity(g.edge_count());
    for (a, b) in g.edges() {
        let lits = (0..bits).map(|i| {
            let val = if i < bits / 2 { (a >> i) & 1 } else { (b >> (i - bits / 2)) & 1 };
            literal(i, val == 1)
        });
        let mut acc = None;
        for l in lits {
            acc = Some(match acc {
                None => l,
                Some(prev) => {
                    gates.push(GateOp::And(prev, l));
                    wire_of_gate(gates.len() - 1)
                }
            });
        }
        minterms.push(acc.expect("at least two literals"));
    }
    let edge = match minterms.split_first() {
        None => {
            gates.push(GateOp::Const0);
            wire_of_gate(gates.len() - 1)
        }
        Some((&first, rest)) => rest.iter().fold(first, |acc, &t| {
            gates.push(GateOp::Or(acc, t));
            wire_of_gate(gates.len() - 1)
        }),
    };
    gates.push(GateOp::Const1);
    let pair = wire_of_gate(gates.len() - 1);
    SuccinctCircuit::new(n, g.m() as u64, gates, pair, edge)
}
