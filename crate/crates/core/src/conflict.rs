//! The classical reject predicate shared by both verifiers.

use crate::error::{Error, Result};
use crate::graph::SuccinctCircuit;
use crate::provers::COLORS;

/// Largest `n` for which the label-pair edge table is materialized.
pub const MAX_TABLE_BITS: u32 = 8;

/// Precomputed reject predicate over single-register outcomes `o = v·3 + color`.
#[derive(Clone, Debug)]
pub struct ConflictTable {
    labels: usize,
    edges: Vec<bool>,
}

impl ConflictTable {
    pub fn new(c: &SuccinctCircuit) -> Result<Self> {
        let n = c.n();
        if n > MAX_TABLE_BITS {
            return Err(Error::Capacity(format!(
                "n = {n} exceeds the outcome-grid cap of {MAX_TABLE_BITS}"
            )));
        }
        let labels = 1usize << n;
        let mut edges = vec![false; labels * labels];
        for a in 0..labels {
            for b in a + 1..labels {
                let e = c.is_edge(a as u64, b as u64);
                edges[a * labels + b] = e;
                edges[b * labels + a] = e;
            }
        }
        Ok(ConflictTable { labels, edges })
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    /// Size of one register's outcome alphabet.
    pub fn outcomes(&self) -> usize {
        self.labels * COLORS
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.edges[a * self.labels + b]
    }

    /// Same vertex with two colors, or an edge whose endpoints share a color.
    pub fn rejects_pair(&self, v1: usize, c1: usize, v2: usize, c2: usize) -> bool {
        if v1 == v2 {
            c1 != c2
        } else {
            c1 == c2 && self.is_edge(v1.min(v2), v1.max(v2))
        }
    }

    pub fn rejects(&self, o1: usize, o2: usize) -> bool {
        self.rejects_pair(o1 / COLORS, o1 % COLORS, o2 / COLORS, o2 % COLORS)
    }

    /// Dense `outcomes × outcomes` boolean matrix of `rejects`.
    pub fn dense(&self) -> Vec<bool> {
        let d = self.outcomes();
        (0..d * d).map(|i| self.rejects(i / d, i % d)).collect()
    }

    /// Probability that independent draws from `p` and `q` trigger a rejection.
    pub fn reject_probability(&self, p: &[f64], q: &[f64]) -> f64 {
        let mut total = 0.0;
        for v1 in 0..self.labels {
            let row1 = &p[v1 * COLORS..(v1 + 1) * COLORS];
            if row1.iter().all(|&x| x == 0.0) {
                continue;
            }
            for v2 in 0..self.labels {
                let row2 = &q[v2 * COLORS..(v2 + 1) * COLORS];
                if v1 == v2 {
                    let s1: f64 = row1.iter().sum();
                    let s2: f64 = row2.iter().sum();
                    let same: f64 = row1.iter().zip(row2).map(|(a, b)| a * b).sum();
                    total += s1 * s2 - same;
                } else if self.is_edge(v1.min(v2), v1.max(v2)) {
                    total += row1.iter().zip(row2).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        total
    }
}
