use serde::{Deserialize, Serialize};

use super::explicit::ExplicitGraph;
use crate::error::{Error, Result};

/// Largest vertex count the exhaustive 3-coloring search accepts.
pub const MAX_ORACLE_VERTICES: usize = 20;
/// Largest vertex count for the minimum-violation search.
pub const MAX_MIN_VIOLATION_VERTICES: usize = 16;

/// Colors in `{0,1,2}` for vertices `0..m`; every label at or past `m` has color 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Coloring(Vec<u8>);

impl Coloring {
    pub fn new(colors: Vec<u8>) -> Result<Self> {
        if let Some((v, c)) = colors.iter().enumerate().find(|(_, &c)| c > 2) {
            return Err(Error::InvalidColoring(format!("vertex {v} has color {c}")));
        }
        Ok(Coloring(colors))
    }

    /// Color of any label; padding labels get 0.
    pub fn color(&self, v: usize) -> u8 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn colors(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Monochromatic edges of `g` under this coloring.
    pub fn violations(&self, g: &ExplicitGraph) -> Vec<(usize, usize)> {
        g.edges().filter(|&(a, b)| self.color(a) == self.color(b)).collect()
    }

    pub fn is_valid_for(&self, g: &ExplicitGraph) -> bool {
        self.0.len() == g.m() && self.violations(g).is_empty()
    }

    /// Parses a JSON array of integers.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidColoring(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("vector of integers serializes")
    }
}

impl TryFrom<Vec<u8>> for Coloring {
    type Error = Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        Coloring::new(v)
    }
}

impl From<Coloring> for Vec<u8> {
    fn from(c: Coloring) -> Self {
        c.0
    }
}

/// Exhaustive search for a proper 3-coloring. Vertex 0 is fixed to color 0 and each
/// vertex may open at most one new color, which removes the color-permutation symmetry.
pub fn brute_force_3color(g: &ExplicitGraph) -> Result<Option<Coloring>> {
    let m = g.m();
    if m > MAX_ORACLE_VERTICES {
        return Err(Error::Capacity(format!(
            "{m} vertices exceed the oracle cap of {MAX_ORACLE_VERTICES}"
        )));
    }
    let earlier: Vec<Vec<usize>> =
        (0..m).map(|v| g.neighbors(v).filter(|&u| u < v).collect()).collect();
    let mut colors = vec![0u8; m];

    fn search(v: usize, used: u8, colors: &mut [u8], earlier: &[Vec<usize>]) -> bool {
        if v == colors.len() {
            return true;
        }
        for c in 0..=used.min(2) {
            if earlier[v].iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if search(v + 1, used.max(c + 1), colors, earlier) {
                    return true;
                }
            }
        }
        false
    }

    Ok(search(0, 0, &mut colors, &earlier).then_some(Coloring(colors)))
}

/// A coloring with the fewest monochromatic edges, and that count.
pub fn min_violation_coloring(g: &ExplicitGraph) -> Result<(Coloring, usize)> {
    let m = g.m();
    if m > MAX_MIN_VIOLATION_VERTICES {
        return Err(Error::Capacity(format!(
            "{m} vertices exceed the minimum-violation cap of {MAX_MIN_VIOLATION_VERTICES}"
        )));
    }
    let earlier: Vec<Vec<usize>> =
        (0..m).map(|v| g.neighbors(v).filter(|&u| u < v).collect()).collect();

    struct Search<'a> {
        earlier: &'a [Vec<usize>],
        colors: Vec<u8>,
        best: Vec<u8>,
        best_cost: usize,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize, used: u8, cost: usize) {
            if cost >= self.best_cost {
                return;
            }
            if v == self.colors.len() {
                self.best_cost = cost;
                self.best.clone_from(&self.colors);
                return;
            }
            for c in 0..=used.min(2) {
                let extra = self.earlier[v].iter().filter(|&&u| self.colors[u] == c).count();
                self.colors[v] = c;
                self.go(v + 1, used.max(c + 1), cost + extra);
            }
        }
    }

    let mut s = Search {
        earlier: &earlier,
        colors: vec![0; m],
        best: vec![0; m],
        best_cost: usize::MAX,
    };
    s.go(0, 0, 0);
    Ok((Coloring(s.best), s.best_cost))
}
