//! The k-proof Bell-measurement verifier. Every register is measured on its own; the
//! verdict is a classical function of the outcomes.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conflict::ConflictTable;
use crate::error::{Error, Result};
use crate::graph::SuccinctCircuit;
use crate::provers::{proof_bits, COLOR_LABEL, NODE_LABEL};
use crate::state::{PostState, PureState};

/// Default cap on joint outcomes enumerated by exact consistency.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Samples per Monte-Carlo chunk; chunk `i` draws from ChaCha8 stream `i` of the seed.
pub const MC_CHUNK: usize = 1 << 16;
/// Threshold on `Pr[x_i = 0]` defining the set `Z′`.
pub const Z_PRIME_THRESHOLD: f64 = 1.0 / 12.0;

/// Outcome probabilities of the uniformity measurements on one register.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegisterStats {
    /// `Pr[x = 1]`: the color register fails the uniformity projector.
    pub a: f64,
    /// `Pr[x = 0 ∧ y = 0]`.
    pub b: f64,
    /// `Pr[x = 0 ∧ y = 1]`: the register would expose a missing node.
    pub c: f64,
}

impl RegisterStats {
    pub fn of(proof: &PureState) -> Result<Self> {
        let [zero, _] = proof.uniformity_measure(COLOR_LABEL)?;
        let px0 = zero.probability;
        let (b, c) = match &zero.post_state {
            PostState::Defined(post) => {
                let y0 = post.uniformity_zero_probability(NODE_LABEL)?;
                (px0 * y0, px0 * (1.0 - y0))
            }
            PostState::Undefined => (0.0, 0.0),
        };
        Ok(RegisterStats { a: 1.0 - px0, b, c })
    }

    /// `Pr[x = 0]`.
    pub fn p_x0(&self) -> f64 {
        self.b + self.c
    }
}

/// `⌈k/6⌉`, the smallest accepted `|Z|`.
pub fn z_threshold(k: usize) -> usize {
    k.div_ceil(6)
}

/// Default proof count `120n`.
pub fn default_k(n: u32) -> usize {
    120 * n as usize
}

fn check_proofs(proofs: &[PureState], n: Option<u32>) -> Result<()> {
    if proofs.len() < 2 {
        return Err(Error::InvalidArgument(format!("need k ≥ 2 proofs, got {}", proofs.len())));
    }
    let first = proof_bits(&proofs[0])?;
    for p in proofs {
        let bits = proof_bits(p)?;
        if bits != first || n.is_some_and(|n| n != bits) {
            return Err(Error::ShapeMismatch(format!(
                "proof has {bits} node bits, expected {}",
                n.unwrap_or(first)
            )));
        }
    }
    Ok(())
}

pub fn register_stats(proofs: &[PureState]) -> Result<Vec<RegisterStats>> {
    proofs.iter().map(RegisterStats::of).collect()
}

/// Exact distribution of `|Z| = #{i : x_i = 0}`.
pub fn z_distribution(stats: &[RegisterStats]) -> Vec<f64> {
    let mut dp = vec![0.0; stats.len() + 1];
    dp[0] = 1.0;
    for (i, s) in stats.iter().enumerate() {
        let p = s.p_x0();
        for z in (0..=i + 1).rev() {
            let stay = if z <= i { dp[z] * (1.0 - p) } else { 0.0 };
            let step = if z > 0 { dp[z - 1] * p } else { 0.0 };
            dp[z] = stay + step;
        }
    }
    dp
}

/// `Pr[|Z| < k/6]`.
pub fn z_tail(stats: &[RegisterStats]) -> f64 {
    let t = z_threshold(stats.len());
    z_distribution(stats)[..t].iter().sum()
}

/// Exact acceptance of the uniformity test: `|Z| ≥ ⌈k/6⌉` and no register in `Z` yields
/// node outcome 1.
pub fn uniformity_accept_from_stats(stats: &[RegisterStats]) -> f64 {
    let k = stats.len();
    let mut dp = vec![0.0; k + 1];
    dp[0] = 1.0;
    for (i, s) in stats.iter().enumerate() {
        for z in (0..=i + 1).rev() {
            let stay = if z <= i { dp[z] * s.a } else { 0.0 };
            let step = if z > 0 { dp[z - 1] * s.b } else { 0.0 };
            dp[z] = stay + step;
        }
    }
    dp[z_threshold(k)..].iter().sum::<f64>().clamp(0.0, 1.0)
}

pub fn uniformity_accept_exact(proofs: &[PureState]) -> Result<f64> {
    check_proofs(proofs, None)?;
    Ok(uniformity_accept_from_stats(&register_stats(proofs)?))
}

/// Indices with `Pr[x_i = 0] ≥ 1/12`.
pub fn z_prime_set(proofs: &[PureState]) -> Result<Vec<usize>> {
    Ok(register_stats(proofs)?
        .iter()
        .enumerate()
        .filter(|(_, s)| s.p_x0() >= Z_PRIME_THRESHOLD)
        .map(|(i, _)| i)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConsistencyMode {
    Exact { budget: u64 },
    MonteCarlo { samples: u64, seed: u64 },
}

impl ConsistencyMode {
    pub fn exact() -> Self {
        ConsistencyMode::Exact { budget: DEFAULT_BUDGET }
    }
}

/// Consistency acceptance with its uncertainty; `halfwidth` is 0 in exact mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyEstimate {
    pub p_accept: f64,
    pub halfwidth: f64,
}

/// Hoeffding half-width at 99% confidence for `samples` Bernoulli draws.
pub fn hoeffding_halfwidth(samples: u64) -> f64 {
    (200f64.ln() / (2.0 * samples as f64)).sqrt()
}

pub fn consistency_accept(
    c: &SuccinctCircuit,
    proofs: &[PureState],
    mode: ConsistencyMode,
) -> Result<ConsistencyEstimate> {
    check_proofs(proofs, Some(c.n()))?;
    let table = ConflictTable::new(c)?;
    let dists: Vec<Vec<f64>> = proofs.iter().map(|p| p.probabilities()).collect();
    match mode {
        ConsistencyMode::Exact { budget } => {
            let grid = (table.outcomes() as f64).powi(proofs.len() as i32);
            if grid > budget as f64 {
                return Err(Error::BudgetExceeded { needed: grid, budget });
            }
            Ok(ConsistencyEstimate { p_accept: exact_consistency(&table, &dists), halfwidth: 0.0 })
        }
        ConsistencyMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidArgument("zero Monte-Carlo samples".into()));
            }
            let accepted = sampled_consistency(&table, &dists, samples, seed)?;
            Ok(ConsistencyEstimate {
                p_accept: accepted as f64 / samples as f64,
                halfwidth: hoeffding_halfwidth(samples),
            })
        }
    }
}

/// Depth-first enumeration over registers, cutting off zero-probability outcomes and
/// every prefix that already contains a conflict.
fn exact_consistency(table: &ConflictTable, dists: &[Vec<f64>]) -> f64 {
    let conflicts = table.dense();
    let d = table.outcomes();
    let support: Vec<Vec<(usize, f64)>> = dists
        .iter()
        .map(|p| p.iter().copied().enumerate().filter(|&(_, x)| x > 0.0).collect())
        .collect();

    fn go(
        i: usize,
        mass: f64,
        seen: &mut Vec<usize>,
        support: &[Vec<(usize, f64)>],
        conflicts: &[bool],
        d: usize,
    ) -> f64 {
        if i == support.len() {
            return mass;
        }
        let mut total = 0.0;
        for &(o, p) in &support[i] {
            if seen.iter().any(|&s| conflicts[o * d + s]) {
                continue;
            }
            let fresh = !seen.contains(&o);
            if fresh {
                seen.push(o);
            }
            total += go(i + 1, mass * p, seen, support, conflicts, d);
            if fresh {
                seen.pop();
            }
        }
        total
    }

    go(0, 1.0, &mut Vec::new(), &support, &conflicts, d).clamp(0.0, 1.0)
}

fn sampled_consistency(
    table: &ConflictTable,
    dists: &[Vec<f64>],
    samples: u64,
    seed: u64,
) -> Result<u64> {
    let conflicts = table.dense();
    let d = table.outcomes();
    let samplers = dists
        .iter()
        .map(|p| WeightedIndex::new(p).map_err(|e| Error::InvalidArgument(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let chunks = samples.div_ceil(MC_CHUNK as u64);
    let accepted = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = (samples - chunk * MC_CHUNK as u64).min(MC_CHUNK as u64);
            let mut seen: Vec<usize> = Vec::with_capacity(d);
            let mut seen_mask = vec![false; d];
            let mut ok = 0u64;
            for _ in 0..len {
                for &s in &seen {
                    seen_mask[s] = false;
                }
                seen.clear();
                let mut clean = true;
                for w in &samplers {
                    let o = w.sample(&mut rng);
                    if seen_mask[o] {
                        continue;
                    }
                    let row = &conflicts[o * d..(o + 1) * d];
                    if seen.iter().any(|&s| row[s]) {
                        clean = false;
                        break;
                    }
                    seen_mask[o] = true;
                    seen.push(o);
                }
                ok += u64::from(clean);
            }
            ok
        })
        .sum();
    Ok(accepted)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub k: usize,
    pub p_consistency: f64,
    pub p_uniformity: f64,
    pub p_total: f64,
    pub mode: ConsistencyMode,
    /// Half-width of the 99% interval on `p_consistency`; `p_total` inherits half of it.
    pub ci_halfwidth: f64,
    /// `Pr[|Z| = z]` for `z = 0..=k`.
    pub z_distribution: Vec<f64>,
    pub z_tail: f64,
}

pub fn acceptance(
    c: &SuccinctCircuit,
    proofs: &[PureState],
    mode: ConsistencyMode,
) -> Result<BellReport> {
    let cons = consistency_accept(c, proofs, mode)?;
    let stats = register_stats(proofs)?;
    let p_uniformity = uniformity_accept_from_stats(&stats);
    Ok(BellReport {
        k: proofs.len(),
        p_consistency: cons.p_accept,
        p_uniformity,
        p_total: (cons.p_accept + p_uniformity) / 2.0,
        mode,
        ci_halfwidth: cons.halfwidth,
        z_tail: z_tail(&stats),
        z_distribution: z_distribution(&stats),
    })
}

/// The proven rejection floor `1/(12000·4^n)` for `k ≥ 120n`.
pub fn soundness_bound(n: u32) -> f64 {
    1.0 / (12000.0 * 4f64.powi(n as i32))
}

/// The proven completeness floor `1 − 2^{−k/40}`.
pub fn completeness_bound(k: usize) -> f64 {
    1.0 - 2f64.powf(-(k as f64) / 40.0)
}
