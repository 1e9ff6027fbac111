//! The two-proof verifier: equality, consistency, and uniformity tests mixed 1/3 each.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conflict::ConflictTable;
use crate::error::{Error, Result};
use crate::graph::SuccinctCircuit;
use crate::provers::{proof_bits, COLORS, COLOR_LABEL, NODE_LABEL};
use crate::state::{swap_test, PostState, PureState, SwapTestMode};

/// Largest `n` for exact evaluation; the outcome grid is `(3·2^n)²`.
pub const MAX_EXACT_BITS: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Equality,
    Consistency,
    Uniformity,
}

/// One sampled run: the chosen test, the measured outcomes, and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchLog {
    pub test: TestKind,
    /// Equality: ancilla bit. Consistency: `[v1, c1, v2, c2]`. Uniformity: color bit,
    /// then the node bit when the color bit was 0.
    pub outcomes: Vec<usize>,
    pub accept: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub p_equality: f64,
    pub p_consistency: f64,
    pub p_uniformity: f64,
    pub p_total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_log: Option<Vec<BranchLog>>,
}

impl VerdictReport {
    fn from_parts(p_equality: f64, p_consistency: f64, p_uniformity: f64) -> Self {
        VerdictReport {
            p_equality,
            p_consistency,
            p_uniformity,
            p_total: (p_equality + p_consistency + p_uniformity) / 3.0,
            branch_log: None,
        }
    }
}

fn check_proofs(c: &SuccinctCircuit, r1: &PureState, r2: &PureState) -> Result<()> {
    for r in [r1, r2] {
        let n = proof_bits(r)?;
        if n != c.n() {
            return Err(Error::ShapeMismatch(format!(
                "proof has {n} node bits, instance has {}",
                c.n()
            )));
        }
    }
    Ok(())
}

/// Rejection probability of the uniformity test on one proof: color outcome 0, then
/// node outcome 1.
pub fn uniformity_reject_probability(r: &PureState) -> Result<f64> {
    let [zero, _] = r.uniformity_measure(COLOR_LABEL)?;
    Ok(match &zero.post_state {
        PostState::Defined(post) => zero.probability * (1.0 - post.uniformity_zero_probability(NODE_LABEL)?),
        PostState::Undefined => 0.0,
    })
}

/// Probability the consistency test accepts on independent proofs `r1`, `r2`.
pub fn consistency_accept_probability(
    table: &ConflictTable,
    r1: &PureState,
    r2: &PureState,
) -> f64 {
    1.0 - table.reject_probability(&r1.probabilities(), &r2.probabilities())
}

pub fn acceptance_exact(c: &SuccinctCircuit, r1: &PureState, r2: &PureState) -> Result<VerdictReport> {
    if c.n() > MAX_EXACT_BITS {
        return Err(Error::Capacity(format!(
            "exact evaluation is capped at n = {MAX_EXACT_BITS}"
        )));
    }
    check_proofs(c, r1, r2)?;
    let table = ConflictTable::new(c)?;
    acceptance_with_table(&table, r1, r2)
}

/// Same as [`acceptance_exact`] with a prebuilt table, for loops over many proof pairs.
pub fn acceptance_with_table(
    table: &ConflictTable,
    r1: &PureState,
    r2: &PureState,
) -> Result<VerdictReport> {
    let eq = swap_test(r1, r2, SwapTestMode::ClosedForm)?.acceptance;
    let cons = consistency_accept_probability(table, r1, r2);
    let unif = 1.0 - uniformity_reject_probability(r1)?;
    Ok(VerdictReport::from_parts(eq.clamp(0.0, 1.0), cons.clamp(0.0, 1.0), unif.clamp(0.0, 1.0)))
}

fn sample_bit<R: Rng + ?Sized>(p_zero: f64, rng: &mut R) -> usize {
    usize::from(!rng.random_bool(p_zero.clamp(0.0, 1.0)))
}

/// One execution of the verifier with measurement outcomes drawn from `rng`.
pub fn run_sampled<R: Rng + ?Sized>(
    c: &SuccinctCircuit,
    r1: &PureState,
    r2: &PureState,
    rng: &mut R,
) -> Result<BranchLog> {
    check_proofs(c, r1, r2)?;
    let table = ConflictTable::new(c)?;
    run_sampled_with_table(&table, r1, r2, rng)
}

pub fn run_sampled_with_table<R: Rng + ?Sized>(
    table: &ConflictTable,
    r1: &PureState,
    r2: &PureState,
    rng: &mut R,
) -> Result<BranchLog> {
    let log = match rng.random_range(0..3) {
        0 => {
            let result = swap_test(r1, r2, SwapTestMode::Circuit)?;
            let [zero, _] = result.branches.expect("circuit mode returns branches");
            let bit = sample_bit(zero.probability, rng);
            BranchLog { test: TestKind::Equality, outcomes: vec![bit], accept: bit == 0 }
        }
        1 => {
            let draw = |s: &PureState, rng: &mut R| -> Result<usize> {
                let w = WeightedIndex::new(s.probabilities())
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                Ok(w.sample(rng))
            };
            let o1 = draw(r1, rng)?;
            let o2 = draw(r2, rng)?;
            BranchLog {
                test: TestKind::Consistency,
                outcomes: vec![o1 / COLORS, o1 % COLORS, o2 / COLORS, o2 % COLORS],
                accept: !table.rejects(o1, o2),
            }
        }
        _ => {
            let [zero, _] = r1.uniformity_measure(COLOR_LABEL)?;
            let color_bit = sample_bit(zero.probability, rng);
            match (color_bit, &zero.post_state) {
                (0, PostState::Defined(post)) => {
                    let node_bit = sample_bit(post.uniformity_zero_probability(NODE_LABEL)?, rng);
                    BranchLog {
                        test: TestKind::Uniformity,
                        outcomes: vec![0, node_bit],
                        accept: node_bit == 0,
                    }
                }
                _ => BranchLog { test: TestKind::Uniformity, outcomes: vec![color_bit], accept: true },
            }
        }
    };
    Ok(log)
}

/// `runs` sampled executions; returns the empirical acceptance and the per-run logs.
pub fn run_sampled_batch<R: Rng + ?Sized>(
    c: &SuccinctCircuit,
    r1: &PureState,
    r2: &PureState,
    runs: usize,
    rng: &mut R,
) -> Result<(f64, Vec<BranchLog>)> {
    if runs == 0 {
        return Err(Error::InvalidArgument("zero runs requested".into()));
    }
    check_proofs(c, r1, r2)?;
    let table = ConflictTable::new(c)?;
    let logs = (0..runs)
        .map(|_| run_sampled_with_table(&table, r1, r2, rng))
        .collect::<Result<Vec<_>>>()?;
    let accepted = logs.iter().filter(|l| l.accept).count();
    Ok((accepted as f64 / runs as f64, logs))
}

/// Empirical acceptance over `runs` executions driven by ChaCha8 seeded with `seed`.
pub fn sampled_acceptance(
    c: &SuccinctCircuit,
    r1: &PureState,
    r2: &PureState,
    runs: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(run_sampled_batch(c, r1, r2, runs, &mut rng)?.0)
}

/// The proven rejection floor `1/(3·10^10·4^n)` on no-instances.
pub fn soundness_bound(n: u32) -> f64 {
    1.0 / (3e10 * 4f64.powi(n as i32))
}
