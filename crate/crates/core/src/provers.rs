//! Proof states: honest proofs, cheating strategies, and the amplitude decomposition
//! `|ψ⟩ = Σ_i α_i |i⟩ Σ_j β_{i,j} |j⟩` of a node⊗color state.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{expand, Coloring, SuccinctCircuit};
use crate::state::{PureState, RegisterShape, INPUT_NORM_TOL};

/// Number of colors.
pub const COLORS: usize = 3;
pub const NODE_LABEL: &str = "N";
pub const COLOR_LABEL: &str = "C";

/// `N ⊗ C` with `N` of dimension `2^n` and `C` of dimension 3.
pub fn proof_shape(n: u32) -> Result<RegisterShape> {
    if n == 0 || n > 20 {
        return Err(Error::Capacity(format!("proof registers for n = {n} are out of range")));
    }
    RegisterShape::new([(NODE_LABEL, 1usize << n), (COLOR_LABEL, COLORS)])
}

/// Checks that `s` is shaped `2^n ⊗ 3` and returns `n`.
pub fn proof_bits(s: &PureState) -> Result<u32> {
    let dims = s.shape().dims();
    match dims {
        [nodes, COLORS] if nodes.is_power_of_two() && *nodes >= 2 => {
            Ok(nodes.trailing_zeros())
        }
        _ => Err(Error::ShapeMismatch(format!("{dims:?} is not a node⊗color proof shape"))),
    }
}

/// `2^{-n/2} Σ_i |i⟩|c(i)⟩` for any coloring, valid or not.
pub fn honest_form_state(n: u32, coloring: &Coloring) -> Result<PureState> {
    let shape = proof_shape(n)?;
    let labels = 1usize << n;
    if coloring.len() > labels {
        return Err(Error::InvalidColoring(format!(
            "{} colors for {labels} labels",
            coloring.len()
        )));
    }
    let amp = Complex64::new(1.0 / (labels as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); labels * COLORS];
    for v in 0..labels {
        amps[v * COLORS + coloring.color(v) as usize] = amp;
    }
    PureState::new(shape, amps)
}

/// The completeness proof: a valid coloring of the encoded graph, padded with color 0.
pub fn honest_proof(c: &SuccinctCircuit, coloring: &Coloring) -> Result<PureState> {
    let g = expand(c)?;
    if coloring.len() != g.m() {
        return Err(Error::InvalidColoring(format!(
            "{} colors for {} vertices",
            coloring.len(),
            g.m()
        )));
    }
    let bad = coloring.violations(&g);
    if let Some((a, b)) = bad.first() {
        return Err(Error::InvalidColoring(format!(
            "edge ({a},{b}) is monochromatic; honest proofs need a valid coloring"
        )));
    }
    honest_form_state(c.n(), coloring)
}

/// Honest-form state built from a flawed coloring. `declared` must equal the number of
/// monochromatic edges, and must be positive.
pub fn near_coloring_proof(
    c: &SuccinctCircuit,
    coloring: &Coloring,
    declared: usize,
) -> Result<PureState> {
    let g = expand(c)?;
    if coloring.len() != g.m() {
        return Err(Error::InvalidColoring(format!(
            "{} colors for {} vertices",
            coloring.len(),
            g.m()
        )));
    }
    let actual = coloring.violations(&g).len();
    if actual == 0 {
        return Err(Error::InvalidColoring("coloring is valid; nothing to cheat with".into()));
    }
    if actual != declared {
        return Err(Error::InvalidColoring(format!(
            "declared {declared} violated edges, found {actual}"
        )));
    }
    honest_form_state(c.n(), coloring)
}

/// Amplitude tables of a two-register state.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofDecomposition {
    /// `α_i = ‖row i‖`, real and non-negative.
    pub alpha: Vec<Complex64>,
    /// `β_{i,·}`, unit rows; `(1, 0, …)` where `α_i = 0`.
    pub beta: Vec<Vec<Complex64>>,
    /// Node amplitudes after outcome 0 of the uniformity measurement on the color
    /// register, or `None` when that outcome has probability 0.
    pub gamma: Option<Vec<Complex64>>,
    /// Probability of that outcome.
    pub color_zero_probability: f64,
    shape: RegisterShape,
}

impl ProofDecomposition {
    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    /// `|α_i|²`.
    pub fn node_weight(&self, i: usize) -> f64 {
        self.alpha[i].norm_sqr()
    }

    /// `|α_i β_{i,j}|²`, the computational-basis probability of `(i, j)`.
    pub fn joint_probability(&self, i: usize, j: usize) -> f64 {
        (self.alpha[i] * self.beta[i][j]).norm_sqr()
    }

    /// Index of a largest `|β_{i,j}|`, lowest index on ties.
    pub fn argmax_color(&self, i: usize) -> usize {
        let row = &self.beta[i];
        (0..row.len()).fold(0, |best, j| if row[j].norm() > row[best].norm() { j } else { best })
    }

    pub fn reconstruct(&self) -> Result<PureState> {
        let amps = self
            .alpha
            .iter()
            .zip(&self.beta)
            .flat_map(|(a, row)| row.iter().map(move |b| a * b))
            .collect();
        PureState::new(self.shape.clone(), amps)
    }
}

/// Splits a two-register state into node and conditional color amplitudes.
pub fn decompose(s: &PureState) -> Result<ProofDecomposition> {
    let dims = s.shape().dims();
    let [nodes, colors] = *dims else {
        return Err(Error::ShapeMismatch(format!("{dims:?} is not a two-register shape")));
    };
    let amps = s.amplitudes();
    let mut alpha = Vec::with_capacity(nodes);
    let mut beta = Vec::with_capacity(nodes);
    let mut gamma_raw = Vec::with_capacity(nodes);
    for row in amps.chunks(colors) {
        let w: f64 = row.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        alpha.push(Complex64::new(w, 0.0));
        if w > 0.0 {
            beta.push(row.iter().map(|a| a / w).collect());
        } else {
            let mut unit = vec![Complex64::new(0.0, 0.0); colors];
            unit[0] = Complex64::new(1.0, 0.0);
            beta.push(unit);
        }
        gamma_raw.push(row.iter().sum::<Complex64>() / (colors as f64).sqrt());
    }
    let p: f64 = gamma_raw.iter().map(|g| g.norm_sqr()).sum();
    let gamma = (p > 0.0).then(|| {
        let s = 1.0 / p.sqrt();
        gamma_raw.iter().map(|g| g * s).collect()
    });
    Ok(ProofDecomposition {
        alpha,
        beta,
        gamma,
        color_zero_probability: p,
        shape: s.shape().clone(),
    })
}

/// `k` independent Haar-random proofs, reproducible from `seed`.
pub fn random_product_proofs(shape: &RegisterShape, k: usize, seed: u64) -> Vec<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| PureState::haar_random(shape.clone(), &mut rng)).collect()
}

/// Honest-form state plus complex Gaussian noise of size `scale` on every amplitude.
pub fn perturbed_proof<R: Rng + ?Sized>(
    n: u32,
    coloring: &Coloring,
    scale: f64,
    rng: &mut R,
) -> Result<PureState> {
    let base = honest_form_state(n, coloring)?;
    let shape = base.shape().clone();
    let amps = base
        .into_amplitudes()
        .into_iter()
        .map(|a| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            a + Complex64::new(re, im) * scale
        })
        .collect();
    PureState::normalized(shape, amps)
}

/// How a prover builds its proof registers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProverStrategy {
    /// Every register holds the honest proof for `coloring`.
    Honest { coloring: Coloring },
    /// Every register holds the honest-form state of a coloring with `violations`
    /// monochromatic edges.
    NearColoring { coloring: Coloring, violations: usize },
    /// Every register holds the state with the given amplitude tables.
    Arbitrary { alpha: Vec<f64>, beta: Vec<[(f64, f64); 3]> },
    /// Independent Haar-random registers.
    Random { seed: u64 },
    /// Every register holds `|vertex⟩|color⟩`.
    Basis { vertex: usize, color: usize },
    /// Honest-form registers whose color rows are orthogonal to `|u_3⟩`, so the color
    /// register never passes the uniformity projector.
    UniformityEvasion { coloring: Coloring },
}

impl ProverStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            ProverStrategy::Honest { .. } => "honest",
            ProverStrategy::NearColoring { .. } => "near_coloring",
            ProverStrategy::Arbitrary { .. } => "arbitrary",
            ProverStrategy::Random { .. } => "random",
            ProverStrategy::Basis { .. } => "basis",
            ProverStrategy::UniformityEvasion { .. } => "uniformity_evasion",
        }
    }

    /// Builds `k` proof registers for instance `c`.
    pub fn proofs(&self, c: &SuccinctCircuit, k: usize) -> Result<Vec<PureState>> {
        let n = c.n();
        let one = match self {
            ProverStrategy::Honest { coloring } => honest_proof(c, coloring)?,
            ProverStrategy::NearColoring { coloring, violations } => {
                near_coloring_proof(c, coloring, *violations)?
            }
            ProverStrategy::Arbitrary { alpha, beta } => {
                let shape = proof_shape(n)?;
                if alpha.len() != shape.dim(0) || beta.len() != shape.dim(0) {
                    return Err(Error::ShapeMismatch(format!(
                        "amplitude tables need {} rows",
                        shape.dim(0)
                    )));
                }
                let amps = alpha
                    .iter()
                    .zip(beta)
                    .flat_map(|(&a, row)| row.map(|(re, im)| Complex64::new(re, im) * a))
                    .collect();
                PureState::new(shape, amps)?
            }
            ProverStrategy::Random { seed } => {
                return Ok(random_product_proofs(&proof_shape(n)?, k, *seed));
            }
            ProverStrategy::Basis { vertex, color } => {
                PureState::basis(proof_shape(n)?, &[*vertex, *color])?
            }
            ProverStrategy::UniformityEvasion { coloring } => {
                let shape = proof_shape(n)?;
                let labels = shape.dim(0);
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2 / (labels as f64).sqrt(), 0.0);
                let mut amps = vec![Complex64::new(0.0, 0.0); labels * COLORS];
                for v in 0..labels {
                    let c0 = coloring.color(v) as usize;
                    amps[v * COLORS + c0] = h;
                    amps[v * COLORS + (c0 + 1) % COLORS] = -h;
                }
                PureState::new(shape, amps)?
            }
        };
        Ok(vec![one; k])
    }
}

/// Checks the decomposition invariants; used by tests and the lemma suite.
pub fn decomposition_is_consistent(d: &ProofDecomposition, source: &PureState) -> bool {
    let total: f64 = d.alpha.iter().map(|a| a.norm_sqr()).sum();
    let rows_ok = d.alpha.iter().zip(&d.beta).all(|(a, row)| {
        a.norm() == 0.0
            || (row.iter().map(|b| b.norm_sqr()).sum::<f64>() - 1.0).abs() <= INPUT_NORM_TOL
    });
    let rebuilt_ok = d.reconstruct().is_ok_and(|r| {
        r.amplitudes()
            .iter()
            .zip(source.amplitudes())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
            <= INPUT_NORM_TOL
    });
    (total - 1.0).abs() <= INPUT_NORM_TOL && rows_ok && rebuilt_ok
}
