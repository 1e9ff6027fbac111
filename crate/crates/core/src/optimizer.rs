//! The two-proof verifier as a Hermitian operator on the joint proof space: its top
//! eigenvalue (best entangled proof) and a seesaw search over product proofs.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conflict::ConflictTable;
use crate::error::{Error, Result};
use crate::graph::SuccinctCircuit;
use crate::provers::{proof_bits, proof_shape, COLORS};
use crate::state::PureState;

/// Largest `n` accepted by [`build_acceptance_operator`]; the matrix side is `(3·2^n)²`.
pub const MAX_OPERATOR_BITS: u32 = 4;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const DEFAULT_RESTARTS: usize = 50;
pub const DEFAULT_MAX_ITERS: usize = 500;
pub const SEESAW_TOL: f64 = 1e-12;

/// Acceptance operator over `r1 ⊗ r2`, joint index `i1·D + i2` with `D = 3·2^n`.
#[derive(Clone, Debug)]
pub struct AcceptanceOperator {
    pub matrix: DMatrix<Complex64>,
    pub single_dim: usize,
    pub n: u32,
    pub instance: String,
    pub verifier: String,
}

impl AcceptanceOperator {
    pub fn with_instance(mut self, name: impl Into<String>) -> Self {
        self.instance = name.into();
        self
    }

    /// `⟨Φ|A|Φ⟩` for a joint amplitude vector.
    pub fn expectation(&self, joint: &[Complex64]) -> Result<f64> {
        if joint.len() != self.matrix.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "joint vector of length {} for operator side {}",
                joint.len(),
                self.matrix.nrows()
            )));
        }
        let v = DVector::from_column_slice(joint);
        Ok(v.dotc(&(&self.matrix * &v)).re)
    }

    /// `⟨φ⊗ψ|A|φ⊗ψ⟩`.
    pub fn product_expectation(&self, r1: &PureState, r2: &PureState) -> Result<f64> {
        let joint: Vec<Complex64> = r1
            .amplitudes()
            .iter()
            .flat_map(|a| r2.amplitudes().iter().map(move |b| a * b))
            .collect();
        self.expectation(&joint)
    }
}

/// `A = (A_eq + A_cons + A_unif)/3` for the two-proof verifier on `c`.
pub fn build_acceptance_operator(c: &SuccinctCircuit) -> Result<AcceptanceOperator> {
    let n = c.n();
    if n > MAX_OPERATOR_BITS {
        return Err(Error::Capacity(format!(
            "acceptance operator is capped at n = {MAX_OPERATOR_BITS}"
        )));
    }
    let table = ConflictTable::new(c)?;
    let labels = table.labels();
    let d = table.outcomes();
    let side = d * d;
    let third = 1.0 / 3.0;
    let mut m = DMatrix::<Complex64>::zeros(side, side);
    for i1 in 0..d {
        for i2 in 0..d {
            let row = i1 * d + i2;
            // Equality: (I + SWAP)/2.
            m[(row, row)] += Complex64::new(0.5 * third, 0.0);
            m[(row, i2 * d + i1)] += Complex64::new(0.5 * third, 0.0);
            // Consistency is diagonal in the computational basis.
            if !table.rejects(i1, i2) {
                m[(row, row)] += Complex64::new(third, 0.0);
            }
            // Uniformity: I − (P1 on N ⊗ P0 on C) on r1, identity on r2.
            m[(row, row)] += Complex64::new(third, 0.0);
            let (v, _) = (i1 / COLORS, i1 % COLORS);
            for j1 in 0..d {
                let v2 = j1 / COLORS;
                let node = if v == v2 { 1.0 } else { 0.0 } - 1.0 / labels as f64;
                let entry = node / COLORS as f64;
                m[(row, j1 * d + i2)] -= Complex64::new(third * entry, 0.0);
            }
        }
    }
    Ok(AcceptanceOperator {
        matrix: m,
        single_dim: d,
        n,
        instance: String::new(),
        verifier: "qma2".into(),
    })
}

/// `max |A − A†|` over entries.
pub fn hermitian_defect(a: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(a: &DMatrix<Complex64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch(format!("{}×{} is not square", a.nrows(), a.ncols())));
    }
    let defect = hermitian_defect(a);
    if !defect.is_finite() || defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian(defect));
    }
    Ok(())
}

fn top_eigenpair(a: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let eig = SymmetricEigen::new(a.clone());
    let (idx, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    check_hermitian(a)?;
    Ok(top_eigenpair(a).0)
}

/// All eigenvalues, ascending.
pub fn eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut v: Vec<f64> = SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Rayleigh quotient after `iters` power steps from a seeded random start. Meant for
/// positive semidefinite input, where the dominant eigenvalue is the largest one.
pub fn power_iteration(a: &DMatrix<Complex64>, iters: usize, seed: u64) -> Result<f64> {
    check_hermitian(a)?;
    let shape = crate::state::RegisterShape::single("x", a.nrows().max(2))?;
    let start = PureState::haar_random(shape, &mut ChaCha8Rng::seed_from_u64(seed));
    let mut v = DVector::from_column_slice(&start.amplitudes()[..a.nrows()]);
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..iters {
        let w = a * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w / Complex64::new(norm, 0.0);
    }
    Ok(v.dotc(&(a * &v)).re)
}

#[derive(Clone, Debug)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    /// Extra starting pairs run after the random restarts.
    pub extra_starts: Vec<(PureState, PureState)>,
}

impl SeesawConfig {
    pub fn new(seed: u64) -> Self {
        SeesawConfig {
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            tol: SEESAW_TOL,
            seed,
            extra_starts: Vec::new(),
        }
    }
}

/// Best product pair found; the value is a lower bound on the product optimum.
#[derive(Clone, Debug, Serialize)]
pub struct SeesawResult {
    #[serde(skip)]
    pub best: (PureState, PureState),
    pub value: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Value after every half-step of the winning run.
    pub trace: Vec<f64>,
    /// Index of the winning start: random restarts first, then extra starts.
    pub winning_start: usize,
}

/// `M[i,j] = Σ_{k,l} ψ̄_k A[(i,k),(j,l)] ψ_l` when `first` is true (contracting r2),
/// and the mirror contraction over r1 otherwise.
fn contract(a: &DMatrix<Complex64>, d: usize, fixed: &DVector<Complex64>, first: bool) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                let fk = fixed[k].conj();
                if fk == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..d {
                    let (row, col) = if first { (i * d + k, j * d + l) } else { (k * d + i, l * d + j) };
                    acc += fk * a[(row, col)] * fixed[l];
                }
            }
            m[(i, j)] = acc;
        }
    }
    m
}

struct Run {
    value: f64,
    trace: Vec<f64>,
    phi: DVector<Complex64>,
    psi: DVector<Complex64>,
}

fn run_seesaw(
    a: &DMatrix<Complex64>,
    d: usize,
    phi: DVector<Complex64>,
    psi: DVector<Complex64>,
    max_iters: usize,
    tol: f64,
) -> Run {
    let mut phi = phi;
    let mut psi = psi;
    let mut trace = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for _ in 0..max_iters {
        let (_, v1) = top_eigenpair(&contract(a, d, &psi, true));
        phi = v1;
        let (_, v2) = top_eigenpair(&contract(a, d, &phi, false));
        psi = v2;
        let half = product_value(a, d, &phi, &psi);
        trace.push(half);
        if (half - last).abs() < tol {
            last = half;
            break;
        }
        last = half;
    }
    Run { value: last, trace, phi, psi }
}

fn product_value(a: &DMatrix<Complex64>, d: usize, phi: &DVector<Complex64>, psi: &DVector<Complex64>) -> f64 {
    let joint = DVector::from_iterator(d * d, phi.iter().flat_map(|x| psi.iter().map(move |y| x * y)));
    joint.dotc(&(a * &joint)).re
}

/// Alternating maximization over product proofs.
pub fn seesaw(op: &AcceptanceOperator, config: &SeesawConfig) -> Result<SeesawResult> {
    check_hermitian(&op.matrix)?;
    let d = op.single_dim;
    let shape = proof_shape(op.n)?;
    for (p, q) in &config.extra_starts {
        if proof_bits(p)? != op.n || proof_bits(q)? != op.n {
            return Err(Error::ShapeMismatch("seesaw start does not match the operator".into()));
        }
    }
    if config.restarts + config.extra_starts.len() == 0 {
        return Err(Error::InvalidArgument("seesaw needs at least one start".into()));
    }
    let to_vec = |s: &PureState| DVector::from_column_slice(s.amplitudes());
    let mut starts: Vec<(DVector<Complex64>, DVector<Complex64>)> = (0..config.restarts)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let p = PureState::haar_random(shape.clone(), &mut rng);
            let q = PureState::haar_random(shape.clone(), &mut rng);
            (to_vec(&p), to_vec(&q))
        })
        .collect();
    starts.extend(config.extra_starts.iter().map(|(p, q)| (to_vec(p), to_vec(q))));

    let runs: Vec<Run> = starts
        .into_par_iter()
        .map(|(p, q)| {
            let initial = product_value(&op.matrix, d, &p, &q);
            let mut run = run_seesaw(&op.matrix, d, p, q, config.max_iters, config.tol);
            run.trace.insert(0, initial);
            run
        })
        .collect();
    let (winner, best) = runs
        .iter()
        .enumerate()
        .fold((0, &runs[0]), |acc, (i, r)| if r.value > acc.1.value { (i, r) } else { acc });
    let as_state = |v: &DVector<Complex64>| PureState::normalized(shape.clone(), v.iter().copied().collect());
    Ok(SeesawResult {
        best: (as_state(&best.phi)?, as_state(&best.psi)?),
        value: best.value,
        iterations: best.trace.len() - 1,
        restarts: config.restarts,
        seed: config.seed,
        trace: best.trace.clone(),
        winning_start: winner,
    })
}
