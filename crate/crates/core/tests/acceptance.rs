//! Acceptance run: every criterion at its stated tolerance, cross-checked against oracles
//! computed here from raw amplitudes and explicit adjacency. Prints one line per criterion
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uvlab::bellqma::{self, ConsistencyMode};
use uvlab::gadget;
use uvlab::graph::{brute_force_3color, encode_explicit, Coloring, ExplicitGraph};
use uvlab::provers::{honest_proof, near_coloring_proof, proof_shape};
use uvlab::qma2;
use uvlab::state::{swap_test, PureState, RegisterShape, SwapTestMode};
use uvlab::suite::{self, CheckOutcome};

type C = Complex64;

struct Line {
    id: usize,
    passed: bool,
    detail: String,
}

fn conflict(g: &ExplicitGraph, o1: usize, o2: usize) -> bool {
    let (v1, c1, v2, c2) = (o1 / 3, o1 % 3, o2 / 3, o2 % 3);
    if v1 == v2 {
        return c1 != c2;
    }
    let (lo, hi) = (v1.min(v2), v1.max(v2));
    c1 == c2 && hi < g.m() && g.has_edge(lo, hi)
}

/// Two-proof verifier by explicit branch enumeration over raw amplitudes.
fn oracle_two_proof(g: &ExplicitGraph, r1: &[C], r2: &[C]) -> (f64, f64, f64) {
    let labels = r1.len() / 3;
    let inner: C = r1.iter().zip(r2).map(|(a, b)| a.conj() * b).sum();
    let eq = 0.5 * (1.0 + inner.norm_sqr());
    let mut cons = 0.0;
    for (o1, a) in r1.iter().enumerate() {
        for (o2, b) in r2.iter().enumerate() {
            if !conflict(g, o1, o2) {
                cons += a.norm_sqr() * b.norm_sqr();
            }
        }
    }
    let s3 = 1.0 / 3f64.sqrt();
    let xi: Vec<C> = (0..labels).map(|v| (r1[3 * v] + r1[3 * v + 1] + r1[3 * v + 2]) * s3).collect();
    let p_color0: f64 = xi.iter().map(|x| x.norm_sqr()).sum();
    let on_uniform = xi.iter().sum::<C>().norm_sqr() / labels as f64;
    let unif = 1.0 - (p_color0 - on_uniform);
    (eq, cons, unif)
}

fn ln_choose(n: usize, r: usize) -> f64 {
    (1..=r).map(|i| ((n - r + i) as f64).ln() - (i as f64).ln()).sum()
}

/// `Pr[Binomial(k, p) < t]`.
fn binomial_lower(k: usize, p: f64, t: usize) -> f64 {
    (0..t).map(|z| (ln_choose(k, z) + z as f64 * p.ln() + (k - z) as f64 * (1.0 - p).ln()).exp()).sum()
}

/// Uniformity acceptance from raw amplitudes: per register, the chance of the color test
/// passing and then the node test passing (`b`) or failing (`c`); accept iff no `c` and at
/// least `⌈k/6⌉` registers give `b`.
fn oracle_uniformity(proofs: &[PureState]) -> f64 {
    let k = proofs.len();
    let mut dp = vec![0.0; k + 1];
    dp[0] = 1.0;
    for s in proofs {
        let r = s.amplitudes();
        let labels = r.len() / 3;
        let rows: Vec<C> = (0..labels).map(|v| r[3 * v] + r[3 * v + 1] + r[3 * v + 2]).collect();
        let x0: f64 = rows.iter().map(|z| z.norm_sqr()).sum::<f64>() / 3.0;
        let b = rows.iter().sum::<C>().norm_sqr() / (3.0 * labels as f64);
        let a = 1.0 - x0;
        let mut next = vec![0.0; k + 1];
        for z in 0..k {
            next[z] += dp[z] * a;
            next[z + 1] += dp[z] * b;
        }
        next[k] += dp[k] * a;
        dp = next;
    }
    dp[k.div_ceil(6)..].iter().sum()
}

/// Plain Monte-Carlo consistency estimate with its 99% Hoeffding half-width.
fn oracle_consistency_mc(g: &ExplicitGraph, proofs: &[PureState], samples: usize, seed: u64) -> (f64, f64) {
    let dists: Vec<WeightedIndex<f64>> =
        proofs.iter().map(|s| WeightedIndex::new(s.probabilities()).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0usize;
    let mut seen = Vec::with_capacity(proofs.len());
    for _ in 0..samples {
        seen.clear();
        seen.extend(dists.iter().map(|d| d.sample(&mut rng)));
        let bad = (0..seen.len()).any(|i| (i + 1..seen.len()).any(|j| conflict(g, seen[i], seen[j])));
        if !bad {
            ok += 1;
        }
    }
    (ok as f64 / samples as f64, ((200f64).ln() / (2.0 * samples as f64)).sqrt())
}

fn within_budget(o: &CheckOutcome, secs: f64, problems: &mut Vec<String>) {
    if o.seconds > secs {
        problems.push(format!("took {:.2}s, budget {secs}s", o.seconds));
    }
}

fn finish(id: usize, o: CheckOutcome, mut problems: Vec<String>, budget: f64, extra: String) -> Line {
    within_budget(&o, budget, &mut problems);
    if !o.passed {
        problems.insert(0, o.detail.clone());
    }
    let passed = problems.is_empty();
    let detail = if passed {
        format!("{} | oracle: {extra} | {:.2}s", o.detail, o.seconds)
    } else {
        format!("{} | oracle: {extra}", problems.join("; "))
    };
    Line { id, passed, detail }
}

fn c1() -> Line {
    let o = suite::criterion_completeness_qma2();
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for (g, n) in [(ExplicitGraph::complete(3), 2), (ExplicitGraph::complete(3), 3), (ExplicitGraph::cycle(5), 3)] {
        let col = brute_force_3color(&g).unwrap().unwrap();
        assert!((0..g.m()).all(|u| g.neighbors(u).all(|v| col.color(u) != col.color(v))));
        let circ = encode_explicit(&g, n).unwrap();
        let h = honest_proof(&circ, &col).unwrap();
        let (eq, cons, unif) = oracle_two_proof(&g, h.amplitudes(), h.amplitudes());
        worst = worst.max((1.0 - (eq + cons + unif) / 3.0).abs());
    }
    if worst > 1e-12 {
        problems.push(format!("oracle deviation {worst:e}"));
    }
    finish(1, o, problems, 1.0, format!("max |1 − p| = {worst:.1e}"))
}

fn c2() -> Line {
    let o = suite::criterion_tightness();
    let g = ExplicitGraph::complete(4);
    let circ = encode_explicit(&g, 2).unwrap();
    let s = near_coloring_proof(&circ, &Coloring::new(vec![0, 1, 2, 0]).unwrap(), 1).unwrap();
    let (eq, cons, unif) = oracle_two_proof(&g, s.amplitudes(), s.amplitudes());
    let oracle = (eq + cons + unif) / 3.0;
    let lib = o.values.get("p_total").copied().unwrap_or(f64::NAN);
    let mut problems = Vec::new();
    if (oracle - (1.0 - 1.0 / 24.0)).abs() > 1e-12 || (lib - oracle).abs() > 1e-12 {
        problems.push(format!("library {lib}, enumeration {oracle}"));
    }
    finish(2, o, problems, 1.0, format!("branch enumeration {oracle:.15}"))
}

fn c3() -> Line {
    let o = suite::criterion_soundness_envelope(3);
    // Entangled witness on K4: weight 1 on identical outcomes, ½ on pairs differing in both
    // node and color. The largest eigenvalue is at least its expectation.
    let op = uvlab::optimizer::build_acceptance_operator(&encode_explicit(&ExplicitGraph::complete(4), 2).unwrap())
        .unwrap();
    let mut phi = vec![C::new(0.0, 0.0); 144];
    for o1 in 0..12 {
        for o2 in 0..12 {
            phi[o1 * 12 + o2] = C::new(
                if o1 == o2 {
                    1.0
                } else if o1 / 3 != o2 / 3 && o1 % 3 != o2 % 3 {
                    0.5
                } else {
                    0.0
                },
                0.0,
            );
        }
    }
    let norm = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    phi.iter_mut().for_each(|z| *z /= norm);
    let witness = op.expectation(&phi).unwrap();
    let mut problems = Vec::new();
    let lam = o.values.get("spectral_norm").copied().unwrap_or(f64::NAN);
    if lam < witness - 1e-12 {
        problems.push(format!("spectral norm {lam} below witness {witness}"));
    }
    finish(3, o, problems, 120.0, format!("entangled witness value {witness:.15}"))
}

fn honest_k3(k: usize) -> Vec<PureState> {
    let circ = encode_explicit(&ExplicitGraph::complete(3), 2).unwrap();
    vec![honest_proof(&circ, &Coloring::new(vec![0, 1, 2]).unwrap()).unwrap(); k]
}

fn c4() -> Line {
    let o = suite::criterion_bell_completeness();
    let mut problems = Vec::new();
    let mut parts = Vec::new();
    for k in [60, 120, 240] {
        let oracle = (1.0 + 1.0 - binomial_lower(k, 1.0 / 3.0, k.div_ceil(6))) / 2.0;
        let dp = (1.0 + oracle_uniformity(&honest_k3(k))) / 2.0;
        let lib = o.values.get(&format!("p_total_k{k}")).copied().unwrap_or(f64::NAN);
        if (lib - oracle).abs() > 1e-12 || (dp - oracle).abs() > 1e-12 {
            problems.push(format!("k = {k}: library {lib}, binomial {oracle}"));
        }
        if oracle < 1.0 - 2f64.powf(-(k as f64) / 40.0) {
            problems.push(format!("k = {k}: binomial oracle {oracle} below floor"));
        }
        parts.push(format!("k={k} {oracle:.12}"));
    }
    finish(4, o, problems, 10.0, parts.join(", "))
}

fn c5() -> Line {
    let o = suite::criterion_chernoff();
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for k in (12..=240).step_by(12) {
        let tail = binomial_lower(k, 1.0 / 3.0, k.div_ceil(6));
        let stats = bellqma::register_stats(&honest_k3(k)).unwrap();
        let lib = bellqma::z_tail(&stats);
        worst = worst.max((lib - tail).abs() / tail.max(1e-300));
        if tail > (-(k as f64) / 48.0).exp() {
            problems.push(format!("k = {k}: binomial tail {tail:e} above bound"));
        }
    }
    if worst > 1e-9 {
        problems.push(format!("DP vs binomial relative gap {worst:e}"));
    }
    finish(5, o, problems, 5.0, format!("DP vs binomial max relative gap {worst:.1e}"))
}

fn c6() -> Line {
    let o = suite::criterion_bell_soundness(1_000_000, 6);
    let g = ExplicitGraph::complete(4);
    let circ = encode_explicit(&g, 2).unwrap();
    let mut problems = Vec::new();
    let mut worst_unif: f64 = 0.0;
    for (name, proofs) in suite::bell_k4_strategies(240, 6).unwrap() {
        let lib = bellqma::acceptance(&circ, &proofs, ConsistencyMode::MonteCarlo { samples: 200_000, seed: 60 })
            .unwrap();
        worst_unif = worst_unif.max((lib.p_uniformity - oracle_uniformity(&proofs)).abs());
        let (mc, hw) = oracle_consistency_mc(&g, &proofs, 20_000, 61);
        if (mc - lib.p_consistency).abs() > hw + lib.ci_halfwidth {
            problems.push(format!("{name}: consistency {} vs independent sampler {mc}", lib.p_consistency));
        }
    }
    if worst_unif > 1e-12 {
        problems.push(format!("uniformity gap {worst_unif:e}"));
    }
    finish(6, o, problems, 300.0, format!("uniformity gap {worst_unif:.1e}, consistency agrees with independent sampler"))
}

fn c7() -> Line {
    let o = suite::criterion_swap();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let dims: &[usize] = [&[2][..], &[3], &[2, 3], &[4, 3]][i % 4];
        let shape = RegisterShape::new(dims.iter().enumerate().map(|(j, &d)| (format!("r{j}"), d))).unwrap();
        let a = PureState::haar_random(shape.clone(), &mut rng);
        let b = PureState::haar_random(shape, &mut rng);
        let ov: C = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
        let closed = 0.5 * (1.0 + ov.norm_sqr());
        worst = worst.max((swap_test(&a, &b, SwapTestMode::Circuit).unwrap().acceptance - closed).abs());
    }
    let mut problems = Vec::new();
    if worst > 1e-9 {
        problems.push(format!("circuit vs raw overlap {worst:e}"));
    }
    finish(7, o, problems, 10.0, format!("circuit vs raw overlap max {worst:.1e}"))
}

fn c8() -> Line {
    let o = suite::criterion_appendix_lemmas();
    // Uniform-deviation lemma on hand-built extremes: one amplitude just under 1/(2m).
    let mut problems = Vec::new();
    for m in [3usize, 4, 8, 16] {
        let low = 0.999 / (2.0 * m as f64);
        let rest = ((1.0 - low) / (m - 1) as f64).sqrt();
        let mut amps = vec![rest; m];
        amps[0] = low.sqrt();
        let ov = amps.iter().sum::<f64>().powi(2) / m as f64;
        if 1.0 - ov < 1.0 / (16.0 * (m * m) as f64) {
            problems.push(format!("m = {m}: 1 − |⟨u|ψ⟩|² = {}", 1.0 - ov));
        }
    }
    finish(8, o, problems, 30.0, "hand-built extremes respect 1/(16m²)".into())
}

fn c9() -> Line {
    let o = suite::criterion_gadgets(9);
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let target = PureState::haar_random(RegisterShape::single("q", 2).unwrap(), &mut rng);
        let w = rng.random_range(0.0..std::f64::consts::TAU);
        let [ok, _] = gadget::magic_gadget(&target, w).unwrap();
        let t = target.amplitudes();
        let want = [t[0], t[1] * C::from_polar(1.0, w)];
        let got = ok.post_state.state().unwrap().amplitudes();
        let fid = (got[0].conj() * want[0] + got[1].conj() * want[1]).norm_sqr();
        worst = worst.max(1.0 - fid).max((ok.probability - 0.5).abs());
    }
    let mut problems = Vec::new();
    if worst > 1e-9 {
        problems.push(format!("raw-amplitude check {worst:e}"));
    }
    finish(9, o, problems, 10.0, format!("raw Rz·target max infidelity {worst:.1e}"))
}

fn op_norm_raw(m: [[C; 2]; 2]) -> f64 {
    // Largest eigenvalue of M†M.
    let g00 = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let g11 = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let g01 = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let tr = g00 + g11;
    let det = g00 * g11 - g01.norm_sqr();
    ((tr + (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt()
}

fn c10() -> Line {
    let o = suite::criterion_zhzhz(10);
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut worst: f64 = 0.0;
    let h = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hm = [[h, h], [h, -h]];
    let rz = |w: f64| [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::from_polar(1.0, w)]];
    let mul = |a: [[C; 2]; 2], b: [[C; 2]; 2]| {
        let mut out = [[C::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    };
    for _ in 0..200 {
        let u = gadget::haar_unitary2(&mut rng);
        let d = gadget::zhzhz_decompose(&u).unwrap();
        let r = mul(mul(mul(mul(rz(d.alpha), hm), rz(d.beta)), hm), rz(d.gamma));
        let p = C::from_polar(1.0, d.theta);
        let diff = [[r[0][0] * p - u[(0, 0)], r[0][1] * p - u[(0, 1)]], [r[1][0] * p - u[(1, 0)], r[1][1] * p - u[(1, 1)]]];
        worst = worst.max(op_norm_raw(diff));
    }
    let mut problems = Vec::new();
    if worst >= 1e-9 {
        problems.push(format!("raw reconstruction {worst:e}"));
    }
    finish(10, o, problems, 5.0, format!("raw reconstruction max {worst:.1e}"))
}

fn c11() -> Line {
    let o = suite::criterion_cross_module(11);
    let g = ExplicitGraph::complete(4);
    let circ = encode_explicit(&g, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = PureState::haar_random(proof_shape(2).unwrap(), &mut rng);
        let b = PureState::haar_random(proof_shape(2).unwrap(), &mut rng);
        let (_, grid, _) = oracle_two_proof(&g, a.amplitudes(), b.amplitudes());
        let one = qma2::acceptance_exact(&circ, &a, &b).unwrap().p_consistency;
        let bell = bellqma::consistency_accept(&circ, &[a, b], ConsistencyMode::exact()).unwrap().p_accept;
        worst = worst.max((one - grid).abs()).max((bell - grid).abs());
    }
    let mut problems = Vec::new();
    if worst > 1e-12 {
        problems.push(format!("vs explicit grid {worst:e}"));
    }
    finish(11, o, problems, 10.0, format!("both vs explicit grid max {worst:.1e}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [fn() -> Line; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11];
    let mut failed = 0;
    for f in criteria {
        let line = f();
        if !line.passed {
            failed += 1;
        }
        println!("{} criterion {}: {}", if line.passed { "PASS" } else { "FAIL" }, line.id, line.detail);
    }
    println!("{} passed, {failed} failed in {:.1}s", 11 - failed, start.elapsed().as_secs_f64());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
