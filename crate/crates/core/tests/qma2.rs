use std::path::PathBuf;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uvlab::corpus::Corpus;
use uvlab::graph::{encode_explicit, expand, Coloring, ExplicitGraph};
use uvlab::optimizer::{build_acceptance_operator, seesaw, SeesawConfig};
use uvlab::provers::{
    decompose, honest_proof, near_coloring_proof, perturbed_proof, proof_shape,
};
use uvlab::qma2::{acceptance_exact, run_sampled_batch, soundness_bound, uniformity_reject_probability};
use uvlab::state::PureState;

fn corpus() -> Corpus {
    Corpus::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")).unwrap()
}

/// Brute-force acceptance of the two-proof verifier from raw amplitudes and an explicit
/// edge set.
fn oracle_acceptance(g: &ExplicitGraph, r1: &[Complex64], r2: &[Complex64], labels: usize) -> f64 {
    let eq = 0.5 * (1.0 + r1.iter().zip(r2).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr());
    let mut cons = 0.0;
    for (o1, a) in r1.iter().enumerate().take(labels * 3) {
        for (o2, b) in r2.iter().enumerate().take(labels * 3) {
            let (v1, c1, v2, c2) = (o1 / 3, o1 % 3, o2 / 3, o2 % 3);
            let (lo, hi) = (v1.min(v2), v1.max(v2));
            let bad = (v1 == v2 && c1 != c2) || (v1 != v2 && c1 == c2 && hi < g.m() && g.has_edge(lo, hi));
            if !bad {
                cons += a.norm_sqr() * b.norm_sqr();
            }
        }
    }
    // Uniformity: project the color register onto |u_3⟩, then test the node register.
    let s3 = 1.0 / 3f64.sqrt();
    let xi: Vec<Complex64> = (0..labels).map(|v| (r1[3 * v] + r1[3 * v + 1] + r1[3 * v + 2]) * s3).collect();
    let p0: f64 = xi.iter().map(|x| x.norm_sqr()).sum();
    let along_u: Complex64 = xi.iter().sum::<Complex64>() / (labels as f64).sqrt();
    let unif = 1.0 - (p0 - along_u.norm_sqr());
    (eq + cons + unif) / 3.0
}

/// Every valid coloring of `g`, by enumeration.
fn all_valid_colorings(g: &ExplicitGraph) -> Vec<Coloring> {
    let m = g.m();
    (0..3usize.pow(m as u32))
        .filter_map(|mut code| {
            let col: Vec<u8> = (0..m)
                .map(|_| {
                    let c = (code % 3) as u8;
                    code /= 3;
                    c
                })
                .collect();
            let c = Coloring::new(col).unwrap();
            c.is_valid_for(g).then_some(c)
        })
        .collect()
}

#[test]
fn completeness_for_every_valid_coloring() {
    let c = corpus();
    for e in c.manifest.instances.iter().filter(|e| e.colorable && e.m <= 8) {
        let circ = c.circuit(e).unwrap();
        let g = expand(&circ).unwrap();
        for col in all_valid_colorings(&g) {
            let h = honest_proof(&circ, &col).unwrap();
            let r = acceptance_exact(&circ, &h, &h).unwrap();
            assert!((r.p_total - 1.0).abs() < 1e-12, "{} {:?}: {}", e.name, col, r.p_total);
        }
    }
}

#[test]
fn report_total_is_the_mixture() {
    let k4 = encode_explicit(&ExplicitGraph::complete(4), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let a = PureState::haar_random(proof_shape(2).unwrap(), &mut rng);
        let b = PureState::haar_random(proof_shape(2).unwrap(), &mut rng);
        let r = acceptance_exact(&k4, &a, &b).unwrap();
        assert!((r.p_total - (r.p_equality + r.p_consistency + r.p_uniformity) / 3.0).abs() < 1e-12);
        for p in [r.p_equality, r.p_consistency, r.p_uniformity] {
            assert!((0.0..=1.0).contains(&p));
        }
        let oracle = oracle_acceptance(&ExplicitGraph::complete(4), a.amplitudes(), b.amplitudes(), 4);
        assert!((r.p_total - oracle).abs() < 1e-12);
    }
}

#[test]
fn k4_cheat_matches_enumeration() {
    let g = ExplicitGraph::complete(4);
    let k4 = encode_explicit(&g, 2).unwrap();
    let s = near_coloring_proof(&k4, &Coloring::new(vec![0, 1, 2, 0]).unwrap(), 1).unwrap();
    let r = acceptance_exact(&k4, &s, &s).unwrap();
    let oracle = oracle_acceptance(&g, s.amplitudes(), s.amplitudes(), 4);
    assert!((oracle - (1.0 - 1.0 / 24.0)).abs() < 1e-12);
    assert!((r.p_total - oracle).abs() < 1e-12);
    assert!((r.p_equality - 1.0).abs() < 1e-12 && (r.p_uniformity - 1.0).abs() < 1e-12);
}

#[test]
fn tightness_on_non_colorable_corpus() {
    let c = corpus();
    for e in c.manifest.instances.iter().filter(|e| !e.colorable) {
        let circ = c.circuit(e).unwrap();
        let col = e.near_coloring.clone().unwrap();
        let v = e.min_violations.unwrap();
        let s = near_coloring_proof(&circ, &col, v).unwrap();
        let r = acceptance_exact(&circ, &s, &s).unwrap();
        let labels = 1usize << e.n;
        // Oracle: the two nodes of a bad edge are drawn in either order.
        let expect = 1.0 - (1.0 / 3.0) * (2 * v) as f64 / (labels * labels) as f64;
        assert!((r.p_total - expect).abs() < 1e-12, "{}", e.name);
        if v == 1 {
            assert!((r.p_total - (1.0 - (2.0 / 3.0) * 4f64.powi(-(e.n as i32)))).abs() < 1e-12);
        }
    }
}

#[test]
fn soundness_on_non_colorable_corpus() {
    let c = corpus();
    for e in c.manifest.instances.iter().filter(|e| !e.colorable && e.n <= 3) {
        let circ = c.circuit(e).unwrap();
        let ceiling = 1.0 - soundness_bound(e.n);
        let mut rng = ChaCha8Rng::seed_from_u64(e.n as u64);
        for _ in 0..200 {
            let a = PureState::haar_random(proof_shape(e.n).unwrap(), &mut rng);
            let b = PureState::haar_random(proof_shape(e.n).unwrap(), &mut rng);
            assert!(acceptance_exact(&circ, &a, &b).unwrap().p_total <= ceiling);
        }
        let s = near_coloring_proof(&circ, e.near_coloring.as_ref().unwrap(), e.min_violations.unwrap()).unwrap();
        assert!(acceptance_exact(&circ, &s, &s).unwrap().p_total <= ceiling);
        let op = build_acceptance_operator(&circ).unwrap();
        let mut cfg = SeesawConfig::new(5);
        cfg.restarts = if e.n <= 2 { 20 } else { 3 };
        cfg.max_iters = 100;
        cfg.extra_starts.push((s.clone(), s));
        let best = seesaw(&op, &cfg).unwrap();
        let r = acceptance_exact(&circ, &best.best.0, &best.best.1).unwrap();
        assert!((r.p_total - best.value).abs() < 1e-9);
        assert!(r.p_total <= ceiling, "{}: seesaw pair {}", e.name, r.p_total);
    }
}

#[test]
fn sampled_runs_converge_on_k4_cheat() {
    let k4 = encode_explicit(&ExplicitGraph::complete(4), 2).unwrap();
    let s = near_coloring_proof(&k4, &Coloring::new(vec![0, 1, 2, 0]).unwrap(), 1).unwrap();
    let runs = 100_000;
    let (rate, logs) = run_sampled_batch(&k4, &s, &s, runs, &mut ChaCha8Rng::seed_from_u64(17)).unwrap();
    let p = 1.0 - 1.0 / 24.0;
    let sigma = (p * (1.0 - p) / runs as f64).sqrt();
    assert!((rate - p).abs() <= 3.0 * sigma, "rate {rate}");
    assert_eq!(logs.len(), runs);
    assert!(logs.iter().filter(|l| !l.accept).all(|l| l.outcomes.len() == 4));
}

#[test]
fn honest_sampled_runs_always_accept() {
    let k3 = encode_explicit(&ExplicitGraph::complete(3), 2).unwrap();
    let h = honest_proof(&k3, &Coloring::new(vec![2, 0, 1]).unwrap()).unwrap();
    let (rate, _) = run_sampled_batch(&k3, &h, &h, 5000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    assert_eq!(rate, 1.0);
}

fn same_vertex_pass(p: &[f64], q: &[f64]) -> f64 {
    1.0 - p
        .chunks(3)
        .zip(q.chunks(3))
        .map(|(a, b)| a.iter().sum::<f64>() * b.iter().sum::<f64>() - a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
        .sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn equality_deviation_bound(seed in any::<u64>(), n in 1u32..4, exp in 1i32..8, haar in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = if haar {
            (PureState::haar_random(proof_shape(n).unwrap(), &mut rng), PureState::haar_random(proof_shape(n).unwrap(), &mut rng))
        } else {
            let col = Coloring::new((0..1 << n).map(|_| rng.random_range(0..3u8)).collect()).unwrap();
            let scale = 10f64.powi(-exp);
            (perturbed_proof(n, &col, scale, &mut rng).unwrap(), perturbed_proof(n, &col, scale, &mut rng).unwrap())
        };
        let eps = 1.0 - 0.5 * (1.0 + a.overlap_sqr(&b).unwrap());
        let da = decompose(&a).unwrap();
        let db = decompose(&b).unwrap();
        for k in 0..1usize << n {
            for l in 0..3 {
                let dev = (da.joint_probability(k, l) - db.joint_probability(k, l)).abs();
                prop_assert!(dev <= (8.0 * eps.max(0.0)).sqrt() + 1e-12);
            }
        }
    }

    #[test]
    fn near_honest_lemma_conclusions(seed in any::<u64>(), n in 1u32..4, exp in 8i32..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let col = Coloring::new((0..1 << n).map(|_| rng.random_range(0..3u8)).collect()).unwrap();
        let scale = 10f64.powi(-exp);
        let r1 = perturbed_proof(n, &col, scale, &mut rng).unwrap();
        let r2 = perturbed_proof(n, &col, scale, &mut rng).unwrap();
        let floor = 1e-10 * 4f64.powi(-(n as i32));
        let eq = 0.5 * (1.0 + r1.overlap_sqr(&r2).unwrap());
        let sv = same_vertex_pass(&r1.probabilities(), &r2.probabilities());
        prop_assume!(eq >= 1.0 - floor && sv >= 1.0 - floor);
        let d = decompose(&r1).unwrap();
        let big = 1e-2 / (1u64 << n) as f64;
        for v in 0..1usize << n {
            if d.node_weight(v) >= big {
                prop_assert!((0..3).any(|j| d.beta[v][j].norm_sqr() >= 0.9));
            }
        }
        prop_assert!(r1.uniformity_zero_probability("C").unwrap() >= 0.05);
        if uniformity_reject_probability(&r1).unwrap() <= floor {
            for v in 0..1usize << n {
                prop_assert!(d.node_weight(v) >= big);
            }
        }
    }
}
