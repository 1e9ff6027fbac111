//! `uvlab`: run protocol experiments on corpus instances and execute the check suites.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use uvlab::bellqma::{self, ConsistencyMode};
use uvlab::corpus::{read_instance, Corpus};
use uvlab::gadget::{self, GadgetMode, GadgetProgram};
use uvlab::graph::{brute_force_3color, expand, min_violation_coloring, Coloring, SuccinctCircuit};
use uvlab::optimizer::{self, SeesawConfig};
use uvlab::provers::{random_product_proofs, proof_shape, ProverStrategy};
use uvlab::state::PureState;
use uvlab::{qma2, suite, Error};

const BUDGET_ENV: &str = "UVLAB_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "uvlab", version, about = "Multi-proof QMA protocol lab for succinct 3-coloring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment and write its JSON report.
    Run(RunArgs),
    /// Run a check suite and print one line per check.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Protocol {
    Qma2,
    Bellqma,
    Gadget,
    Seesaw,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Honest,
    NearColoring,
    Random,
    Basis,
    UniformityEvasion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Parser, Debug)]
struct RunArgs {
    /// SGC v1 instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    protocol: Protocol,
    #[arg(long, value_enum, default_value = "honest")]
    strategy: Strategy,
    /// Proof count for bellqma; defaults to 120n.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Monte-Carlo samples (bellqma consistency, sampled qma2 and gadget runs).
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flatten the report to a two-line CSV instead of JSON.
    #[arg(long)]
    csv: bool,
    /// Coloring JSON file used by the honest and near-coloring strategies instead of the
    /// oracle's choice.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Gadget program JSON; a random program is drawn from the seed when absent.
    #[arg(long)]
    program: Option<PathBuf>,
    /// Inner-verifier acceptance for the gadget protocol.
    #[arg(long, default_value_t = 0.5)]
    inner_p: f64,
    /// Seesaw restarts.
    #[arg(long, default_value_t = optimizer::DEFAULT_RESTARTS)]
    restarts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Lemmas,
    Acceptance,
}

#[derive(Parser, Debug)]
struct SuiteArgs {
    #[arg(value_enum)]
    name: SuiteName,
    /// Corpus directory with manifest.json; adds per-instance checks to the lemma suite.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// JSON summary path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Instance(String),
    Capacity(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Instance(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Instance(m) | Failure::Capacity(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_capacity() {
            Failure::Capacity(e.to_string())
        } else {
            match e {
                Error::Parse { .. } | Error::InvalidColoring(_) => Failure::Instance(e.to_string()),
                _ => Failure::Usage(e.to_string()),
            }
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(&args),
        Command::Suite(args) => run_suite(&args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("uvlab: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn budget() -> Outcome<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(bellqma::DEFAULT_BUDGET),
    }
}

fn load_instance(args: &RunArgs) -> Outcome<(String, SuccinctCircuit)> {
    let path = args
        .instance
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("--instance is required for {:?}", args.protocol)))?;
    let circuit = read_instance(path).map_err(|e| match e {
        Error::InvalidArgument(m) => Failure::Instance(m),
        other => Failure::from(other),
    })?;
    let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Ok((name, circuit))
}

fn read_file(path: &PathBuf) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Instance(format!("{}: {e}", path.display())))
}

/// The coloring a strategy is built from: a valid one for honest proofs, a
/// minimum-violation one for cheats.
fn strategy_coloring(args: &RunArgs, c: &SuccinctCircuit, valid: bool) -> Outcome<Coloring> {
    if let Some(path) = &args.coloring {
        return Ok(Coloring::from_json(&read_file(path)?)?);
    }
    let g = expand(c)?;
    if valid {
        brute_force_3color(&g)?
            .ok_or_else(|| Failure::Instance("instance is not 3-colorable; no honest proof exists".into()))
    } else {
        Ok(min_violation_coloring(&g)?.0)
    }
}

fn build_strategy(args: &RunArgs, c: &SuccinctCircuit) -> Outcome<ProverStrategy> {
    Ok(match args.strategy {
        Strategy::Honest => ProverStrategy::Honest { coloring: strategy_coloring(args, c, true)? },
        Strategy::NearColoring => {
            let coloring = strategy_coloring(args, c, false)?;
            let violations = coloring.violations(&expand(c)?).len();
            ProverStrategy::NearColoring { coloring, violations }
        }
        Strategy::Random => ProverStrategy::Random { seed: args.seed },
        Strategy::Basis => ProverStrategy::Basis { vertex: 0, color: 0 },
        Strategy::UniformityEvasion => {
            let g = expand(c)?;
            let coloring = match brute_force_3color(&g)? {
                Some(col) => col,
                None => min_violation_coloring(&g)?.0,
            };
            ProverStrategy::UniformityEvasion { coloring }
        }
    })
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Honest => "honest",
        Strategy::NearColoring => "near_coloring",
        Strategy::Random => "random",
        Strategy::Basis => "basis",
        Strategy::UniformityEvasion => "uniformity_evasion",
    }
}

fn proofs(args: &RunArgs, c: &SuccinctCircuit, k: usize) -> Outcome<Vec<PureState>> {
    Ok(build_strategy(args, c)?.proofs(c, k)?)
}

fn run(args: &RunArgs) -> Outcome<ExitCode> {
    let report = match args.protocol {
        Protocol::Oracle => run_oracle(args)?,
        Protocol::Qma2 => run_qma2(args)?,
        Protocol::Bellqma => run_bellqma(args)?,
        Protocol::Seesaw => run_seesaw(args)?,
        Protocol::Gadget => run_gadget(args)?,
    };
    let text = if args.csv { report::to_csv(&report) } else { report::to_json(&report) };
    report::emit(args.out.as_deref(), &text).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(args: &RunArgs) -> Outcome<Value> {
    let (name, c) = load_instance(args)?;
    let g = expand(&c)?;
    let coloring = brute_force_3color(&g)?;
    Ok(json!({
        "instance": name,
        "protocol": "oracle",
        "n": c.n(),
        "m": c.m(),
        "edges": g.edge_count(),
        "colorable": coloring.is_some(),
        "coloring": coloring,
    }))
}

fn run_qma2(args: &RunArgs) -> Outcome<Value> {
    let (name, c) = load_instance(args)?;
    let pair = proofs(args, &c, 2)?;
    let r = qma2::acceptance_exact(&c, &pair[0], &pair[1])?;
    let mut report = json!({
        "instance": name,
        "protocol": "qma2",
        "n": c.n(),
        "strategy": strategy_name(args.strategy),
        "seed": args.seed,
        "p_eq": r.p_equality,
        "p_cons": r.p_consistency,
        "p_unif": r.p_uniformity,
        "p_total": r.p_total,
        "paper_soundness_floor": qma2::soundness_bound(c.n()),
    });
    if args.mode == Mode::Mc {
        let runs = usize::try_from(args.samples).map_err(|_| Failure::Usage("too many samples".into()))?;
        let rate = qma2::sampled_acceptance(&c, &pair[0], &pair[1], runs, args.seed)?;
        report["sampled"] = json!({ "runs": args.samples, "acceptance": rate });
    }
    Ok(report)
}

fn run_bellqma(args: &RunArgs) -> Outcome<Value> {
    let (name, c) = load_instance(args)?;
    let k = args.k.unwrap_or_else(|| bellqma::default_k(c.n()));
    if k < 2 {
        return Err(Failure::Usage("bellqma needs --k ≥ 2".into()));
    }
    let proofs = proofs(args, &c, k)?;
    let mode = match args.mode {
        Mode::Exact => ConsistencyMode::Exact { budget: budget()? },
        Mode::Mc => ConsistencyMode::MonteCarlo { samples: args.samples, seed: args.seed },
    };
    let r = bellqma::acceptance(&c, &proofs, mode)?;
    let (mode_name, samples) = match mode {
        ConsistencyMode::Exact { .. } => ("exact", Value::Null),
        ConsistencyMode::MonteCarlo { samples, .. } => ("mc", json!(samples)),
    };
    Ok(json!({
        "instance": name,
        "protocol": "bellqma",
        "n": c.n(),
        "strategy": strategy_name(args.strategy),
        "seed": args.seed,
        "k": k,
        "mode": mode_name,
        "samples": samples,
        "p_cons": r.p_consistency,
        "p_unif": r.p_uniformity,
        "p_total": r.p_total,
        "ci_halfwidth": r.ci_halfwidth,
        "z_tail": r.z_tail,
        "z_prime_size": bellqma::z_prime_set(&proofs)?.len(),
        "paper_soundness_floor": bellqma::soundness_bound(c.n()),
        "completeness_floor": bellqma::completeness_bound(k),
        "mc_seed_scheme": format!("ChaCha8 seed_from_u64(seed), stream = chunk index, {} samples per chunk", bellqma::MC_CHUNK),
    }))
}

fn run_seesaw(args: &RunArgs) -> Outcome<Value> {
    let (name, c) = load_instance(args)?;
    let op = optimizer::build_acceptance_operator(&c)?.with_instance(&name);
    let lambda = optimizer::spectral_norm(&op.matrix)?;
    let mut cfg = SeesawConfig::new(args.seed);
    cfg.restarts = args.restarts;
    let g = expand(&c)?;
    let start = match brute_force_3color(&g)? {
        Some(col) => Some(ProverStrategy::Honest { coloring: col }),
        None if g.m() <= uvlab::graph::MAX_MIN_VIOLATION_VERTICES => {
            let (coloring, violations) = min_violation_coloring(&g)?;
            Some(ProverStrategy::NearColoring { coloring, violations })
        }
        None => None,
    };
    if let Some(s) = start {
        let p = s.proofs(&c, 1)?.remove(0);
        cfg.extra_starts.push((p.clone(), p));
    }
    let r = optimizer::seesaw(&op, &cfg)?;
    let random = random_product_proofs(&proof_shape(c.n())?, 2, args.seed);
    let check = qma2::acceptance_exact(&c, &random[0], &random[1])?.p_total;
    let via_operator = op.product_expectation(&random[0], &random[1])?;
    Ok(json!({
        "instance": name,
        "protocol": "seesaw",
        "n": c.n(),
        "seed": args.seed,
        "lambda_max": lambda,
        "seesaw_best": r.value,
        "seesaw_label": "best found",
        "restarts": r.restarts,
        "extra_starts": cfg.extra_starts.len(),
        "iterations": r.iterations,
        "winning_start": r.winning_start,
        "product_check_error": (check - via_operator).abs(),
        "paper_soundness_floor": qma2::soundness_bound(c.n()),
    }))
}

fn run_gadget(args: &RunArgs) -> Outcome<Value> {
    let program = match &args.program {
        Some(path) => GadgetProgram::from_json(&read_file(path)?).map_err(|e| Failure::Instance(e.to_string()))?,
        None => {
            let angles = gadget::random_angles(8, args.seed);
            let us = angles
                .chunks(4)
                .map(|a| {
                    let z = gadget::Zhzhz { theta: a[0], alpha: a[1], beta: a[2], gamma: a[3] };
                    gadget::zhzhz_decompose(&z.unitary())
                })
                .collect::<uvlab::Result<Vec<_>>>()?;
            GadgetProgram::new(us)?
        }
    };
    let exact = gadget::single_qubit_proof_verifier(args.inner_p, &program, GadgetMode::Exact)?;
    let mut report = json!({
        "protocol": "gadget",
        "seed": args.seed,
        "t": program.t,
        "inner_p": args.inner_p,
        "w_acceptance": exact,
        "formula": 1.0 - 2f64.powi(-(program.t as i32)) * (1.0 - args.inner_p),
        "program": program,
    });
    if args.mode == Mode::Mc {
        let sampled = gadget::single_qubit_proof_verifier(
            args.inner_p,
            &program,
            GadgetMode::Sampled { samples: args.samples, seed: args.seed },
        )?;
        report["sampled"] = json!({ "samples": args.samples, "acceptance": sampled });
    }
    let reductions = (1..=6)
        .map(|t| gadget::end_to_end_reduction(&gadget::random_angles(t, args.seed.wrapping_add(t as u64))))
        .collect::<uvlab::Result<Vec<_>>>()?;
    report["reductions"] = serde_json::to_value(reductions).expect("reports serialize");
    Ok(report)
}

fn run_suite(args: &SuiteArgs) -> Outcome<ExitCode> {
    let report = match args.name {
        SuiteName::Lemmas => {
            let corpus = args.corpus.as_ref().map(Corpus::load).transpose().map_err(|e| Failure::Instance(e.to_string()))?;
            suite::lemma_suite(corpus.as_ref())
        }
        SuiteName::Acceptance => suite::acceptance_suite(),
    };
    for c in &report.checks {
        println!("{}", c.line());
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    if let Some(out) = &args.out {
        let text = serde_json::to_string_pretty(&report).expect("suite report serializes");
        report::emit(Some(out), &text).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(if report.failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
