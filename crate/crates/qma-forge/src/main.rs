use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::json;

use qma_forge::experiments;
use qma_forge::report::ExperimentReport;
use qma_forge::verifier::Verifier;

/// Simulation and verification workbench for multi-proof quantum
/// Merlin-Arthur protocols. Every subcommand emits one JSON report on stdout
/// (or to --out) and exits 0 when all checks pass, 1 otherwise.
#[derive(Parser)]
#[command(name = "qma-forge", version)]
struct Cli {
    /// Base seed; all randomness derives deterministically from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Swap-test circuit versus the analytic acceptance formula.
    SwapTest {
        #[arg(long, default_value_t = 2)]
        qubits: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Parallel-repetition arithmetic with small-circuit cross-checks.
    Amplify {
        #[arg(long, default_value_t = 2.0 / 3.0)]
        completeness: f64,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        soundness: f64,
        /// Gap witness q with c - s >= 1/q.
        #[arg(long, default_value_t = 3)]
        gap_q: u64,
        /// Completeness error exponent p (bound 1 - 2^-p).
        #[arg(long, default_value_t = 10)]
        target_p: u32,
    },
    /// Reduce a 3-proof verifier to 2 proofs; builds the standard toys when
    /// no input verifier is given.
    Reduce {
        /// Verifier JSON to reduce (3 proof registers).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.6)]
        delta: f64,
        /// Also certify the reduced verifier's soundness.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Write the constructed verifier JSON here.
        #[arg(long)]
        emit_verifier: Option<PathBuf>,
    },
    /// Parameter ledger of the repeated reduction from k proofs to two.
    ReduceChain {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1e-4)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
    },
    /// Concatenate all proof registers into one.
    Concat {
        /// Verifier JSON to concatenate.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Write the constructed verifier JSON here.
        #[arg(long)]
        emit_verifier: Option<PathBuf>,
    },
    /// Uniform-proof nondeterministic simulation.
    NqpSim {
        /// Verifier JSON (concatenated automatically if multi-proof).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        trials: u64,
    },
    /// Product-prover optimization sanity sweep.
    Optimize {
        /// Number of 1-qubit proof slots.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Indistinguishability checks at one dimension.
    Indist {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Run the full acceptance suite.
    All,
}

fn load_verifier(path: &PathBuf) -> anyhow::Result<Verifier> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read verifier file {}", path.display()))?;
    let v: Verifier = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse verifier JSON from {}", path.display()))?;
    Ok(v)
}

fn save_verifier(path: &PathBuf, v: &Verifier) -> anyhow::Result<()> {
    let text = serde_json::to_string(v)?;
    fs::write(path, text)
        .with_context(|| format!("cannot write verifier file {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExperimentReport> {
    let seed = cli.seed;
    let report = match cli.command {
        Command::SwapTest { qubits, trials, tolerance } => {
            experiments::swap_test_report(qubits, trials, tolerance, seed)?
        }
        Command::Amplify { completeness, soundness, gap_q, target_p } => {
            experiments::amplify_report(completeness, soundness, gap_q, target_p, seed)?
        }
        Command::Reduce { input, k, epsilon, delta, certify, restarts, emit_verifier } => {
            let loaded = input.as_ref().map(load_verifier).transpose()?;
            if let Some(v) = &loaded {
                if v.proof_count() != 3 {
                    bail!("reduce expects a 3-proof verifier, found {} proofs", v.proof_count());
                }
            } else if k != 3 {
                bail!("the built-in reduce toys use k = 3 (use reduce-chain for other k)");
            }
            let (report, constructed) =
                experiments::reduce_report(loaded, epsilon, delta, certify, restarts, seed)?;
            if let Some(path) = emit_verifier {
                save_verifier(&path, &constructed)?;
            }
            report
        }
        Command::ReduceChain { k, epsilon, delta } => {
            experiments::reduce_chain_report(k, epsilon, delta, seed)?
        }
        Command::Concat { input, emit_verifier } => {
            let loaded = input.as_ref().map(load_verifier).transpose()?;
            let (report, constructed) = experiments::concat_report(loaded, seed)?;
            if let Some(path) = emit_verifier {
                save_verifier(&path, &constructed)?;
            }
            report
        }
        Command::NqpSim { input, trials } => {
            let loaded = input.as_ref().map(load_verifier).transpose()?;
            experiments::nqp_report(loaded, trials, seed)?
        }
        Command::Optimize { k, trials, restarts } => {
            experiments::optimize_report(&[k], trials, restarts, seed)?
        }
        Command::Indist { dim, trials } => experiments::indist_report(dim, trials, seed)?,
        Command::All => {
            let start = std::time::Instant::now();
            let reports = experiments::run_all(seed)?;
            let mut results = Vec::new();
            let mut summary = Vec::new();
            for report in reports {
                summary.push(json!({ "criterion": report.subcommand, "pass": report.pass }));
                for mut check in report.results {
                    check.name = format!("{}: {}", report.subcommand, check.name);
                    results.push(check);
                }
            }
            ExperimentReport::new(
                "all",
                "full acceptance suite",
                json!({ "seed": seed, "criteria": summary }),
                results,
                seed,
                start.elapsed().as_secs_f64(),
            )
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("QMA_FORGE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }

    let out = cli.out.clone();
    match run(cli) {
        Ok(report) => {
            let text = serde_json::to_string(&report).expect("reports serialize");
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text + "\n") {
                        eprintln!("error: cannot write report to {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
