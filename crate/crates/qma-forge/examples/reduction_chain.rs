//! Chained reductions: each stage turns 3k+r proofs into 2k+r proofs while
//! halving the completeness error and dividing the soundness slack by 20.
//! The parameter ledger runs at any k; small instances also materialize.

use qma_forge::experiments::toy_peak_verifier;
use qma_forge::protocols::{chain_schedule, reduce_chain};
use qma_forge::verifier::SystemParams;

fn main() -> qma_forge::Result<()> {
    // Parameter ledger from nine proofs down to two.
    println!("schedule for k = 9, epsilon = 1e-6, delta = 0.3:");
    for (i, stage) in chain_schedule(9, 1e-6, 0.3)?.iter().enumerate() {
        println!(
            "  stage {}: {} -> {} proofs, eps {:.3e} -> {:.3e}, delta {:.3e} -> {:.3e}",
            i + 1,
            stage.input_proofs,
            stage.output_proofs,
            stage.epsilon_in,
            stage.epsilon_out,
            stage.delta_in,
            stage.delta_out
        );
    }

    // Materialized chain on a three-proof toy.
    let toy = toy_peak_verifier(3, 0.95)?;
    let params = SystemParams::new(3, 0.95, 0.4)?.with_gap_witness(2);
    let outcome = reduce_chain(&toy, &params, 2, 10)?;
    println!(
        "\nmaterialized chain: {} stages, final verifier has {} proofs of {} qubits",
        outcome.stages.len(),
        outcome.verifier.proof_count(),
        outcome.verifier.proof_qubits()
    );
    println!(
        "final parameters: completeness >= {:.8}, soundness <= {:.8}",
        1.0 - outcome.final_epsilon,
        1.0 - outcome.final_delta
    );
    Ok(())
}
