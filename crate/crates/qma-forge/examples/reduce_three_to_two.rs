//! The 3-proof to 2-proof reduction end to end: honest acceptance follows
//! the exact 1/2 + p/2 identity, and the no-instance toy's reduced verifier
//! is certified below the 1 - delta/20 soundness bound.

use qma_forge::experiments::toy_peak_verifier;
use qma_forge::protocols::{honest_reduced_proofs, reduce_3_to_2};
use qma_forge::prover_opt::{certify_soundness, ProductSearchConfig};
use qma_forge::states::PureState;
use qma_forge::verifier::{accept_probability, acceptance_operator, ProofTuple};
use qma_forge::linalg::RegisterLayout;

fn main() -> qma_forge::Result<()> {
    let epsilon = 0.05;
    let delta = 0.6;

    // Yes instance: honest acceptance 1 - epsilon.
    let yes = toy_peak_verifier(3, 1.0 - epsilon)?;
    let reduced = reduce_3_to_2(&yes)?;
    println!(
        "reduced verifier: {} work qubits, {} proofs of {} qubits",
        reduced.work_qubits(),
        reduced.proof_count(),
        reduced.proof_qubits()
    );

    let zero = PureState::zero(RegisterLayout::single("m", 1)?)?;
    let originals = vec![zero.clone(), zero.clone(), zero];
    let p = accept_probability(&yes, &ProofTuple::new(originals.clone()))?;
    let structured = honest_reduced_proofs(&originals, 1, 0)?;
    let q = accept_probability(&reduced, &ProofTuple::new(structured))?;
    println!("honest: original {p:.12}, reduced {q:.12} (1 - eps/2 = {:.12})", 1.0 - epsilon / 2.0);

    // No instance: entangled optimum 1 - delta; certify the reduction.
    let no = toy_peak_verifier(3, 1.0 - delta)?;
    let no_reduced = reduce_3_to_2(&no)?;
    let lambda = acceptance_operator(&no_reduced)?.lambda_max()?;
    println!("reduced no-instance entangled optimum: {lambda:.6}");

    let mut config = ProductSearchConfig::new(32, 200, 1e-13, 7)?;
    config.brute_force_samples = 200_000;
    let cert = certify_soundness(&no_reduced, &[4, 4], 1.0 - delta / 20.0, &config)?;
    println!(
        "certificate: product >= {:.6}, entangled <= {:.6}, threshold {:.3}, conclusive: {}",
        cert.product_lower_bound, cert.entangled_upper_bound, cert.threshold, cert.conclusive
    );
    Ok(())
}
