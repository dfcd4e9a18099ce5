//! Build a two-proof verifier with a prescribed acceptance operator, then
//! compare direct circuit simulation against the operator form and the
//! entangled optimum.

use qma_forge::linalg::{ComplexMatrix, RegisterLayout};
use qma_forge::states::{haar_random_pure, PureState};
use qma_forge::verifier::{
    accept_probability, acceptance_operator, optimal_entangled_proof, ProofTuple, Verifier,
};

fn main() -> qma_forge::Result<()> {
    // Acceptance operator 0.9|00⟩⟨00| + 0.2|11⟩⟨11| on two 1-qubit proofs.
    let m = ComplexMatrix::diagonal(&[0.9, 0.0, 0.0, 0.2])?;
    let v = Verifier::with_acceptance_operator(
        &m,
        vec![("p1".to_string(), 1), ("p2".to_string(), 1)],
    )?;
    println!("verifier registers: {:?}", v.layout().registers());

    let proof_layout = RegisterLayout::single("m", 1)?;
    let zeros = ProofTuple::new(vec![
        PureState::zero(proof_layout.clone())?,
        PureState::zero(proof_layout.clone())?,
    ]);
    println!("acceptance on |0⟩|0⟩: {:.6}", accept_probability(&v, &zeros)?);

    // The operator extracted back from the circuit matches the prescription.
    let extracted = acceptance_operator(&v)?;
    println!(
        "operator reconstruction error: {:.3e}",
        extracted.matrix().max_abs_diff(&m)
    );

    // Simulation equals the quadratic form on random product tuples.
    for seed in 0..3u64 {
        let proofs = ProofTuple::new(vec![
            haar_random_pure(&proof_layout, 10 + seed)?,
            haar_random_pure(&proof_layout, 20 + seed)?,
        ]);
        let sim = accept_probability(&v, &proofs)?;
        let form = extracted.quadratic_form(&proofs.joint_amplitudes())?;
        println!("random tuple {seed}: simulated {sim:.12}, operator form {form:.12}");
    }

    let (best, _) = optimal_entangled_proof(&v)?;
    println!("entangled optimum (top eigenvalue): {best:.6}");
    Ok(())
}
