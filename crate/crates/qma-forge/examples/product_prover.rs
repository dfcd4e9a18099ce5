//! Adversarial product provers: see-saw alternating eigenvector iteration
//! against a brute-force sweep, with the entangled top eigenvalue as the
//! ceiling.

use qma_forge::linalg::ComplexMatrix;
use qma_forge::prover_opt::{brute_force_product, seesaw, ProductSearchConfig};
use qma_forge::states::{bell_state, density_of, haar_random_unitary};
use qma_forge::verifier::AcceptanceOperator;

fn main() -> qma_forge::Result<()> {
    // A random acceptance operator on two 1-qubit slots.
    let u = haar_random_unitary(4, 11)?;
    let diag = ComplexMatrix::diagonal(&[0.9, 0.6, 0.3, 0.1])?;
    let m = AcceptanceOperator::new(u.mul(&diag)?.mul(&u.adjoint())?.hermitized())?;

    let config = ProductSearchConfig::new(32, 200, 1e-13, 3)?;
    let outcome = seesaw(&m, &[2, 2], &config)?;
    let sampled = brute_force_product(&m, &[2, 2], 1_000_000, 3)?;
    println!("entangled ceiling: {:.12}", m.lambda_max()?);
    println!("see-saw product optimum: {:.12}", outcome.value);
    println!("brute-force product optimum: {:.12}", sampled);
    println!("winning trace: {:?}", outcome.trace);

    // For a maximally entangled projector the product optimum is 1/d.
    let g = bell_state(2, 2, 2)?;
    let m = AcceptanceOperator::new(density_of(&g).matrix().clone())?;
    let outcome = seesaw(&m, &[2, 2], &config)?;
    println!("\nBell projector: product optimum {:.12} (exact 0.5)", outcome.value);
    Ok(())
}
