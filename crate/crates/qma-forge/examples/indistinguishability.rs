//! Why a verifier cannot pre-screen proofs for product form: the uniform
//! mixture of product basis states and the uniform mixture of maximally
//! entangled Bell states are the same density operator, so every POVM has
//! p01 + p10 = 1 against them, and the product-fidelity floor 1/sqrt(d) is
//! attained exactly on maximally entangled states.

use qma_forge::indist::{
    bell_mixture, fidelity_floor_check, povm_error_pair, product_basis_mixture,
    random_binary_povm,
};

fn main() -> qma_forge::Result<()> {
    for d in [2usize, 4] {
        let mix0 = product_basis_mixture(d)?;
        let mix1 = bell_mixture(d)?;
        println!(
            "d = {d}: |product mixture - Bell mixture| = {:.3e}",
            mix0.matrix().max_abs_diff(mix1.matrix())
        );

        let mut worst: f64 = 0.0;
        for seed in 0..50u64 {
            let povm = random_binary_povm(mix0.layout(), seed)?;
            let (p01, p10) = povm_error_pair(&povm, &mix0, &mix1)?;
            worst = worst.max((p01 + p10 - 1.0).abs());
        }
        println!("d = {d}: worst |p01 + p10 - 1| over 50 POVMs = {worst:.3e}");

        let report = fidelity_floor_check(d, 50, 123)?;
        for check in &report.checks {
            println!("d = {d}: {} -> {:.3e} (pass: {})", check.name, check.measured, check.pass);
        }
    }
    Ok(())
}
