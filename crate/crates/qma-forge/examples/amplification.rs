//! Parallel-repetition bookkeeping: N = 2pq^2 attempts with a threshold
//! acceptance rule drive the completeness error down to 2^-p while keeping
//! soundness at 2s/(c+s), and the binomial arithmetic matches a materialized
//! two-attempt circuit exactly.

use qma_forge::linalg::{ComplexMatrix, RegisterLayout, C64};
use qma_forge::protocols::{amplified_accept_honest, amplify, binomial_tail, repeat_verifier};
use qma_forge::states::PureState;
use qma_forge::verifier::{accept_probability, ProofTuple, SystemParams, Verifier};

fn main() -> qma_forge::Result<()> {
    let params = SystemParams::new(1, 2.0 / 3.0, 1.0 / 3.0)?.with_gap_witness(3);
    let amp = amplify(&params, 3, 10)?;
    println!(
        "N = {}, T = {}, completeness >= {:.10}, soundness <= {:.6}",
        amp.n_attempts, amp.threshold, amp.completeness, amp.soundness
    );
    println!(
        "honest tail at p = 2/3: {:.12} (bound {:.12})",
        amplified_accept_honest(2.0 / 3.0, &amp),
        amp.completeness
    );

    // Materialize two and three attempts of a toy verifier and compare with
    // the exact binomial tail.
    let mut m = ComplexMatrix::zeros(2, 2)?;
    m.set(0, 0, C64::new(2.0 / 3.0, 0.0));
    let toy = Verifier::with_acceptance_operator(&m, vec![("p1".into(), 1)])?;
    let honest = PureState::zero(RegisterLayout::single("m", 1)?)?;
    for (n, t) in [(2usize, 1u64), (2, 2), (3, 2)] {
        let repeated = repeat_verifier(&toy, n, t as usize)?;
        let circuit = accept_probability(&repeated, &ProofTuple::new(vec![honest.clone(); n]))?;
        let formula = binomial_tail(n as u64, t, 2.0 / 3.0);
        println!("n={n} t={t}: circuit {circuit:.12}, binomial {formula:.12}");
    }
    Ok(())
}
