//! Perfect-soundness machinery: concatenating proof registers preserves the
//! acceptance operator exactly, and the uniform-proof simulation accepts
//! with probability tr(M)/2^q, which is nonzero exactly when some proof is
//! accepted with nonzero probability.

use qma_forge::experiments::random_verifier;
use qma_forge::protocols::{concat_proofs, nqp_simulation};
use qma_forge::verifier::{acceptance_operator, Verifier};

fn main() -> qma_forge::Result<()> {
    // Concatenation: same circuit, one proof register, identical operator.
    let v = random_verifier(1, &[1, 1], 5)?;
    let w = concat_proofs(&v)?;
    let mv = acceptance_operator(&v)?;
    let mw = acceptance_operator(&w)?;
    println!(
        "concat: {} proofs -> {} proof, operator difference {:.3e}",
        v.proof_count(),
        w.proof_count(),
        mv.matrix().max_abs_diff(mw.matrix())
    );

    // Uniform-proof simulation on random verifiers.
    println!("\nuniform-proof acceptance vs tr(M)/2^q:");
    for seed in 0..5u64 {
        let v = random_verifier(1, &[2], 100 + seed)?;
        let outcome = nqp_simulation(&v)?;
        let m = acceptance_operator(&v)?;
        let expected = m.matrix().trace().re / 4.0;
        println!(
            "  seed {seed}: acceptance {:.12}, tr(M)/4 {:.12}, zero verdict {}",
            outcome.acceptance, expected, outcome.zero_verdict
        );
    }

    // A perfectly sound instance yields a zero verdict; an accepting one
    // does not.
    let reject = concat_proofs(&Verifier::always_reject(2, 1)?)?;
    println!("\nalways-reject: {:?}", nqp_simulation(&reject)?);
    let accept = concat_proofs(&Verifier::always_accept(2, 1)?)?;
    println!("always-accept: {:?}", nqp_simulation(&accept)?);
    Ok(())
}
