//! Named experiment runners behind the CLI subcommands and the acceptance
//! suite. Every runner returns an [`ExperimentReport`] whose config echo
//! suffices to reproduce the run bit-for-bit from the seed.

use std::time::Instant;

use serde_json::json;

use crate::error::{Error, Result};
use crate::indist;
use crate::linalg::{self, eig_hermitian, tensor, ComplexMatrix, RegisterLayout, C64};
use crate::protocols::{
    amplified_accept_honest, amplify, binomial_tail, chain_schedule, concat_proofs,
    honest_reduced_proofs, nqp_simulation, reduce_3_to_2, reduce_3kr_to_2kr, reduce_chain,
    repeat_verifier, swap_test_analytic, swap_test_verifier,
};
use crate::prover_opt::{
    brute_force_product, certify_soundness, seesaw, ProductSearchConfig,
};
use crate::report::{CheckResult, ExperimentReport};
use crate::states::{
    derive_seed, haar_random_pure, haar_random_unitary, random_density, DensityOperator,
    PureState,
};
use crate::verifier::{
    accept_probability, accept_probability_mixed, acceptance_operator, ProofTuple, SystemParams,
    Verifier,
};

/// Toy k-proof verifier on 1-qubit proofs whose acceptance operator is
/// peak * |0...0⟩⟨0...0|; honest all-zero proofs are accepted with
/// probability `peak` and the entangled optimum is `peak`.
pub fn toy_peak_verifier(k: usize, peak: f64) -> Result<Verifier> {
    let dim = 1usize << k;
    let mut m = ComplexMatrix::zeros(dim, dim)?;
    m.set(0, 0, C64::new(peak, 0.0));
    Verifier::with_acceptance_operator(
        &m,
        (1..=k).map(|i| (format!("p{i}"), 1)).collect(),
    )
}

fn zero_proofs(k: usize) -> Result<Vec<PureState>> {
    (0..k)
        .map(|_| PureState::zero(RegisterLayout::single("m", 1)?))
        .collect()
}

/// Split a multi-register pure state into per-register factors when it is a
/// product across every register boundary (top Schmidt coefficient 1 within
/// 1e-6 at each cut); returns None otherwise.
fn factor_into_slots(state: &PureState) -> Result<Option<Vec<PureState>>> {
    let names: Vec<String> = state.layout().names().iter().map(|s| s.to_string()).collect();
    if names.len() == 1 {
        return Ok(Some(vec![state.clone()]));
    }
    let first = names[0].as_str();
    let s = state.schmidt(&[first])?;
    if (s.coefficients[0] - 1.0).abs() > 1e-6 {
        return Ok(None);
    }
    let qubits = state.layout().qubit_count(first)?;
    let factor = PureState::normalized(RegisterLayout::single(first, qubits)?, s.left.column(0))?;
    let remainder = PureState::normalized(state.layout().without(&[first])?, s.right.column(0))?;
    Ok(factor_into_slots(&remainder)?.map(|mut rest| {
        rest.insert(0, factor);
        rest
    }))
}

/// Random verifier with Haar-distributed circuit.
pub fn random_verifier(work_qubits: usize, proof_regs: &[usize], seed: u64) -> Result<Verifier> {
    let mut registers = vec![("work".to_string(), work_qubits)];
    for (i, q) in proof_regs.iter().enumerate() {
        registers.push((format!("p{}", i + 1), *q));
    }
    let layout = RegisterLayout::new(registers)?;
    let circuit = haar_random_unitary(layout.dim(), seed)?;
    let names = (0..proof_regs.len()).map(|i| format!("p{}", i + 1)).collect();
    Verifier::new(circuit, layout, 0, names)
}

/// Circuit-versus-formula comparison for the swap test at one proof size:
/// the circuit-derived acceptance operator applied to `trials` random
/// density pairs against 1/2 + tr(rho sigma)/2.
pub fn swap_test_report(
    qubits: usize,
    trials: u64,
    tolerance: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let v = swap_test_verifier(qubits)?;
    let m = acceptance_operator(&v)?;
    let layout = RegisterLayout::single("m", qubits)?;
    let d = layout.dim();

    let mut max_diff: f64 = 0.0;
    for t in 0..trials {
        let rho = random_density(&layout, 1 + (t as usize % d), derive_seed(seed, 2 * t))?;
        let sigma = random_density(&layout, 1 + ((t as usize + 1) % d), derive_seed(seed, 2 * t + 1))?;
        let joint = tensor(rho.matrix(), sigma.matrix())?;
        let circuit_p = m.matrix().trace_product(&joint)?.re;
        let formula = swap_test_analytic(&rho, &sigma)?;
        max_diff = max_diff.max((circuit_p - formula).abs());
    }

    // A handful of full density evolutions validate the operator path itself.
    let mut max_evolution_diff: f64 = 0.0;
    for t in 0..trials.min(10) {
        let rho = random_density(&layout, 1 + (t as usize % d), derive_seed(seed, 2 * t))?;
        let sigma = random_density(&layout, 1 + ((t as usize + 1) % d), derive_seed(seed, 2 * t + 1))?;
        let evolved = accept_probability_mixed(&v, &[rho.clone(), sigma.clone()])?;
        let formula = swap_test_analytic(&rho, &sigma)?;
        max_evolution_diff = max_evolution_diff.max((evolved - formula).abs());
    }

    let results = vec![
        CheckResult::within(
            &format!("max |circuit - formula| over {trials} pairs at {qubits} qubits"),
            max_diff,
            0.0,
            tolerance,
        ),
        CheckResult::within(
            "max |density evolution - formula| on spot checks",
            max_evolution_diff,
            0.0,
            tolerance,
        ),
    ];
    Ok(ExperimentReport::new(
        "swap-test",
        "acceptance = 1/2 + tr(rho sigma)/2",
        json!({ "qubits": qubits, "trials": trials, "tolerance": tolerance, "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Fidelity product rule and chain inequality over seeded random density
/// triples at dimensions 2, 4, 8.
pub fn fidelity_lemmas_report(trials_per_dim: u64, seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut results = Vec::new();
    for qubits in 1..=3usize {
        let layout = RegisterLayout::single("r", qubits)?;
        let d = layout.dim();
        let joint_layout = RegisterLayout::new(vec![("x".into(), qubits), ("y".into(), qubits)])?;

        let mut max_product_diff: f64 = 0.0;
        let mut min_chain_slack = f64::INFINITY;
        for t in 0..trials_per_dim {
            let s = derive_seed(seed, (qubits as u64) << 32 | t);
            let rank = |off: u64| 1 + ((t + off) as usize % d);
            let rho1 = random_density(&layout, rank(0), derive_seed(s, 1))?;
            let sigma1 = random_density(&layout, rank(1), derive_seed(s, 2))?;
            let rho2 = random_density(&layout, rank(2), derive_seed(s, 3))?;
            let sigma2 = random_density(&layout, rank(3), derive_seed(s, 4))?;

            let rho = DensityOperator::new(
                joint_layout.clone(),
                tensor(rho1.matrix(), rho2.matrix())?,
            )?;
            let sigma = DensityOperator::new(
                joint_layout.clone(),
                tensor(sigma1.matrix(), sigma2.matrix())?,
            )?;
            let lhs = crate::states::fidelity(&rho, &sigma)?;
            let rhs = crate::states::fidelity(&rho1, &sigma1)?
                * crate::states::fidelity(&rho2, &sigma2)?;
            max_product_diff = max_product_diff.max((lhs - rhs).abs());

            let xi = random_density(&layout, rank(4), derive_seed(s, 5))?;
            let fab = crate::states::fidelity(&rho1, &sigma1)?;
            let fbc = crate::states::fidelity(&sigma1, &xi)?;
            let fac = crate::states::fidelity(&rho1, &xi)?;
            min_chain_slack = min_chain_slack.min(1.0 + fac - fab * fab - fbc * fbc);
        }
        results.push(CheckResult::within(
            &format!("max |F(r1xr2,s1xs2) - F(r1,s1)F(r2,s2)| at d={d}"),
            max_product_diff,
            0.0,
            1e-7,
        ));
        results.push(CheckResult::at_least(
            &format!("min chain slack 1 + F(a,c) - F(a,b)^2 - F(b,c)^2 at d={d}"),
            min_chain_slack,
            0.0,
            1e-9,
        ));
    }
    Ok(ExperimentReport::new(
        "fidelity",
        "F(r1xr2,s1xs2) = F(r1,s1)F(r2,s2); F(a,b)^2 + F(b,c)^2 <= 1 + F(a,c)",
        json!({ "trials_per_dim": trials_per_dim, "dims": [2, 4, 8], "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Amplification arithmetic plus binomial-versus-circuit cross-checks.
pub fn amplify_report(
    c: f64,
    s: f64,
    gap_q: u64,
    target_p: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let params = SystemParams::new(1, c, s)?.with_gap_witness(gap_q);
    let amp = amplify(&params, gap_q, target_p)?;

    let mut results = vec![
        CheckResult::within(
            "attempt count N = 2 p q^2",
            amp.n_attempts as f64,
            (2 * target_p as u64 * gap_q * gap_q) as f64,
            0.0,
        ),
        CheckResult::within(
            "threshold T = ceil(N (c+s)/2)",
            amp.threshold as f64,
            (amp.n_attempts as f64 * (c + s) / 2.0).ceil(),
            0.0,
        ),
        CheckResult::within(
            "completeness bound 1 - 2^-p",
            amp.completeness,
            1.0 - 0.5_f64.powi(target_p as i32),
            0.0,
        ),
        CheckResult::within("soundness bound 2s/(c+s)", amp.soundness, 2.0 * s / (c + s), 1e-12),
        CheckResult::at_most(
            "soundness bound below chained bound 1 - (c-s)/2",
            amp.soundness,
            amp.gap_soundness_bound,
            1e-12,
        ),
        CheckResult::at_least(
            "honest binomial tail at p = c meets completeness bound",
            amplified_accept_honest(c, &amp),
            amp.completeness,
            0.0,
        ),
    ];

    // Materialized cross-check at two and three attempts.
    let honest_p = 2.0 / 3.0;
    let mut m = ComplexMatrix::zeros(2, 2)?;
    m.set(0, 0, C64::new(honest_p, 0.0));
    let toy = Verifier::with_acceptance_operator(&m, vec![("p1".into(), 1)])?;
    let honest = PureState::zero(RegisterLayout::single("m", 1)?)?;
    for (n, t) in [(2usize, 1u64), (3, 2)] {
        let repeated = repeat_verifier(&toy, n, t as usize)?;
        let circuit_p =
            accept_probability(&repeated, &ProofTuple::new(vec![honest.clone(); n]))?;
        let formula = binomial_tail(n as u64, t, honest_p);
        results.push(CheckResult::within(
            &format!("{n}-attempt circuit matches binomial tail"),
            circuit_p,
            formula,
            1e-10,
        ));
    }

    Ok(ExperimentReport::new(
        "amplify",
        "N = 2pq^2 attempts, accept at (c+s)/2 fraction: completeness 1-2^-p, soundness 2s/(c+s)",
        json!({ "c": c, "s": s, "gap_q": gap_q, "target_p": target_p, "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Reduction experiment. Without an input verifier, builds the two toys
/// (honest acceptance 1 - epsilon; entangled optimum 1 - delta) and checks
/// the completeness and soundness sides of the reduction bound. With an
/// input, reduces it and reports structural checks plus an optional
/// certificate.
pub fn reduce_report(
    input: Option<Verifier>,
    epsilon: f64,
    delta: f64,
    certify: bool,
    restarts: usize,
    seed: u64,
) -> Result<(ExperimentReport, Verifier)> {
    let start = Instant::now();
    let mut results = Vec::new();
    let constructed;
    match input {
        None => {
            let yes = toy_peak_verifier(3, 1.0 - epsilon)?;
            let yes_reduced = reduce_3_to_2(&yes)?;
            let originals = zero_proofs(3)?;
            let honest = accept_probability(&yes, &ProofTuple::new(originals.clone()))?;
            results.push(CheckResult::at_least(
                "toy honest acceptance is 1 - epsilon",
                honest,
                1.0 - epsilon,
                1e-12,
            ));
            let reduced_proofs = honest_reduced_proofs(&originals, 1, 0)?;
            let reduced_honest =
                accept_probability(&yes_reduced, &ProofTuple::new(reduced_proofs))?;
            results.push(CheckResult::at_least(
                "reduced honest acceptance is at least 1 - epsilon/2",
                reduced_honest,
                1.0 - epsilon / 2.0,
                1e-10,
            ));
            results.push(CheckResult::within(
                "reduced honest acceptance equals 1/2 + honest/2",
                reduced_honest,
                0.5 + honest / 2.0,
                1e-12,
            ));

            let no = toy_peak_verifier(3, 1.0 - delta)?;
            let no_reduced = reduce_3_to_2(&no)?;
            let m_no = acceptance_operator(&no)?;
            results.push(CheckResult::at_most(
                "toy entangled optimum is 1 - delta",
                m_no.lambda_max()?,
                1.0 - delta,
                1e-10,
            ));
            if certify {
                let mut config =
                    ProductSearchConfig::new(restarts.max(1), 200, 1e-13, derive_seed(seed, 1))?;
                config.brute_force_samples = 1_000_000;
                let threshold = 1.0 - delta / 20.0;
                let slot_dims = vec![4, 4];
                let cert = certify_soundness(&no_reduced, &slot_dims, threshold, &config)?;
                let certified_value = if cert.conclusive {
                    cert.entangled_upper_bound
                } else {
                    cert.product_lower_bound
                };
                results.push(CheckResult::at_most(
                    "certified reduced soundness is at most 1 - delta/20",
                    certified_value,
                    threshold,
                    0.0,
                ));
                results.push(CheckResult::flag("certificate is conclusive", cert.conclusive));

                let m_reduced = acceptance_operator(&no_reduced)?;
                let sw = seesaw(&m_reduced, &slot_dims, &config)?;
                let bf = brute_force_product(
                    &m_reduced,
                    &slot_dims,
                    config.brute_force_samples,
                    config.seed,
                )?;
                results.push(CheckResult::within(
                    "see-saw and brute force agree on the product optimum",
                    sw.value,
                    bf,
                    1e-4,
                ));
            }
            constructed = yes_reduced;
        }
        Some(v) => {
            let w = reduce_3_to_2(&v)?;
            let m_v = acceptance_operator(&v)?;
            let m_w = acceptance_operator(&w)?;
            let eig = eig_hermitian(&m_w.matrix().hermitized())?;
            results.push(CheckResult::at_least(
                "constructed acceptance spectrum min",
                eig.values.last().copied().unwrap_or(0.0),
                0.0,
                1e-10,
            ));
            results.push(CheckResult::at_most(
                "constructed acceptance spectrum max",
                eig.values.first().copied().unwrap_or(0.0),
                1.0,
                1e-10,
            ));
            results.push(CheckResult::at_most(
                "entangled optimum at most 1/2 + original optimum/2",
                m_w.lambda_max()?,
                0.5 + m_v.lambda_max()? / 2.0,
                1e-9,
            ));
            // When the input's best proof is a product tuple, it doubles as
            // an honest strategy and the exact acceptance identity applies.
            let (_, top) = crate::verifier::optimal_entangled_proof(&v)?;
            if let Some(factors) = factor_into_slots(&top)? {
                let honest = accept_probability(&v, &ProofTuple::new(factors.clone()))?;
                let reduced_proofs = honest_reduced_proofs(&factors, 1, 0)?;
                let reduced_p = accept_probability(&w, &ProofTuple::new(reduced_proofs))?;
                results.push(CheckResult::within(
                    "reduced honest acceptance equals 1/2 + honest/2",
                    reduced_p,
                    0.5 + honest / 2.0,
                    1e-10,
                ));
                results.push(CheckResult::at_least(
                    "reduced honest acceptance is at least 1 - epsilon/2",
                    reduced_p,
                    1.0 - (1.0 - honest) / 2.0,
                    1e-10,
                ));
            }
            if certify {
                let mut config =
                    ProductSearchConfig::new(restarts.max(1), 200, 1e-13, derive_seed(seed, 1))?;
                config.brute_force_samples = 100_000;
                let threshold = 1.0 - delta / 20.0;
                let q = w.proof_qubits();
                let slot_dims = vec![1usize << q, 1usize << q];
                let cert = certify_soundness(&w, &slot_dims, threshold, &config)?;
                results.push(CheckResult::flag(
                    "certificate is conclusive for threshold 1 - delta/20",
                    cert.conclusive,
                ));
            }
            constructed = w;
        }
    }
    let report = ExperimentReport::new(
        "reduce",
        "3 proofs to 2: completeness 1 - eps/2, soundness 1 - delta/20",
        json!({
            "epsilon": epsilon,
            "delta": delta,
            "certify": certify,
            "restarts": restarts,
            "seed": seed,
        }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    );
    Ok((report, constructed))
}

/// Reduction-chain experiment: the parameter ledger from k proofs down to
/// two, plus a materialized stage when the toy fits the dense budget.
pub fn reduce_chain_report(k: usize, epsilon: f64, delta: f64, seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut results = Vec::new();

    let stages = chain_schedule(k, epsilon, delta)?;
    results.push(CheckResult::within(
        "chain ends at two proofs",
        stages.last().map(|s| s.output_proofs as f64).unwrap_or(2.0),
        2.0,
        0.0,
    ));
    for (i, stage) in stages.iter().enumerate() {
        results.push(CheckResult::within(
            &format!("stage {} halves epsilon", i + 1),
            stage.epsilon_out,
            stage.epsilon_in / 2.0,
            0.0,
        ));
        results.push(CheckResult::within(
            &format!("stage {} divides delta by twenty", i + 1),
            stage.delta_out,
            stage.delta_in / 20.0,
            0.0,
        ));
    }
    if stages.len() >= 2 {
        results.push(CheckResult::within(
            "two composed stages divide delta by 400",
            stages[1].delta_out,
            delta / 400.0,
            1e-15,
        ));
        results.push(CheckResult::within(
            "two composed stages quarter epsilon",
            stages[1].epsilon_out,
            epsilon / 4.0,
            1e-18,
        ));
    }

    // Materialize the chain on a toy when it fits the budget (k <= 3 at one
    // qubit per proof).
    if k <= 3 {
        let toy = toy_peak_verifier(k, 1.0 - epsilon)?;
        let c = 1.0 - epsilon;
        let s = 1.0 - delta;
        let gap_q = (1.0 / (c - s)).ceil().max(1.0) as u64;
        let params = SystemParams::new(k, c, s)?.with_gap_witness(gap_q);
        let outcome = reduce_chain(&toy, &params, gap_q, 10)?;
        results.push(CheckResult::within(
            "materialized chain stage count",
            outcome.stages.len() as f64,
            if k == 2 { 0.0 } else { 1.0 },
            0.0,
        ));
        results.push(CheckResult::within(
            "materialized chain ends at two proofs",
            outcome.verifier.proof_count() as f64,
            2.0,
            0.0,
        ));
    }

    Ok(ExperimentReport::new(
        "reduce-chain",
        "repeat 3k+r to 2k+r: epsilon halves and delta divides by 20 per stage",
        json!({ "k": k, "epsilon": epsilon, "delta": delta, "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Concatenation experiment: relabeling the proofs as one register preserves
/// the acceptance operator and every acceptance probability.
pub fn concat_report(input: Option<Verifier>, seed: u64) -> Result<(ExperimentReport, Verifier)> {
    let start = Instant::now();
    let v = match input {
        Some(v) => v,
        None => random_verifier(1, &[1, 1], derive_seed(seed, 7))?,
    };
    let w = concat_proofs(&v)?;
    let m_v = acceptance_operator(&v)?;
    let m_w = acceptance_operator(&w)?;
    let mut results = vec![
        CheckResult::within(
            "acceptance operators coincide",
            m_v.matrix().max_abs_diff(m_w.matrix()),
            0.0,
            1e-14,
        ),
        CheckResult::within("proof count becomes one", w.proof_count() as f64, 1.0, 0.0),
    ];

    // Honest product tuple simulated both ways.
    let proof_layout = RegisterLayout::single("m", v.proof_qubits())?;
    let parts: Vec<PureState> = (0..v.proof_count())
        .map(|i| haar_random_pure(&proof_layout, derive_seed(seed, 100 + i as u64)))
        .collect::<Result<_>>()?;
    let p = accept_probability(&v, &ProofTuple::new(parts.clone()))?;
    let mut joint = vec![C64::new(1.0, 0.0)];
    for part in &parts {
        joint = linalg::tensor_vec(&joint, part.amplitudes());
    }
    let joint_state =
        PureState::new(RegisterLayout::single("m", v.joint_proof_qubits())?, joint)?;
    let q = accept_probability(&w, &ProofTuple::new(vec![joint_state]))?;
    results.push(CheckResult::within(
        "honest tuple accepted identically after concatenation",
        q,
        p,
        1e-14,
    ));

    // Perfect soundness survives concatenation.
    let reject = Verifier::always_reject(3, 1)?;
    let reject_cat = concat_proofs(&reject)?;
    results.push(CheckResult::at_most(
        "concatenated always-reject optimum",
        acceptance_operator(&reject_cat)?.lambda_max()?,
        0.0,
        1e-12,
    ));

    let report = ExperimentReport::new(
        "concat",
        "one concatenated proof register preserves the acceptance operator",
        json!({ "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    );
    Ok((report, w))
}

/// Uniform-proof simulation experiment: acceptance equals tr(M)/2^q and the
/// zero verdict matches the entangled optimum being zero.
pub fn nqp_report(input: Option<Verifier>, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut results = Vec::new();

    if let Some(v) = input {
        let v = if v.proof_count() == 1 { v } else { concat_proofs(&v)? };
        let outcome = nqp_simulation(&v)?;
        let m = acceptance_operator(&v)?;
        let expected = m.matrix().trace().re / v.joint_proof_dim() as f64;
        results.push(CheckResult::within(
            "acceptance equals tr(M)/2^q",
            outcome.acceptance,
            expected,
            1e-12,
        ));
        results.push(CheckResult::flag(
            "zero verdict matches lambda_max <= 1e-12",
            outcome.zero_verdict == (m.lambda_max()? <= 1e-12),
        ));
    } else {
        let mut max_diff: f64 = 0.0;
        let mut verdicts_agree = true;
        for t in 0..trials {
            let work = 1 + (t as usize % 2);
            let v = random_verifier(work, &[2], derive_seed(seed, t))?;
            let outcome = nqp_simulation(&v)?;
            let m = acceptance_operator(&v)?;
            let expected = m.matrix().trace().re / 4.0;
            max_diff = max_diff.max((outcome.acceptance - expected).abs());
            verdicts_agree &= outcome.zero_verdict == (m.lambda_max()? <= 1e-12);
        }
        results.push(CheckResult::within(
            &format!("max |acceptance - tr(M)/4| over {trials} random verifiers"),
            max_diff,
            0.0,
            1e-12,
        ));
        results.push(CheckResult::flag(
            "zero verdicts agree with lambda_max <= 1e-12 on all verifiers",
            verdicts_agree,
        ));

        let reject = concat_proofs(&Verifier::always_reject(2, 1)?)?;
        let outcome = nqp_simulation(&reject)?;
        results.push(CheckResult::flag(
            "perfect-soundness instance yields a zero verdict",
            outcome.zero_verdict,
        ));
        let yes = concat_proofs(&Verifier::always_accept(2, 1)?)?;
        let outcome = nqp_simulation(&yes)?;
        results.push(CheckResult::flag(
            "accepting instance yields a nonzero verdict",
            !outcome.zero_verdict && (outcome.acceptance - 1.0).abs() < 1e-12,
        ));
    }

    Ok(ExperimentReport::new(
        "nqp-sim",
        "uniform-proof circuit acceptance equals tr(M)/2^q",
        json!({ "trials": trials, "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

fn random_acceptance_operator(
    slot_dims: &[usize],
    seed: u64,
) -> Result<crate::verifier::AcceptanceOperator> {
    let d: usize = slot_dims.iter().product();
    let u = haar_random_unitary(d, seed)?;
    let mut diag = Vec::with_capacity(d);
    for i in 0..d {
        diag.push((derive_seed(seed ^ 0x51ca, i as u64) >> 11) as f64 / (1u64 << 53) as f64);
    }
    let m = u
        .mul(&ComplexMatrix::diagonal(&diag)?)?
        .mul(&u.adjoint())?
        .hermitized();
    crate::verifier::AcceptanceOperator::new(m)
}

/// Optimizer sanity sweep: monotone see-saw traces, domination by the
/// entangled bound, and recovery of factorized optima.
pub fn optimize_report(
    slot_counts: &[usize],
    trials: u64,
    restarts: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut results = Vec::new();

    for &slots in slot_counts {
        let slot_dims = vec![2usize; slots];
        let mut monotone = true;
        let mut max_excess: f64 = f64::NEG_INFINITY;
        for t in 0..trials {
            let m = random_acceptance_operator(&slot_dims, derive_seed(seed, (slots as u64) << 32 | t))?;
            let config = ProductSearchConfig::new(restarts.max(1), 150, 1e-12, derive_seed(seed, t))?;
            let outcome = seesaw(&m, &slot_dims, &config)?;
            for trace in &outcome.restart_traces {
                for pair in trace.windows(2) {
                    monotone &= pair[1] >= pair[0] - 1e-12;
                }
            }
            max_excess = max_excess.max(outcome.value - m.lambda_max()?);
        }
        results.push(CheckResult::flag(
            &format!("see-saw traces are monotone at {slots} slots"),
            monotone,
        ));
        results.push(CheckResult::at_most(
            &format!("see-saw never exceeds the entangled bound at {slots} slots"),
            max_excess,
            0.0,
            1e-9,
        ));
    }

    // Factorized operators: the product optimum is the product of top
    // eigenvalues, recovered by see-saw.
    let mut max_factor_err: f64 = 0.0;
    for t in 0..trials.min(50) {
        let la = RegisterLayout::single("x", 1)?;
        let lb = RegisterLayout::single("y", 1)?;
        let a = random_density(&la, 1 + (t as usize % 2), derive_seed(seed, 1000 + t))?;
        let b = random_density(&lb, 1 + ((t + 1) as usize % 2), derive_seed(seed, 2000 + t))?;
        let m = crate::verifier::AcceptanceOperator::new(tensor(a.matrix(), b.matrix())?)?;
        let expected = eig_hermitian(a.matrix())?.values[0] * eig_hermitian(b.matrix())?.values[0];
        let config = ProductSearchConfig::new(restarts.max(4), 200, 1e-13, derive_seed(seed, 3000 + t))?;
        let outcome = seesaw(&m, &[2, 2], &config)?;
        max_factor_err = max_factor_err.max((outcome.value - expected).abs());
    }
    results.push(CheckResult::within(
        "factorized operators recover the product of top eigenvalues",
        max_factor_err,
        0.0,
        1e-8,
    ));

    Ok(ExperimentReport::new(
        "optimize",
        "alternating top-eigenvector sweeps are monotone and bounded by lambda_max",
        json!({
            "slot_counts": slot_counts,
            "trials": trials,
            "restarts": restarts,
            "seed": seed,
        }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Indistinguishability experiment at one dimension.
pub fn indist_report(d: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut results = Vec::new();

    let mix0 = indist::product_basis_mixture(d)?;
    let mix1 = indist::bell_mixture(d)?;
    let dim = d * d;
    let flat = ComplexMatrix::diagonal(&vec![1.0 / dim as f64; dim])?;
    results.push(CheckResult::within(
        "product basis mixture equals I/d^2",
        mix0.matrix().max_abs_diff(&flat),
        0.0,
        1e-12,
    ));
    results.push(CheckResult::within(
        "Bell mixture equals I/d^2",
        mix1.matrix().max_abs_diff(&flat),
        0.0,
        1e-12,
    ));
    results.push(CheckResult::within(
        "mixtures coincide",
        mix0.matrix().max_abs_diff(mix1.matrix()),
        0.0,
        1e-12,
    ));

    let mut max_gram_dev: f64 = 0.0;
    let mut states = Vec::new();
    for k in 1..=d {
        for l in 1..=d {
            states.push(crate::states::bell_state(d, k, l)?);
        }
    }
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let overlap = a.inner(b)?.norm();
            let expected = if i == j { 1.0 } else { 0.0 };
            max_gram_dev = max_gram_dev.max((overlap - expected).abs());
        }
    }
    results.push(CheckResult::within(
        "Bell family Gram matrix is the identity",
        max_gram_dev,
        0.0,
        1e-12,
    ));

    let mut max_guess_dev: f64 = 0.0;
    for t in 0..trials {
        let povm = indist::random_binary_povm(mix0.layout(), derive_seed(seed, t))?;
        let (p01, p10) = indist::povm_error_pair(&povm, &mix0, &mix1)?;
        max_guess_dev = max_guess_dev.max((p01 + p10 - 1.0).abs());
    }
    results.push(CheckResult::within(
        &format!("p01 + p10 = 1 over {trials} random POVMs"),
        max_guess_dev,
        0.0,
        1e-10,
    ));

    let floor = indist::fidelity_floor_check(d, trials, derive_seed(seed, 0xF100))?;
    results.extend(floor.checks);

    Ok(ExperimentReport::new(
        "indist",
        "both mixtures are I/d^2; product fidelity floor is 1/sqrt(d)",
        json!({ "dim": d, "trials": trials, "seed": seed }),
        results,
        seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// One acceptance criterion as a self-contained report. Indices follow the
/// acceptance suite ordering.
pub fn criterion_report(index: usize, seed: u64) -> Result<ExperimentReport> {
    match index {
        1 => {
            let start = Instant::now();
            let mut results = Vec::new();
            for qubits in 1..=3usize {
                let sub = swap_test_report(qubits, 200, 1e-12, derive_seed(seed, qubits as u64))?;
                results.extend(sub.results);
            }
            Ok(ExperimentReport::new(
                "acceptance-1-swap-test",
                "acceptance = 1/2 + tr(rho sigma)/2 at 1..3 qubits",
                json!({ "trials": 200, "qubits": [1, 2, 3], "tolerance": 1e-12, "seed": seed }),
                results,
                seed,
                start.elapsed().as_secs_f64(),
            ))
        }
        2 => {
            let mut report = fidelity_lemmas_report(1000, seed)?;
            report.subcommand = "acceptance-2-fidelity".into();
            Ok(report)
        }
        3 => {
            let (mut report, _) = reduce_report(None, 0.05, 0.6, true, 32, seed)?;
            report.subcommand = "acceptance-3-reduction".into();
            Ok(report)
        }
        4 => {
            let start = Instant::now();
            let mut results = Vec::new();

            let v = random_verifier(1, &[1, 1, 1], derive_seed(seed, 4))?;
            let direct = reduce_3_to_2(&v)?;
            let general = reduce_3kr_to_2kr(&v, 1, 0)?;
            let m_direct = acceptance_operator(&direct)?;
            let m_general = acceptance_operator(&general)?;
            results.push(CheckResult::within(
                "general reduction at k=1, r=0 equals the direct construction",
                m_direct.matrix().max_abs_diff(m_general.matrix()),
                0.0,
                1e-12,
            ));

            let toy = toy_peak_verifier(4, 0.9)?;
            let w = reduce_3kr_to_2kr(&toy, 1, 1)?;
            let zero = PureState::zero(RegisterLayout::single("m", 1)?)?;
            let one = PureState::basis(RegisterLayout::single("m", 1)?, 1)?;
            let pair_layout = RegisterLayout::single("m", 2)?;
            let pair = |a: &PureState, b: &PureState| -> Result<PureState> {
                PureState::new(
                    pair_layout.clone(),
                    linalg::tensor_vec(a.amplitudes(), b.amplitudes()),
                )
            };
            // Arbitrary proofs elsewhere: the ancilla check alone must kill
            // the acceptance.
            let rand1 = haar_random_pure(&RegisterLayout::single("m", 2)?, derive_seed(seed, 41))?;
            let rand2 = haar_random_pure(&RegisterLayout::single("m", 2)?, derive_seed(seed, 42))?;
            let rand3 = haar_random_pure(&RegisterLayout::single("m", 1)?, derive_seed(seed, 43))?;
            let bad = ProofTuple::new(vec![rand1, rand2, pair(&rand3, &one)?]);
            results.push(CheckResult::at_most(
                "ancilla qubit in |1> forces rejection with certainty",
                accept_probability(&w, &bad)?,
                0.0,
                1e-12,
            ));
            let honest = honest_reduced_proofs(&vec![zero.clone(); 4], 1, 1)?;
            results.push(CheckResult::within(
                "honest tuple with zero ancilla keeps the 1/2 + p/2 identity",
                accept_probability(&w, &ProofTuple::new(honest))?,
                0.5 + 0.9 / 2.0,
                1e-12,
            ));

            Ok(ExperimentReport::new(
                "acceptance-4-general-reduction",
                "3k+r to 2k+r wiring specializes to 3 to 2 and enforces the ancilla check",
                json!({ "seed": seed }),
                results,
                seed,
                start.elapsed().as_secs_f64(),
            ))
        }
        5 => {
            let start = Instant::now();
            let params = SystemParams::new(1, 2.0 / 3.0, 1.0 / 3.0)?.with_gap_witness(3);
            let amp = amplify(&params, 3, 10)?;
            let mut results = vec![
                CheckResult::within("N = 180", amp.n_attempts as f64, 180.0, 0.0),
                CheckResult::within("T = 90", amp.threshold as f64, 90.0, 0.0),
                CheckResult::within(
                    "completeness bound 1 - 2^-10",
                    amp.completeness,
                    1.0 - 0.5_f64.powi(10),
                    0.0,
                ),
                CheckResult::within("soundness bound 2/3", amp.soundness, 2.0 / 3.0, 1e-12),
                CheckResult::at_least(
                    "honest binomial tail at p = 2/3 meets the completeness bound",
                    amplified_accept_honest(2.0 / 3.0, &amp),
                    amp.completeness,
                    0.0,
                ),
            ];
            let sub = amplify_report(2.0 / 3.0, 1.0 / 3.0, 3, 10, seed)?;
            results.extend(
                sub.results
                    .into_iter()
                    .filter(|c| c.name.contains("attempt circuit")),
            );
            Ok(ExperimentReport::new(
                "acceptance-5-amplification",
                "(c,s,q,p) = (2/3, 1/3, 3, 10): N = 180, T = 90, bounds 1-2^-10 and 2/3",
                json!({ "c": 2.0 / 3.0, "s": 1.0 / 3.0, "gap_q": 3, "target_p": 10, "seed": seed }),
                results,
                seed,
                start.elapsed().as_secs_f64(),
            ))
        }
        6 => {
            let start = Instant::now();
            let mut results = Vec::new();
            let (concat, _) = concat_report(None, derive_seed(seed, 6))?;
            results.extend(concat.results);
            let nqp = nqp_report(None, 50, derive_seed(seed, 66))?;
            results.extend(nqp.results);
            Ok(ExperimentReport::new(
                "acceptance-6-perfect-soundness",
                "concatenation preserves M; uniform-proof acceptance is tr(M)/2^q",
                json!({ "trials": 50, "seed": seed }),
                results,
                seed,
                start.elapsed().as_secs_f64(),
            ))
        }
        7 => {
            let start = Instant::now();
            let mut results = Vec::new();
            for d in [2usize, 4] {
                let sub = indist_report(d, 100, derive_seed(seed, d as u64))?;
                results.extend(sub.results.into_iter().map(|mut c| {
                    c.name = format!("d={d}: {}", c.name);
                    c
                }));
            }
            Ok(ExperimentReport::new(
                "acceptance-7-indistinguishability",
                "mixtures equal I/d^2; product fidelity floor 1/sqrt(d)",
                json!({ "dims": [2, 4], "trials": 100, "seed": seed }),
                results,
                seed,
                start.elapsed().as_secs_f64(),
            ))
        }
        8 => {
            let mut report = optimize_report(&[2, 3], 200, 4, seed)?;
            report.subcommand = "acceptance-8-optimizer".into();
            Ok(report)
        }
        _ => Err(Error::Index(format!("no acceptance criterion {index}"))),
    }
}

/// Run the full acceptance suite.
pub fn run_all(seed: u64) -> Result<Vec<ExperimentReport>> {
    (1..=8).map(|i| criterion_report(i, seed)).collect()
}
