//! Verifier-to-verifier compilers: the controlled-swap test, parallel
//! repetition, the 3 → 2 and (3k+r) → (2k+r) proof-count reductions, the
//! reduction chain, proof concatenation, and the uniform-proof
//! nondeterministic simulation.
//!
//! Constructed verifiers are explicit unitary matrices assembled from gates
//! embedded by register. The uniform choice between the two reduction tests
//! is realized coherently: a fresh selector qubit is prepared with a
//! Hadamard, both test branches act controlled on it, and a final basis
//! permutation writes the per-branch accept predicate into a fresh output
//! qubit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, apply_embedded_left, apply_embedded_right, apply_embedded_to_vec,
    apply_permutation_left, bit_at, embed, hadamard, mask_at, ComplexMatrix, RegisterLayout, C64,
    DENSE_AMPLITUDE_BUDGET,
};
use crate::states::{DensityOperator, PureState};
use crate::verifier::{SystemParams, Verifier};

/// Acceptance below this threshold counts as a zero-probability verdict.
pub const ZERO_VERDICT_TOL: f64 = 1e-12;

fn check_qubit_budget(total_qubits: usize) -> Result<()> {
    let amplitudes = 1u128 << (2 * total_qubits as u128);
    if amplitudes > DENSE_AMPLITUDE_BUDGET {
        return Err(Error::SizeLimit { amplitudes, budget: DENSE_AMPLITUDE_BUDGET });
    }
    Ok(())
}

/// Two-proof verifier implementing the controlled-swap test on n-qubit
/// proofs: Hadamard on the control, controlled swap of the two proof
/// registers, Hadamard again, accept iff the control reads 0. A final X on
/// the control makes "accept" the |1⟩ outcome of the output qubit.
pub fn swap_test_verifier(n_qubits: usize) -> Result<Verifier> {
    if n_qubits == 0 {
        return Err(Error::Shape("swap test needs at least one qubit per proof".into()));
    }
    let total = 1 + 2 * n_qubits;
    check_qubit_budget(total)?;
    let layout = RegisterLayout::new(vec![
        ("b".into(), 1),
        ("r1".into(), n_qubits),
        ("r2".into(), n_qubits),
    ])?;
    let r1 = layout.qubit_positions("r1")?;
    let r2 = layout.qubit_positions("r2")?;
    let b = layout.qubit_offset("b")?;

    let mut circuit = embed(&hadamard(), &layout, &["b"])?;
    let cswap = swap_blocks_permutation(total, b, &r1, &r2);
    circuit = apply_permutation_left(&cswap, &circuit)?;
    circuit = apply_embedded_left(&hadamard(), &layout, &["b"], &circuit)?;
    circuit = apply_embedded_left(&linalg::pauli_x(), &layout, &["b"], &circuit)?;
    Verifier::new(circuit, layout, 0, vec!["r1".into(), "r2".into()])
}

/// Exact swap-test acceptance 1/2 + tr(rho sigma)/2.
pub fn swap_test_analytic(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.layout() != sigma.layout() {
        return Err(Error::Layout("swap test needs matching layouts".into()));
    }
    let overlap = rho.matrix().trace_product(sigma.matrix())?.re;
    Ok(0.5 + 0.5 * overlap)
}

/// Basis permutation swapping two equal-length qubit blocks when the control
/// qubit is 1.
fn swap_blocks_permutation(
    total_qubits: usize,
    control: usize,
    block_a: &[usize],
    block_b: &[usize],
) -> Vec<usize> {
    debug_assert_eq!(block_a.len(), block_b.len());
    (0..1usize << total_qubits)
        .map(|x| {
            if bit_at(x, control, total_qubits) == 0 {
                return x;
            }
            let mut y = x;
            for (&pa, &pb) in block_a.iter().zip(block_b) {
                if bit_at(x, pa, total_qubits) != bit_at(x, pb, total_qubits) {
                    y ^= mask_at(pa, total_qubits) | mask_at(pb, total_qubits);
                }
            }
            y
        })
        .collect()
}

/// Parameters of the N-attempt parallel repetition with threshold count T.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplifiedParams {
    /// N = 2 p q^2 parallel attempts.
    pub n_attempts: u64,
    /// Accept iff at least T attempts accept; T = ceil(N (c+s)/2).
    pub threshold: u64,
    /// New completeness bound 1 - 2^-p.
    pub completeness: f64,
    /// New soundness bound 2s/(c+s).
    pub soundness: f64,
    /// The weaker chained soundness bound 1 - (c-s)/2.
    pub gap_soundness_bound: f64,
}

/// Amplification bookkeeping: N = 2 p q^2 parallel attempts accepted iff at
/// least a (c+s)/2 fraction accept, giving completeness 1 - 2^-p and
/// soundness 2s/(c+s) <= 1 - (c-s)/2.
pub fn amplify(params: &SystemParams, gap_q: u64, target_p: u32) -> Result<AmplifiedParams> {
    if gap_q == 0 {
        return Err(Error::Hypothesis("gap witness q must be positive".into()));
    }
    let gap = params.c - params.s;
    if gap + 1e-12 < 1.0 / gap_q as f64 {
        return Err(Error::Hypothesis(format!(
            "need c - s >= 1/q; got gap {gap} with q = {gap_q}"
        )));
    }
    let n_attempts = 2 * target_p as u64 * gap_q * gap_q;
    // T is the least integer at or above N (c+s)/2; the epsilon guards
    // against float noise pushing an exact integer up by one.
    let exact = n_attempts as f64 * (params.c + params.s) / 2.0;
    let threshold = (exact - 1e-9).ceil().max(0.0) as u64;
    let completeness = 1.0 - 0.5_f64.powi(target_p as i32);
    let soundness = if params.c + params.s > 0.0 {
        2.0 * params.s / (params.c + params.s)
    } else {
        0.0
    };
    Ok(AmplifiedParams {
        n_attempts,
        threshold,
        completeness,
        soundness,
        gap_soundness_bound: 1.0 - gap / 2.0,
    })
}

/// P[X >= t] for X ~ Binomial(n, p), accumulated in log space.
pub fn binomial_tail(n: u64, t: u64, p: f64) -> f64 {
    if t == 0 {
        return 1.0;
    }
    if t > n {
        return 0.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let lp = p.ln();
    let lq = (1.0 - p).ln();
    // ln C(n, t) built incrementally.
    let mut ln_choose = 0.0;
    for j in 0..t {
        ln_choose += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
    }
    let mut acc = 0.0;
    for j in t..=n {
        acc += (ln_choose + j as f64 * lp + (n - j) as f64 * lq).exp();
        if j < n {
            ln_choose += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
        }
    }
    acc.min(1.0)
}

/// Exact acceptance of the amplified protocol with i.i.d. honest attempts
/// accepted with probability `per_attempt_p` each.
pub fn amplified_accept_honest(per_attempt_p: f64, amp: &AmplifiedParams) -> f64 {
    binomial_tail(amp.n_attempts, amp.threshold, per_attempt_p.clamp(0.0, 1.0))
}

/// Materialize n parallel attempts of a verifier with acceptance iff at
/// least `threshold` attempts accept. Intended for small n cross-checks of
/// the binomial arithmetic.
pub fn repeat_verifier(v: &Verifier, n: usize, threshold: usize) -> Result<Verifier> {
    if n == 0 {
        return Err(Error::Shape("need at least one attempt".into()));
    }
    let q_v = v.work_qubits();
    let q_m = v.proof_qubits();
    let k = v.proof_count();
    let total = n * q_v + 1 + n * k * q_m;
    check_qubit_budget(total)?;

    let mut registers: Vec<(String, usize)> = (0..n).map(|a| (format!("w{}", a + 1), q_v)).collect();
    registers.push(("out".into(), 1));
    let mut proof_names = Vec::new();
    for a in 0..n {
        for i in 0..k {
            let name = format!("a{}_p{}", a + 1, i + 1);
            registers.push((name.clone(), q_m));
            proof_names.push(name);
        }
    }
    let fine = RegisterLayout::new(registers)?;

    let mut circuit = ComplexMatrix::identity(fine.dim())?;
    for a in 0..n {
        let mut targets = vec![format!("w{}", a + 1)];
        targets.extend((0..k).map(|i| format!("a{}_p{}", a + 1, i + 1)));
        let target_refs: Vec<&str> = targets.iter().map(|s| s.as_str()).collect();
        circuit = apply_embedded_left(v.circuit(), &fine, &target_refs, &circuit)?;
    }

    let out_positions: Vec<usize> = (0..n)
        .map(|a| {
            let offset = fine.qubit_offset(&format!("w{}", a + 1)).expect("register exists");
            offset + v.output_qubit()
        })
        .collect();
    let o_pos = fine.qubit_offset("out")?;
    let nq = fine.total_qubits();
    let perm: Vec<usize> = (0..fine.dim())
        .map(|x| {
            let accepted = out_positions.iter().filter(|&&p| bit_at(x, p, nq) == 1).count();
            if accepted >= threshold {
                x ^ mask_at(o_pos, nq)
            } else {
                x
            }
        })
        .collect();
    let circuit = apply_permutation_left(&perm, &circuit)?;

    let mut coarse = vec![("work".to_string(), n * q_v + 1)];
    coarse.extend(proof_names.iter().map(|n| (n.clone(), q_m)));
    let layout = RegisterLayout::new(coarse)?;
    Verifier::new(circuit, layout, n * q_v, proof_names)
}

/// Fig-2-style reduction: a 3-proof verifier becomes a 2-proof verifier
/// whose proofs carry (R_i, S_i) pairs; a coherent coin chooses between the
/// swap test on (S_1, S_2) and running the original verifier on
/// (V, R_1, R_2, S_1).
pub fn reduce_3_to_2(v: &Verifier) -> Result<Verifier> {
    if v.proof_count() != 3 {
        return Err(Error::Shape(format!(
            "reduction expects exactly 3 proof registers, found {}",
            v.proof_count()
        )));
    }
    reduce_3kr_to_2kr(v, 1, 0)
}

/// Fig-3-style reduction from 3k+r proofs to 2k+r proofs of twice the size.
///
/// New proof register (i, j) holds the pair (R_{i,j}, S_{i,j}); third-group
/// proofs carry ancilla halves S_{3,j} that must read all-zero, enforced by
/// the accept predicate. The original circuit consumes registers in the
/// order (V, R_{1,*}, R_{2,*}, S_{1,*}, R_{3,*}).
pub fn reduce_3kr_to_2kr(v: &Verifier, k: usize, r: usize) -> Result<Verifier> {
    if r > 2 {
        return Err(Error::Shape(format!("r must be in 0..=2, got {r}")));
    }
    if k == 0 {
        return Err(Error::Shape("k must be at least 1".into()));
    }
    if v.proof_count() != 3 * k + r {
        return Err(Error::Shape(format!(
            "verifier has {} proof registers, expected 3k+r = {}",
            v.proof_count(),
            3 * k + r
        )));
    }
    let q_v = v.work_qubits();
    let q_m = v.proof_qubits();
    let new_proofs = 2 * k + r;
    let total = q_v + 3 + new_proofs * 2 * q_m;
    check_qubit_budget(total)?;

    // Fine layout: original work block, swap control, test selector, output,
    // then (R, S) halves per new proof in group order 1, 2, 3.
    let mut registers = vec![
        ("v".to_string(), q_v),
        ("b".to_string(), 1),
        ("t".to_string(), 1),
        ("o".to_string(), 1),
    ];
    let group = |g: usize, count: usize, registers: &mut Vec<(String, usize)>| {
        for j in 1..=count {
            registers.push((format!("r{g}_{j}"), q_m));
            registers.push((format!("s{g}_{j}"), q_m));
        }
    };
    group(1, k, &mut registers);
    group(2, k, &mut registers);
    group(3, r, &mut registers);
    let fine = RegisterLayout::new(registers)?;
    let nq = fine.total_qubits();

    let s1_positions = {
        let names: Vec<String> = (1..=k).map(|j| format!("s1_{j}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        fine.qubit_positions_of(&refs)?
    };
    let s2_positions = {
        let names: Vec<String> = (1..=k).map(|j| format!("s2_{j}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        fine.qubit_positions_of(&refs)?
    };
    let s3_positions = {
        let names: Vec<String> = (1..=r).map(|j| format!("s3_{j}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        fine.qubit_positions_of(&refs)?
    };
    let b_pos = fine.qubit_offset("b")?;
    let t_pos = fine.qubit_offset("t")?;
    let o_pos = fine.qubit_offset("o")?;
    // Original work block sits first, so its output qubit keeps its position.
    let orig_out_pos = v.output_qubit();

    // Separability branch: swap test on the concatenated S blocks.
    let mut u_sep = embed(&hadamard(), &fine, &["b"])?;
    let cswap = swap_blocks_permutation(nq, b_pos, &s1_positions, &s2_positions);
    u_sep = apply_permutation_left(&cswap, &u_sep)?;
    u_sep = apply_embedded_left(&hadamard(), &fine, &["b"], &u_sep)?;

    // Consistency branch: the original circuit on (V, R1*, R2*, S1*, R3*).
    let mut cons_targets: Vec<String> = vec!["v".to_string()];
    cons_targets.extend((1..=k).map(|j| format!("r1_{j}")));
    cons_targets.extend((1..=k).map(|j| format!("r2_{j}")));
    cons_targets.extend((1..=k).map(|j| format!("s1_{j}")));
    cons_targets.extend((1..=r).map(|j| format!("r3_{j}")));
    let cons_refs: Vec<&str> = cons_targets.iter().map(|s| s.as_str()).collect();
    let u_cons = embed(v.circuit(), &fine, &cons_refs)?;

    // Branch selection: neither branch touches the selector, so masking rows
    // by the selector bit yields |0⟩⟨0|_t ⊗ U_sep + |1⟩⟨1|_t ⊗ U_cons.
    let d = fine.dim();
    let mut select = ComplexMatrix::zeros(d, d)?;
    for i in 0..d {
        let source = if bit_at(i, t_pos, nq) == 0 { &u_sep } else { &u_cons };
        for j in 0..d {
            select.set(i, j, source.get(i, j));
        }
    }
    drop(u_sep);
    drop(u_cons);

    // Coin first, then the selected branch.
    let circuit = apply_embedded_right(&select, &hadamard(), &fine, &["t"])?;

    // Accept predicate into the fresh output qubit: ancilla halves all zero,
    // and (selector 0 and swap control 0) or (selector 1 and original output 1).
    let merge: Vec<usize> = (0..d)
        .map(|x| {
            let ancilla_ok = s3_positions.iter().all(|&p| bit_at(x, p, nq) == 0);
            let branch_ok = if bit_at(x, t_pos, nq) == 0 {
                bit_at(x, b_pos, nq) == 0
            } else {
                bit_at(x, orig_out_pos, nq) == 1
            };
            if ancilla_ok && branch_ok {
                x ^ mask_at(o_pos, nq)
            } else {
                x
            }
        })
        .collect();
    let circuit = apply_permutation_left(&merge, &circuit)?;

    // Coarsen: one work register (V, B, T, O), one register per proof pair.
    let mut coarse = vec![("work".to_string(), q_v + 3)];
    let mut proof_names = Vec::new();
    for i in 1..=new_proofs {
        let name = format!("p{i}");
        coarse.push((name.clone(), 2 * q_m));
        proof_names.push(name);
    }
    let layout = RegisterLayout::new(coarse)?;
    Verifier::new(circuit, layout, q_v + 2, proof_names)
}

/// Honest proofs for a reduced verifier, built from the original tuple:
/// the (1, j) proof carries (phi_j, phi_2k+j), the (2, j) proof carries
/// (phi_k+j, phi_2k+j), and the (3, j) proof carries (phi_3k+j, |0...0⟩).
pub fn honest_reduced_proofs(originals: &[PureState], k: usize, r: usize) -> Result<Vec<PureState>> {
    if originals.len() != 3 * k + r {
        return Err(Error::Compatibility(format!(
            "need 3k+r = {} original proofs, got {}",
            3 * k + r,
            originals.len()
        )));
    }
    let q_m = originals[0].total_qubits();
    if originals.iter().any(|p| p.total_qubits() != q_m) {
        return Err(Error::Compatibility("original proofs must have equal sizes".into()));
    }
    let pair_layout = RegisterLayout::single("m", 2 * q_m)?;
    let pair = |a: &PureState, b: &PureState| -> Result<PureState> {
        PureState::new(pair_layout.clone(), linalg::tensor_vec(a.amplitudes(), b.amplitudes()))
    };
    let mut proofs = Vec::with_capacity(2 * k + r);
    for j in 0..k {
        proofs.push(pair(&originals[j], &originals[2 * k + j])?);
    }
    for j in 0..k {
        proofs.push(pair(&originals[k + j], &originals[2 * k + j])?);
    }
    let zero = PureState::zero(RegisterLayout::single("z", q_m)?)?;
    for j in 0..r {
        proofs.push(pair(&originals[3 * k + j], &zero)?);
    }
    Ok(proofs)
}

/// Per-stage parameter arithmetic of the reduction chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageParams {
    pub input_proofs: usize,
    pub output_proofs: usize,
    pub epsilon_in: f64,
    pub delta_in: f64,
    pub epsilon_out: f64,
    pub delta_out: f64,
}

/// A materialized reduction stage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionReport {
    pub stage: StageParams,
    pub constructed: Verifier,
}

/// Outcome of the full reduction chain.
#[derive(Clone, Debug)]
pub struct ChainOutcome {
    pub verifier: Verifier,
    pub amplified: AmplifiedParams,
    pub stages: Vec<ReductionReport>,
    pub final_epsilon: f64,
    pub final_delta: f64,
}

fn stage_split(proofs: usize) -> (usize, usize) {
    (proofs / 3, proofs % 3)
}

/// Parameter-only ledger of the chain from k proofs down to 2, starting at
/// completeness 1 - epsilon and soundness 1 - delta. Each stage halves
/// epsilon and divides delta by 20, and requires delta > 10 epsilon on entry.
pub fn chain_schedule(k: usize, epsilon: f64, delta: f64) -> Result<Vec<StageParams>> {
    if k < 2 {
        return Err(Error::Shape("chain needs at least 2 proofs".into()));
    }
    let mut stages = Vec::new();
    let mut proofs = k;
    let mut eps = epsilon;
    let mut del = delta;
    while proofs > 2 {
        if del <= 10.0 * eps {
            return Err(Error::Hypothesis(format!(
                "stage {} needs delta > 10 epsilon; got delta = {del}, epsilon = {eps}",
                stages.len() + 1
            )));
        }
        let (inner_k, r) = stage_split(proofs);
        let output = 2 * inner_k + r;
        stages.push(StageParams {
            input_proofs: proofs,
            output_proofs: output,
            epsilon_in: eps,
            delta_in: del,
            epsilon_out: eps / 2.0,
            delta_out: del / 20.0,
        });
        proofs = output;
        eps /= 2.0;
        del /= 20.0;
    }
    Ok(stages)
}

/// Apply amplification bookkeeping, then materialize reduction stages until
/// two proofs remain. Errors with the stage index if a stage would exceed
/// the dense budget.
pub fn reduce_chain(
    v: &Verifier,
    params: &SystemParams,
    gap_q: u64,
    target_p: u32,
) -> Result<ChainOutcome> {
    if v.proof_count() < 2 {
        return Err(Error::Shape("chain needs at least 2 proofs".into()));
    }
    let amplified = amplify(params, gap_q, target_p)?;
    let mut epsilon = 1.0 - amplified.completeness;
    let mut delta = 1.0 - amplified.gap_soundness_bound;
    let mut current = v.clone();
    let mut stages = Vec::new();
    while current.proof_count() > 2 {
        let stage_index = stages.len() + 1;
        if delta <= 10.0 * epsilon {
            return Err(Error::Hypothesis(format!(
                "stage {stage_index} needs delta > 10 epsilon; got delta = {delta}, epsilon = {epsilon}"
            )));
        }
        let (inner_k, r) = stage_split(current.proof_count());
        let next_total =
            current.work_qubits() + 3 + (2 * inner_k + r) * 2 * current.proof_qubits();
        if check_qubit_budget(next_total).is_err() {
            return Err(Error::SizeLimit {
                amplitudes: 1u128 << (2 * next_total as u128),
                budget: DENSE_AMPLITUDE_BUDGET,
            });
        }
        let constructed = reduce_3kr_to_2kr(&current, inner_k, r)?;
        stages.push(ReductionReport {
            stage: StageParams {
                input_proofs: current.proof_count(),
                output_proofs: constructed.proof_count(),
                epsilon_in: epsilon,
                delta_in: delta,
                epsilon_out: epsilon / 2.0,
                delta_out: delta / 20.0,
            },
            constructed: constructed.clone(),
        });
        current = constructed;
        epsilon /= 2.0;
        delta /= 20.0;
    }
    Ok(ChainOutcome { verifier: current, amplified, stages, final_epsilon: epsilon, final_delta: delta })
}

/// Relabel the k proof registers as one concatenated register. The circuit
/// matrix is unchanged, so the acceptance operator is preserved exactly.
pub fn concat_proofs(v: &Verifier) -> Result<Verifier> {
    let work = (v.work_register().to_string(), v.work_qubits());
    let layout = RegisterLayout::new(vec![
        work,
        ("proof".to_string(), v.joint_proof_qubits()),
    ])?;
    Verifier::new(v.circuit().clone(), layout, v.output_qubit(), vec!["proof".into()])
}

/// Outcome of the uniform-proof nondeterministic simulation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NqpOutcome {
    /// Exact circuit acceptance probability.
    pub acceptance: f64,
    /// True iff the acceptance probability is zero within 1e-12.
    pub zero_verdict: bool,
}

/// Replace the proof with a uniform superposition copied across two
/// registers: Hadamard every proof qubit, copy, run the verifier on the first
/// copy. The acceptance equals the average of the verifier's acceptance over
/// all computational-basis proofs, i.e. tr(M) / 2^q.
pub fn nqp_simulation(v: &Verifier) -> Result<NqpOutcome> {
    if v.proof_count() != 1 {
        return Err(Error::Shape(format!(
            "simulation expects a single proof register; apply concat_proofs first (found {})",
            v.proof_count()
        )));
    }
    let q_v = v.work_qubits();
    let q_m = v.proof_qubits();
    check_qubit_budget(q_v + 2 * q_m)?;
    let layout = RegisterLayout::new(vec![
        ("work".into(), q_v),
        ("s1".into(), q_m),
        ("s2".into(), q_m),
    ])?;
    let d = layout.dim();
    let proof_dim = 1usize << q_m;

    // State after the Hadamards and the copy: a uniform superposition of
    // |0_work⟩ |e⟩ |e⟩ over all basis proofs e.
    let scale = 1.0 / (proof_dim as f64).sqrt();
    let mut state = vec![C64::new(0.0, 0.0); d];
    for e in 0..proof_dim {
        state[e * proof_dim + e] = C64::new(scale, 0.0);
    }
    let state = apply_embedded_to_vec(v.circuit(), &layout, &["work", "s1"], &state)?;

    let nq = layout.total_qubits();
    let pos = v.output_qubit();
    let mut acceptance = 0.0;
    for (i, z) in state.iter().enumerate() {
        if bit_at(i, pos, nq) == 1 {
            acceptance += z.norm_sqr();
        }
    }
    let acceptance = acceptance.clamp(0.0, 1.0);
    Ok(NqpOutcome { acceptance, zero_verdict: acceptance <= ZERO_VERDICT_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        density_of, derive_seed, haar_random_pure, random_density,
    };
    use crate::verifier::{
        accept_probability, acceptance_operator, optimal_entangled_proof, ProofTuple,
    };

    fn qubit_state(seed: u64) -> PureState {
        haar_random_pure(&RegisterLayout::single("m", 1).unwrap(), seed).unwrap()
    }

    fn toy_three_proof_verifier(peak: f64) -> Verifier {
        // Acceptance operator peak * |000⟩⟨000| on three 1-qubit proofs.
        let mut m = ComplexMatrix::zeros(8, 8).unwrap();
        m.set(0, 0, C64::new(peak, 0.0));
        Verifier::with_acceptance_operator(
            &m,
            vec![("p1".into(), 1), ("p2".into(), 1), ("p3".into(), 1)],
        )
        .unwrap()
    }

    #[test]
    fn swap_test_accepts_identical_pure_proofs() {
        let v = swap_test_verifier(2).unwrap();
        let layout = RegisterLayout::single("m", 2).unwrap();
        let psi = haar_random_pure(&layout, 3).unwrap();
        let p = accept_probability(&v, &ProofTuple::new(vec![psi.clone(), psi])).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_test_on_orthogonal_basis_proofs_is_half() {
        let v = swap_test_verifier(2).unwrap();
        let layout = RegisterLayout::single("m", 2).unwrap();
        let zeros = PureState::basis(layout.clone(), 0).unwrap();
        let ones = PureState::basis(layout, 3).unwrap();
        let p = accept_probability(&v, &ProofTuple::new(vec![zeros, ones])).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn swap_test_circuit_matches_analytic_formula_on_mixed_inputs() {
        for n in 1..=2usize {
            let v = swap_test_verifier(n).unwrap();
            let layout = RegisterLayout::single("m", n).unwrap();
            for i in 0..20 {
                let d = 1 << n;
                let rho = random_density(&layout, 1 + (i as usize % d), derive_seed(70, i)).unwrap();
                let sigma = random_density(&layout, 1 + ((i + 1) as usize % d), derive_seed(71, i)).unwrap();
                let circuit =
                    crate::verifier::accept_probability_mixed(&v, &[rho.clone(), sigma.clone()])
                        .unwrap();
                let formula = swap_test_analytic(&rho, &sigma).unwrap();
                assert!((circuit - formula).abs() < 1e-12, "n={n} i={i}: {circuit} vs {formula}");
            }
        }
    }

    #[test]
    fn swap_test_rejects_oversized_registers() {
        assert!(matches!(swap_test_verifier(7), Err(Error::SizeLimit { .. })));
        assert!(matches!(swap_test_verifier(0), Err(Error::Shape(_))));
    }

    #[test]
    fn swap_test_analytic_rejects_layout_mismatch() {
        let rho = random_density(&RegisterLayout::single("m", 1).unwrap(), 1, 1).unwrap();
        let sigma = random_density(&RegisterLayout::single("n", 1).unwrap(), 1, 2).unwrap();
        assert!(matches!(swap_test_analytic(&rho, &sigma), Err(Error::Layout(_))));
    }

    #[test]
    fn reduction_rejects_wrong_proof_counts() {
        let v = Verifier::always_accept(2, 1).unwrap();
        assert!(matches!(reduce_3_to_2(&v), Err(Error::Shape(_))));
        assert!(matches!(reduce_3kr_to_2kr(&v, 1, 0), Err(Error::Shape(_))));
        let v3 = Verifier::always_accept(3, 1).unwrap();
        assert!(matches!(reduce_3kr_to_2kr(&v3, 1, 3), Err(Error::Shape(_))));
    }

    #[test]
    fn swap_test_analytic_trivial_values() {
        let layout = RegisterLayout::single("m", 1).unwrap();
        let psi = haar_random_pure(&layout, 5).unwrap();
        let rho = density_of(&psi);
        assert!((swap_test_analytic(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityOperator::new(
            layout,
            ComplexMatrix::diagonal(&[0.5, 0.5]).unwrap(),
        )
        .unwrap();
        assert!((swap_test_analytic(&mixed, &mixed).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn amplify_reproduces_reference_arithmetic() {
        let params = SystemParams::new(1, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        let amp = amplify(&params, 3, 10).unwrap();
        assert_eq!(amp.n_attempts, 180);
        assert_eq!(amp.threshold, 90);
        assert!((amp.completeness - (1.0 - 0.5_f64.powi(10))).abs() < 1e-15);
        assert!((amp.soundness - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn amplify_perfect_system_has_zero_soundness() {
        let params = SystemParams::new(1, 1.0, 0.0).unwrap();
        let amp = amplify(&params, 1, 1).unwrap();
        assert_eq!(amp.soundness, 0.0);
    }

    #[test]
    fn amplify_inequality_chain() {
        let params = SystemParams::new(1, 0.6, 0.4).unwrap();
        let amp = amplify(&params, 5, 3).unwrap();
        assert_eq!(amp.n_attempts, 150);
        assert!((amp.soundness - 0.8).abs() < 1e-12);
        assert!(amp.soundness <= amp.gap_soundness_bound + 1e-12);
        assert!((amp.gap_soundness_bound - 0.9).abs() < 1e-12);
        assert!(amp.gap_soundness_bound <= 1.0 - 1.0 / (2.0 * 5.0) + 1e-12);
    }

    #[test]
    fn amplify_rejects_gap_violation() {
        let params = SystemParams::new(1, 0.5, 0.45).unwrap();
        assert!(matches!(amplify(&params, 3, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn binomial_tail_edges_and_small_case() {
        let amp = AmplifiedParams {
            n_attempts: 2,
            threshold: 1,
            completeness: 0.0,
            soundness: 0.0,
            gap_soundness_bound: 0.0,
        };
        assert_eq!(amplified_accept_honest(1.0, &amp), 1.0);
        assert_eq!(amplified_accept_honest(0.0, &amp), 0.0);
        let p = amplified_accept_honest(2.0 / 3.0, &amp);
        assert!((p - 8.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn two_attempt_circuit_matches_binomial() {
        // One-proof toy accepted with probability 2/3 on the honest proof.
        let mut m = ComplexMatrix::zeros(2, 2).unwrap();
        m.set(0, 0, C64::new(2.0 / 3.0, 0.0));
        let v = Verifier::with_acceptance_operator(&m, vec![("p1".into(), 1)]).unwrap();
        let honest = PureState::basis(RegisterLayout::single("m", 1).unwrap(), 0).unwrap();

        for (n, t) in [(2usize, 1usize), (2, 2), (3, 2)] {
            let repeated = repeat_verifier(&v, n, t).unwrap();
            let proofs = ProofTuple::new(vec![honest.clone(); n]);
            let circuit_p = accept_probability(&repeated, &proofs).unwrap();
            let formula = binomial_tail(n as u64, t as u64, 2.0 / 3.0);
            assert!(
                (circuit_p - formula).abs() < 1e-10,
                "n={n} t={t}: {circuit_p} vs {formula}"
            );
        }
    }

    #[test]
    fn reduction_preserves_honest_acceptance_exactly() {
        let v = toy_three_proof_verifier(0.95);
        let w = reduce_3_to_2(&v).unwrap();
        let zero = PureState::basis(RegisterLayout::single("m", 1).unwrap(), 0).unwrap();
        let originals = vec![zero.clone(), zero.clone(), zero];
        let honest = accept_probability(&v, &ProofTuple::new(originals.clone())).unwrap();
        assert!((honest - 0.95).abs() < 1e-12);
        let reduced_proofs = honest_reduced_proofs(&originals, 1, 0).unwrap();
        let reduced_p = accept_probability(&w, &ProofTuple::new(reduced_proofs)).unwrap();
        assert!((reduced_p - (0.5 + honest / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn reduction_with_perfect_original_accepts_with_certainty() {
        let v = toy_three_proof_verifier(1.0);
        let w = reduce_3_to_2(&v).unwrap();
        let zero = PureState::basis(RegisterLayout::single("m", 1).unwrap(), 0).unwrap();
        let reduced = honest_reduced_proofs(&[zero.clone(), zero.clone(), zero], 1, 0).unwrap();
        let p = accept_probability(&w, &ProofTuple::new(reduced)).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduction_honest_acceptance_with_random_proofs() {
        // The 1/2 + p/2 identity holds for arbitrary honest product tuples.
        let v = crate::experiments::random_verifier(1, &[1, 1, 1], 91).unwrap();
        let w = reduce_3_to_2(&v).unwrap();
        for i in 0..10 {
            let originals = vec![
                qubit_state(derive_seed(92, i)),
                qubit_state(derive_seed(93, i)),
                qubit_state(derive_seed(94, i)),
            ];
            let p = accept_probability(&v, &ProofTuple::new(originals.clone())).unwrap();
            let reduced = honest_reduced_proofs(&originals, 1, 0).unwrap();
            let q = accept_probability(&w, &ProofTuple::new(reduced)).unwrap();
            assert!((q - (0.5 + p / 2.0)).abs() < 1e-12, "case {i}: {q} vs {}", 0.5 + p / 2.0);
        }
    }

    #[test]
    fn general_reduction_specializes_to_three_to_two() {
        let v = crate::experiments::random_verifier(1, &[1, 1, 1], 95).unwrap();
        let direct = reduce_3_to_2(&v).unwrap();
        let general = reduce_3kr_to_2kr(&v, 1, 0).unwrap();
        let m_direct = acceptance_operator(&direct).unwrap();
        let m_general = acceptance_operator(&general).unwrap();
        assert!(m_direct.matrix().max_abs_diff(m_general.matrix()) < 1e-12);
    }

    #[test]
    fn ancilla_in_one_state_forces_rejection() {
        // k=1, r=1: four 1-qubit proofs.
        let mut m = ComplexMatrix::zeros(16, 16).unwrap();
        m.set(0, 0, C64::new(0.9, 0.0));
        let v = Verifier::with_acceptance_operator(
            &m,
            (1..=4).map(|i| (format!("p{i}"), 1)).collect(),
        )
        .unwrap();
        let w = reduce_3kr_to_2kr(&v, 1, 1).unwrap();
        assert_eq!(w.proof_count(), 3);
        assert_eq!(w.proof_qubits(), 2);

        let zero = PureState::basis(RegisterLayout::single("m", 1).unwrap(), 0).unwrap();
        let one = PureState::basis(RegisterLayout::single("m", 1).unwrap(), 1).unwrap();
        let pair_layout = RegisterLayout::single("m", 2).unwrap();
        let pair = |a: &PureState, b: &PureState| {
            PureState::new(
                pair_layout.clone(),
                linalg::tensor_vec(a.amplitudes(), b.amplitudes()),
            )
            .unwrap()
        };
        // Third proof carries |phi_4⟩ ⊗ |1⟩: the ancilla check must fire.
        let bad = ProofTuple::new(vec![
            pair(&zero, &zero),
            pair(&zero, &zero),
            pair(&zero, &one),
        ]);
        let p = accept_probability(&w, &bad).unwrap();
        assert!(p <= 1e-12, "acceptance {p}");

        // With the ancilla in |0⟩ the honest bound holds.
        let honest = honest_reduced_proofs(&[zero.clone(), zero.clone(), zero.clone(), zero], 1, 1)
            .unwrap();
        let p = accept_probability(&w, &ProofTuple::new(honest)).unwrap();
        assert!((p - (0.5 + 0.9 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn chain_schedule_composes_stage_arithmetic() {
        // Two stages of the bound: epsilon quarters, delta divides by 400.
        let stages = chain_schedule(9, 1e-6, 0.3).unwrap();
        assert_eq!(stages[0].input_proofs, 9);
        assert_eq!(stages[0].output_proofs, 6);
        assert_eq!(stages[1].output_proofs, 4);
        assert!((stages[1].epsilon_out - 1e-6 / 4.0).abs() < 1e-18);
        assert!((stages[1].delta_out - 0.3 / 400.0).abs() < 1e-15);
        // The full chain continues to two proofs.
        assert_eq!(stages.last().unwrap().output_proofs, 2);
        assert_eq!(stages.len(), 4);
    }

    #[test]
    fn chain_schedule_rejects_insufficient_gap() {
        assert!(matches!(chain_schedule(3, 0.05, 0.3), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn reduce_chain_with_two_proofs_is_bookkeeping_only() {
        let v = Verifier::always_accept(2, 1).unwrap();
        let params = SystemParams::new(2, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        let outcome = reduce_chain(&v, &params, 3, 10).unwrap();
        assert!(outcome.stages.is_empty());
        assert_eq!(outcome.verifier.proof_count(), 2);
        assert!((outcome.final_epsilon - 0.5_f64.powi(10)).abs() < 1e-15);
        assert!((outcome.final_delta - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_chain_materializes_single_stage() {
        let v = toy_three_proof_verifier(0.95);
        let params = SystemParams::new(3, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        let outcome = reduce_chain(&v, &params, 3, 10).unwrap();
        assert_eq!(outcome.stages.len(), 1);
        assert_eq!(outcome.verifier.proof_count(), 2);
        let stage = &outcome.stages[0].stage;
        assert!((stage.epsilon_out - stage.epsilon_in / 2.0).abs() < 1e-18);
        assert!((stage.delta_out - stage.delta_in / 20.0).abs() < 1e-15);
    }

    #[test]
    fn reduce_chain_reports_budget_overflow_stage() {
        // Nine 1-qubit proofs: the first stage already exceeds the budget.
        let dim = 1 << 9;
        let m = ComplexMatrix::zeros(dim, dim).unwrap();
        let v = Verifier::with_acceptance_operator(
            &m,
            (1..=9).map(|i| (format!("p{i}"), 1)).collect(),
        )
        .unwrap();
        let params = SystemParams::new(9, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!(matches!(
            reduce_chain(&v, &params, 3, 20),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn concat_preserves_acceptance_operator() {
        let v = crate::experiments::random_verifier(1, &[1, 1], 101).unwrap();
        let w = concat_proofs(&v).unwrap();
        assert_eq!(w.proof_count(), 1);
        assert_eq!(w.proof_qubits(), 2);
        let mv = acceptance_operator(&v).unwrap();
        let mw = acceptance_operator(&w).unwrap();
        assert!(mv.matrix().max_abs_diff(mw.matrix()) < 1e-14);

        // Direct simulation both ways on an honest product tuple.
        let a = qubit_state(102);
        let b = qubit_state(103);
        let p = accept_probability(&v, &ProofTuple::new(vec![a.clone(), b.clone()])).unwrap();
        let joint = PureState::new(
            RegisterLayout::single("m", 2).unwrap(),
            linalg::tensor_vec(a.amplitudes(), b.amplitudes()),
        )
        .unwrap();
        let q = accept_probability(&w, &ProofTuple::new(vec![joint])).unwrap();
        assert!((p - q).abs() < 1e-14);
    }

    #[test]
    fn concat_preserves_perfect_soundness() {
        let v = Verifier::always_reject(3, 1).unwrap();
        let w = concat_proofs(&v).unwrap();
        let (value, _) = optimal_entangled_proof(&w).unwrap();
        assert!(value < 1e-12);
    }

    #[test]
    fn nqp_simulation_trivial_cases() {
        let reject = concat_proofs(&Verifier::always_reject(2, 1).unwrap()).unwrap();
        let outcome = nqp_simulation(&reject).unwrap();
        assert!(outcome.acceptance <= 1e-15);
        assert!(outcome.zero_verdict);

        let accept = concat_proofs(&Verifier::always_accept(2, 1).unwrap()).unwrap();
        let outcome = nqp_simulation(&accept).unwrap();
        assert!((outcome.acceptance - 1.0).abs() < 1e-12);
        assert!(!outcome.zero_verdict);
    }

    #[test]
    fn nqp_acceptance_equals_operator_trace_average() {
        for i in 0..10 {
            let v = crate::experiments::random_verifier(1, &[2], derive_seed(110, i)).unwrap();
            let outcome = nqp_simulation(&v).unwrap();
            let m = acceptance_operator(&v).unwrap();
            let expected = m.matrix().trace().re / 4.0;
            assert!((outcome.acceptance - expected).abs() < 1e-12, "case {i}");
            let lam = m.lambda_max().unwrap();
            assert_eq!(outcome.zero_verdict, lam <= 1e-12);
        }
    }

    #[test]
    fn nqp_rejects_multi_proof_verifier() {
        let v = Verifier::always_accept(2, 1).unwrap();
        assert!(matches!(nqp_simulation(&v), Err(Error::Shape(_))));
    }

    #[test]
    fn constructed_verifiers_have_valid_acceptance_spectra() {
        let v = toy_three_proof_verifier(0.95);
        for w in [swap_test_verifier(1).unwrap(), reduce_3_to_2(&v).unwrap()] {
            let m = acceptance_operator(&w).unwrap();
            let eig = crate::linalg::eig_hermitian(&m.matrix().hermitized()).unwrap();
            assert!(eig.values.iter().all(|&x| (-1e-10..=1.0 + 1e-10).contains(&x)));
        }
    }
}
