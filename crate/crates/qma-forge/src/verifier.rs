//! The executable k-proof verifier model: a unitary circuit over one work
//! register and k equal-size proof registers, with a designated output qubit.
//!
//! Acceptance of a proof tuple is the probability of observing |1⟩ on the
//! output qubit after applying the circuit to |0_work⟩ ⊗ proofs. The same
//! quantity in operator form is the quadratic form of the acceptance
//! operator M = (⟨0_work| ⊗ I) U† Π U (|0_work⟩ ⊗ I) on the joint proof
//! space; provers optimize against M.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, eig_hermitian, psd_sqrt, ComplexMatrix, RegisterLayout, C64, CONTRACT_TOL,
};
use crate::states::{DensityOperator, PureState};

/// Slack allowed on acceptance-operator eigenvalues around [0, 1].
pub const ACCEPTANCE_EIGENVALUE_TOL: f64 = 1e-10;

/// Threshold parameters of a k-proof system.
///
/// `gap_q` optionally witnesses c - s >= 1/q for amplification arithmetic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemParams {
    pub k: usize,
    pub c: f64,
    pub s: f64,
    pub gap_q: Option<u64>,
}

impl SystemParams {
    pub fn new(k: usize, c: f64, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) || !(0.0..=1.0).contains(&s) {
            return Err(Error::Hypothesis(format!(
                "thresholds must lie in [0, 1], got c={c}, s={s}"
            )));
        }
        Ok(Self { k, c, s, gap_q: None })
    }

    pub fn with_gap_witness(mut self, q: u64) -> Self {
        self.gap_q = Some(q);
        self
    }
}

/// Unitary circuit plus register bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "VerifierDto", into = "VerifierDto")]
pub struct Verifier {
    circuit: ComplexMatrix,
    layout: RegisterLayout,
    output_qubit: usize,
    proof_registers: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VerifierDto {
    circuit: ComplexMatrix,
    layout: RegisterLayout,
    output_qubit: usize,
    proof_registers: Vec<String>,
}

impl From<Verifier> for VerifierDto {
    fn from(v: Verifier) -> Self {
        VerifierDto {
            circuit: v.circuit,
            layout: v.layout,
            output_qubit: v.output_qubit,
            proof_registers: v.proof_registers,
        }
    }
}

impl TryFrom<VerifierDto> for Verifier {
    type Error = Error;

    fn try_from(dto: VerifierDto) -> Result<Self> {
        Verifier::new(dto.circuit, dto.layout, dto.output_qubit, dto.proof_registers)
    }
}

impl Verifier {
    /// Build and validate a verifier.
    ///
    /// The layout must list exactly one work register first, followed by the
    /// proof registers in order; all proof registers must have the same
    /// qubit count and the circuit must be unitary within 1e-10.
    pub fn new(
        circuit: ComplexMatrix,
        layout: RegisterLayout,
        output_qubit: usize,
        proof_registers: Vec<String>,
    ) -> Result<Self> {
        let names = layout.names();
        if names.len() != proof_registers.len() + 1 {
            return Err(Error::Layout(format!(
                "layout has {} registers; expected one work register plus {} proof registers",
                names.len(),
                proof_registers.len()
            )));
        }
        for (listed, expected) in names[1..].iter().zip(&proof_registers) {
            if listed != expected {
                return Err(Error::Layout(format!(
                    "proof registers must follow the work register in order; found '{listed}', expected '{expected}'"
                )));
            }
        }
        if proof_registers.is_empty() {
            return Err(Error::Layout("a verifier needs at least one proof register".into()));
        }
        let q_m = layout.qubit_count(&proof_registers[0])?;
        for name in &proof_registers {
            if layout.qubit_count(name)? != q_m {
                return Err(Error::Layout("proof registers must have equal qubit counts".into()));
            }
        }
        if circuit.rows() != layout.dim() || !circuit.is_square() {
            return Err(Error::Shape(format!(
                "circuit is {}x{}, layout dimension is {}",
                circuit.rows(),
                circuit.cols(),
                layout.dim()
            )));
        }
        if output_qubit >= layout.qubit_count(names[0])? {
            return Err(Error::Index(format!(
                "output qubit {output_qubit} outside the {}-qubit work register",
                layout.qubit_count(names[0])?
            )));
        }
        if !circuit.is_unitary(CONTRACT_TOL) {
            return Err(Error::Contract("verifier circuit is not unitary within 1e-10".into()));
        }
        Ok(Self { circuit, layout, output_qubit, proof_registers })
    }

    pub fn circuit(&self) -> &ComplexMatrix {
        &self.circuit
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn work_register(&self) -> &str {
        &self.layout.registers()[0].0
    }

    pub fn work_qubits(&self) -> usize {
        self.layout.registers()[0].1
    }

    /// Output qubit index within the work register.
    pub fn output_qubit(&self) -> usize {
        self.output_qubit
    }

    pub fn proof_registers(&self) -> &[String] {
        &self.proof_registers
    }

    pub fn proof_count(&self) -> usize {
        self.proof_registers.len()
    }

    /// Qubits per proof register.
    pub fn proof_qubits(&self) -> usize {
        self.layout
            .qubit_count(&self.proof_registers[0])
            .expect("validated at construction")
    }

    pub fn total_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn joint_proof_qubits(&self) -> usize {
        self.proof_count() * self.proof_qubits()
    }

    pub fn joint_proof_dim(&self) -> usize {
        1usize << self.joint_proof_qubits()
    }

    /// Layout of the joint proof space (the proof registers only).
    pub fn proof_layout(&self) -> RegisterLayout {
        let registers = self
            .layout
            .registers()
            .iter()
            .skip(1)
            .cloned()
            .collect::<Vec<_>>();
        RegisterLayout::new(registers).expect("validated at construction")
    }

    /// Global qubit position of the output qubit (work register is first).
    pub(crate) fn output_position(&self) -> usize {
        self.output_qubit
    }

    /// A verifier whose acceptance operator is block† block, realized by the
    /// standard unitary dilation with a single work qubit as output.
    ///
    /// `block` must be a contraction (largest singular value at most 1) on
    /// the joint proof space of the given proof registers.
    pub fn from_acceptance_block(
        block: &ComplexMatrix,
        proof_registers: Vec<(String, usize)>,
    ) -> Result<Self> {
        if !block.is_square() {
            return Err(Error::Shape("acceptance block must be square".into()));
        }
        let p: usize = 1 << proof_registers.iter().map(|(_, q)| q).sum::<usize>();
        if block.rows() != p {
            return Err(Error::Shape(format!(
                "block dimension {} does not match proof space dimension {p}",
                block.rows()
            )));
        }
        let a = block;
        let a_dag = a.adjoint();
        let gram = a_dag.mul(a)?;
        let co_gram = a.mul(&a_dag)?;
        let identity = ComplexMatrix::identity(p)?;
        let top = eig_hermitian(&gram.hermitized())?;
        if top.values.first().copied().unwrap_or(0.0) > 1.0 + 1e-9 {
            return Err(Error::Contract("acceptance block is not a contraction".into()));
        }
        let sqrt_complement = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            // Round eigenvalues of I - M into [0, 1] before the square root.
            let diff = identity.sub(m)?.hermitized();
            let eig = eig_hermitian(&diff)?;
            eig.rebuild_with(|v| v.clamp(0.0, 1.0).sqrt())
        };
        let t = sqrt_complement(&gram)?; // sqrt(I - A†A)
        let s = sqrt_complement(&co_gram)?; // sqrt(I - A A†)
        // U = [[T, -A†], [A, S]] with the work qubit (row block = work value)
        // most significant; column block 0 sends |0,p⟩ to T|p⟩ on work 0
        // plus A|p⟩ on work 1, so the accepted amplitude is A|p⟩.
        let mut circuit = ComplexMatrix::zeros(2 * p, 2 * p)?;
        for i in 0..p {
            for j in 0..p {
                circuit.set(i, j, t.get(i, j));
                circuit.set(i, p + j, -a_dag.get(i, j));
                circuit.set(p + i, j, a.get(i, j));
                circuit.set(p + i, p + j, s.get(i, j));
            }
        }
        let mut registers = vec![("work".to_string(), 1)];
        registers.extend(proof_registers.iter().cloned());
        let layout = RegisterLayout::new(registers)?;
        let proof_names = proof_registers.into_iter().map(|(n, _)| n).collect();
        Verifier::new(circuit, layout, 0, proof_names)
    }

    /// A verifier with the prescribed acceptance operator (PSD, eigenvalues
    /// at most 1), via [`Verifier::from_acceptance_block`] on its PSD square
    /// root.
    pub fn with_acceptance_operator(
        m: &ComplexMatrix,
        proof_registers: Vec<(String, usize)>,
    ) -> Result<Self> {
        let block = psd_sqrt(m)?;
        Self::from_acceptance_block(&block, proof_registers)
    }

    /// Verifier accepting every proof tuple with certainty.
    pub fn always_accept(k: usize, proof_qubits: usize) -> Result<Self> {
        let regs = (0..k).map(|i| (format!("p{}", i + 1), proof_qubits)).collect::<Vec<_>>();
        let dim = 1usize << (k * proof_qubits);
        Self::from_acceptance_block(&ComplexMatrix::identity(dim)?, regs)
    }

    /// Verifier rejecting every proof tuple with certainty.
    pub fn always_reject(k: usize, proof_qubits: usize) -> Result<Self> {
        let regs = (0..k).map(|i| (format!("p{}", i + 1), proof_qubits)).collect::<Vec<_>>();
        let dim = 1usize << (k * proof_qubits);
        Self::from_acceptance_block(&ComplexMatrix::zeros(dim, dim)?, regs)
    }
}

/// Ordered tuple of unentangled proofs, one per proof register.
#[derive(Clone, Debug)]
pub struct ProofTuple {
    proofs: Vec<PureState>,
}

impl ProofTuple {
    pub fn new(proofs: Vec<PureState>) -> Self {
        Self { proofs }
    }

    pub fn proofs(&self) -> &[PureState] {
        &self.proofs
    }

    pub fn len(&self) -> usize {
        self.proofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proofs.is_empty()
    }

    /// Check size compatibility against a verifier.
    pub fn check_compatible(&self, v: &Verifier) -> Result<()> {
        if self.proofs.len() != v.proof_count() {
            return Err(Error::Compatibility(format!(
                "{} proofs supplied, verifier expects {}",
                self.proofs.len(),
                v.proof_count()
            )));
        }
        for (i, proof) in self.proofs.iter().enumerate() {
            if proof.total_qubits() != v.proof_qubits() {
                return Err(Error::Compatibility(format!(
                    "proof {} has {} qubits, verifier expects {}",
                    i + 1,
                    proof.total_qubits(),
                    v.proof_qubits()
                )));
            }
        }
        Ok(())
    }

    /// Joint state vector of all proofs in order.
    pub fn joint_amplitudes(&self) -> Vec<C64> {
        let mut joint = vec![C64::new(1.0, 0.0)];
        for proof in &self.proofs {
            joint = linalg::tensor_vec(&joint, proof.amplitudes());
        }
        joint
    }
}

/// Acceptance operator on the joint proof space; its quadratic form is the
/// acceptance probability and its top eigenvalue is the entangled optimum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcceptanceOperator {
    matrix: ComplexMatrix,
}

impl AcceptanceOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape("acceptance operator must be square".into()));
        }
        let eig = eig_hermitian(&matrix.hermitized())?;
        let max = eig.values.first().copied().unwrap_or(0.0);
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -ACCEPTANCE_EIGENVALUE_TOL || max > 1.0 + ACCEPTANCE_EIGENVALUE_TOL {
            return Err(Error::Contract(format!(
                "acceptance operator eigenvalues [{min}, {max}] outside [0, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Entangled-prover optimum.
    pub fn lambda_max(&self) -> Result<f64> {
        let eig = eig_hermitian(&self.matrix.hermitized())?;
        Ok(eig.values.first().copied().unwrap_or(0.0))
    }

    /// ⟨psi| M |psi⟩ for a joint proof vector.
    pub fn quadratic_form(&self, joint: &[C64]) -> Result<f64> {
        if joint.len() != self.matrix.rows() {
            return Err(Error::Shape(format!(
                "joint vector has dimension {}, operator is {}x{}",
                joint.len(),
                self.matrix.rows(),
                self.matrix.cols()
            )));
        }
        let applied = self.matrix.mul_vec(joint)?;
        let value: C64 = joint.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum();
        Ok(value.re)
    }

    /// tr(M rho) for a density operator on the joint proof space.
    pub fn expectation(&self, rho: &DensityOperator) -> Result<f64> {
        Ok(self.matrix.trace_product(rho.matrix())?.re)
    }
}

/// Probability that `v` accepts the given proof tuple, by exact simulation.
pub fn accept_probability(v: &Verifier, proofs: &ProofTuple) -> Result<f64> {
    proofs.check_compatible(v)?;
    let work_dim = 1usize << v.work_qubits();
    let mut state = vec![C64::new(0.0, 0.0); work_dim];
    state[0] = C64::new(1.0, 0.0);
    let joint = linalg::tensor_vec(&state, &proofs.joint_amplitudes());
    let out = v.circuit.mul_vec(&joint)?;
    Ok(output_one_probability(&out, v.output_position(), v.total_qubits()))
}

/// Acceptance probability when the proof registers hold (possibly mixed)
/// states, by evolving the joint density matrix through the circuit.
pub fn accept_probability_mixed(v: &Verifier, proofs: &[DensityOperator]) -> Result<f64> {
    if proofs.len() != v.proof_count() {
        return Err(Error::Compatibility(format!(
            "{} density operators supplied, verifier expects {}",
            proofs.len(),
            v.proof_count()
        )));
    }
    for (i, rho) in proofs.iter().enumerate() {
        if rho.layout().total_qubits() != v.proof_qubits() {
            return Err(Error::Compatibility(format!(
                "density operator {} has {} qubits, verifier expects {}",
                i + 1,
                rho.layout().total_qubits(),
                v.proof_qubits()
            )));
        }
    }
    let work_dim = 1usize << v.work_qubits();
    let mut joint = ComplexMatrix::zeros(work_dim, work_dim)?;
    joint.set(0, 0, C64::new(1.0, 0.0));
    for rho in proofs {
        joint = linalg::tensor(&joint, rho.matrix())?;
    }
    let evolved = v.circuit.mul(&joint)?.mul(&v.circuit.adjoint())?;
    let n = v.total_qubits();
    let pos = v.output_position();
    let mut p = 0.0;
    for i in 0..evolved.rows() {
        if linalg::bit_at(i, pos, n) == 1 {
            p += evolved.get(i, i).re;
        }
    }
    Ok(p.clamp(0.0, 1.0))
}

fn output_one_probability(amplitudes: &[C64], output_position: usize, total_qubits: usize) -> f64 {
    let mut p = 0.0;
    for (i, z) in amplitudes.iter().enumerate() {
        if linalg::bit_at(i, output_position, total_qubits) == 1 {
            p += z.norm_sqr();
        }
    }
    p.clamp(0.0, 1.0)
}

/// Acceptance operator M = (⟨0_work| ⊗ I) U† Π U (|0_work⟩ ⊗ I).
///
/// The work register occupies the most significant qubits, so the columns of
/// U indexed 0..joint_proof_dim are exactly U applied to |0_work⟩ ⊗ |p⟩.
pub fn acceptance_operator(v: &Verifier) -> Result<AcceptanceOperator> {
    let d = v.layout.dim();
    let p_dim = v.joint_proof_dim();
    let n = v.total_qubits();
    let pos = v.output_position();
    let mut m = ComplexMatrix::zeros(p_dim, p_dim)?;
    for i in 0..d {
        if linalg::bit_at(i, pos, n) != 1 {
            continue;
        }
        for a in 0..p_dim {
            let via = v.circuit.get(i, a).conj();
            if via.re == 0.0 && via.im == 0.0 {
                continue;
            }
            for b in 0..p_dim {
                let add = via * v.circuit.get(i, b);
                m.set(a, b, m.get(a, b) + add);
            }
        }
    }
    AcceptanceOperator::new(m)
}

/// Maximum acceptance over arbitrary (possibly entangled) joint proofs: the
/// top eigenpair of the acceptance operator.
pub fn optimal_entangled_proof(v: &Verifier) -> Result<(f64, PureState)> {
    let m = acceptance_operator(v)?;
    let eig = eig_hermitian(&m.matrix().hermitized())?;
    let value = eig.values.first().copied().unwrap_or(0.0);
    let column = eig.vectors.column(0);
    let proof = PureState::normalized(v.proof_layout(), column)?;
    Ok((value.clamp(0.0, 1.0), proof))
}

/// Completeness/soundness verdict for a system against its thresholds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemVerdict {
    pub completeness_ok: bool,
    pub soundness_ok: bool,
    pub honest_probability: f64,
    pub completeness_threshold: f64,
    pub certified_soundness_bound: f64,
    pub soundness_threshold: f64,
}

/// Check honest acceptance against c and a certified adversarial bound
/// against s. The soundness bound is supplied by the caller (typically from
/// prover optimization) so that exact simulation stays separate from
/// heuristic search.
pub fn check_system(
    v: &Verifier,
    yes_proofs: &ProofTuple,
    params: &SystemParams,
    soundness_bound: f64,
) -> Result<SystemVerdict> {
    let honest = accept_probability(v, yes_proofs)?;
    Ok(SystemVerdict {
        completeness_ok: honest >= params.c,
        soundness_ok: soundness_bound <= params.s,
        honest_probability: honest,
        completeness_threshold: params.c,
        certified_soundness_bound: soundness_bound,
        soundness_threshold: params.s,
    })
}
