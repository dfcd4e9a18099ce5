//! Pure and mixed states over register layouts, seeded sampling, fidelity,
//! the generalized Bell family, and nearest-product-state extraction.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    self, eig_hermitian, psd_sqrt, schmidt, ComplexMatrix, RegisterLayout, Schmidt, C64,
    CONTRACT_TOL,
};

/// Norm / trace tolerance for state invariants.
pub const STATE_TOL: f64 = 1e-10;

/// Stable seed derivation so parallel trials can partition seed space.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(splitmix64(index.wrapping_add(0x9E3779B97F4A7C15))))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-based stream of standard complex Gaussians.
struct GaussianStream {
    rng: ChaCha8Rng,
}

impl GaussianStream {
    fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn uniform01(&mut self) -> f64 {
        // 53 uniform bits in [0, 1).
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Box-Muller pair packed as one complex number; both parts are
    /// independent standard normals.
    fn next_complex(&mut self) -> C64 {
        let u1 = 1.0 - self.uniform01();
        let u2 = self.uniform01();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        C64::new(r * theta.cos(), r * theta.sin())
    }
}

/// Unit vector over a register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    layout: RegisterLayout,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(layout: RegisterLayout, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::Shape(format!(
                "state has {} amplitudes, layout dimension is {}",
                amplitudes.len(),
                layout.dim()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Contract("state contains non-finite amplitudes".into()));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Contract(format!("state norm {norm} is not 1 within 1e-10")));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Normalize and wrap; rejects the zero vector.
    pub fn normalized(layout: RegisterLayout, amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n < 1e-12 {
            return Err(Error::Contract("cannot normalize a (near-)zero vector".into()));
        }
        let scaled = amplitudes.into_iter().map(|z| z / n).collect();
        Self::new(layout, scaled)
    }

    /// Computational basis state |index⟩.
    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(Error::Index(format!("basis index {index} exceeds dimension {}", layout.dim())));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); layout.dim()];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::new(layout, amplitudes)
    }

    /// All-zeros state |0...0⟩.
    pub fn zero(layout: RegisterLayout) -> Result<Self> {
        Self::basis(layout, 0)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn total_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape("inner product needs equal dimensions".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn equal_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        match self.inner(other) {
            Ok(overlap) => (overlap.norm() - 1.0).abs() <= tol,
            Err(_) => false,
        }
    }

    /// Tensor with another state; layouts concatenate (names must not clash).
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut registers = self.layout.registers().to_vec();
        registers.extend(other.layout.registers().iter().cloned());
        let layout = RegisterLayout::new(registers)?;
        PureState::new(layout, linalg::tensor_vec(&self.amplitudes, &other.amplitudes))
    }

    pub fn schmidt(&self, cut: &[&str]) -> Result<Schmidt> {
        schmidt(&self.layout, &self.amplitudes, cut)
    }

    /// Same state with all registers merged into one named register.
    pub fn merged(&self, name: &str) -> Result<PureState> {
        PureState::new(self.layout.merged(name)?, self.amplitudes.clone())
    }
}

fn norm(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Serialize, Deserialize)]
struct StateDto {
    layout: RegisterLayout,
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateDto {
            layout: self.layout.clone(),
            rows: self.amplitudes.len(),
            cols: 1,
            entries: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = StateDto::deserialize(deserializer)?;
        if dto.cols != 1 || dto.rows != dto.entries.len() {
            return Err(D::Error::custom("pure state must be a column vector"));
        }
        let amplitudes = dto.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        PureState::new(dto.layout, amplitudes).map_err(D::Error::custom)
    }
}

/// Trace-one positive semidefinite operator over a register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    layout: RegisterLayout,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(layout: RegisterLayout, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != layout.dim() {
            return Err(Error::Shape(format!(
                "density matrix is {}x{}, layout dimension is {}",
                matrix.rows(),
                matrix.cols(),
                layout.dim()
            )));
        }
        if !matrix.is_hermitian(CONTRACT_TOL) {
            return Err(Error::Contract("density matrix is not Hermitian within 1e-10".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Contract(format!("density matrix trace {tr} is not 1")));
        }
        let eig = eig_hermitian(&matrix)?;
        if let Some(&min) = eig.values.last() {
            if min < -STATE_TOL {
                return Err(Error::NotPsd { min_eigenvalue: min });
            }
        }
        Ok(Self { layout, matrix })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Reduced state after tracing out the named registers.
    pub fn partial_trace(&self, traced: &[&str]) -> Result<DensityOperator> {
        let reduced = linalg::partial_trace(&self.matrix, &self.layout, traced)?;
        DensityOperator::new(self.layout.without(traced)?, reduced)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateDto {
            layout: self.layout.clone(),
            rows: self.matrix.rows(),
            cols: self.matrix.cols(),
            entries: self.matrix.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = StateDto::deserialize(deserializer)?;
        let entries = dto.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let matrix = ComplexMatrix::new(dto.rows, dto.cols, entries).map_err(D::Error::custom)?;
        DensityOperator::new(dto.layout, matrix).map_err(D::Error::custom)
    }
}

/// |psi⟩⟨psi| as a density operator.
pub fn density_of(psi: &PureState) -> DensityOperator {
    let d = psi.dim();
    let mut matrix = ComplexMatrix::zeros(d, d).expect("pure state already fit the budget");
    for i in 0..d {
        for j in 0..d {
            matrix.set(i, j, psi.amplitudes[i] * psi.amplitudes[j].conj());
        }
    }
    DensityOperator { layout: psi.layout.clone(), matrix }
}

/// Binary-or-larger POVM: PSD elements summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    layout: RegisterLayout,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(layout: RegisterLayout, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Shape("a POVM needs at least one element".into()));
        }
        let d = layout.dim();
        let mut sum = ComplexMatrix::zeros(d, d)?;
        for m in &elements {
            if !m.is_square() || m.rows() != d {
                return Err(Error::Shape("POVM element dimension mismatch".into()));
            }
            let eig = eig_hermitian(m)?;
            if let Some(&min) = eig.values.last() {
                if min < -STATE_TOL {
                    return Err(Error::NotPsd { min_eigenvalue: min });
                }
            }
            sum = sum.add(m)?;
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(d)?) > 1e-9 {
            return Err(Error::Contract("POVM elements do not sum to the identity".into()));
        }
        Ok(Self { layout, elements })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }
}

/// Haar-distributed pure state, deterministic for a given seed.
pub fn haar_random_pure(layout: &RegisterLayout, seed: u64) -> Result<PureState> {
    let mut stream = GaussianStream::new(seed);
    let amplitudes: Vec<C64> = (0..layout.dim()).map(|_| stream.next_complex()).collect();
    PureState::normalized(layout.clone(), amplitudes)
}

/// Haar-distributed unitary via QR of a Gaussian matrix with the standard
/// phase correction on the diagonal of R.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut stream = GaussianStream::new(seed);
    let g = nalgebra::DMatrix::from_fn(dim, dim, |_, _| stream.next_complex());
    let qr = g.qr();
    let r = qr.r();
    let q = qr.q();
    let mut out = ComplexMatrix::zeros(dim, dim)?;
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 1e-300 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            out.set(i, j, q[(i, j)] * phase);
        }
    }
    Ok(out)
}

/// Random density operator W W† / tr(W W†) with Gaussian W of the given rank.
pub fn random_density(layout: &RegisterLayout, rank: usize, seed: u64) -> Result<DensityOperator> {
    let d = layout.dim();
    if rank == 0 || rank > d {
        return Err(Error::Index(format!("rank {rank} out of range for dimension {d}")));
    }
    let mut stream = GaussianStream::new(seed);
    let w: Vec<C64> = (0..d * rank).map(|_| stream.next_complex()).collect();
    let mut matrix = ComplexMatrix::zeros(d, d)?;
    let mut trace = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..rank {
                acc += w[i * rank + k] * w[j * rank + k].conj();
            }
            matrix.set(i, j, acc);
            if i == j {
                trace += acc.re;
            }
        }
    }
    let normalized = matrix.scaled_real(1.0 / trace);
    DensityOperator::new(layout.clone(), normalized)
}

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)): the sum of the
/// clamped-nonnegative eigenvalue square roots of sqrt(rho) sigma sqrt(rho),
/// evaluated as the singular values of sqrt(rho) sqrt(sigma) so that
/// near-zero eigenvalues do not lose precision under the square root.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.layout != sigma.layout {
        return Err(Error::Layout("fidelity needs matching layouts".into()));
    }
    let a = psd_sqrt(rho.matrix())?.mul(&psd_sqrt(sigma.matrix())?)?;
    let na = nalgebra::DMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j));
    let f: f64 = na.singular_values().iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Generalized Bell state over two d-dimensional registers,
/// (1/sqrt(d)) sum_j exp(2 pi i jk/d) |e_j⟩ ⊗ |e_(j+l mod d)⟩ with 1-based
/// indices and e_0 identified with e_d. Normalized so the family of all
/// (k, l) with 1 <= k, l <= d is orthonormal.
pub fn bell_state(d: usize, k: usize, l: usize) -> Result<PureState> {
    if !d.is_power_of_two() || d < 2 {
        return Err(Error::Index(format!("dimension {d} must be a power of two >= 2")));
    }
    if k < 1 || k > d || l < 1 || l > d {
        return Err(Error::Index(format!("bell indices ({k}, {l}) out of range 1..={d}")));
    }
    let n = d.trailing_zeros() as usize;
    let layout = RegisterLayout::new(vec![("a".into(), n), ("b".into(), n)])?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); d * d];
    let scale = 1.0 / (d as f64).sqrt();
    for j in 1..=d {
        let left = j - 1;
        let right = (j + l - 1) % d;
        let angle = std::f64::consts::TAU * (j * k) as f64 / d as f64;
        amplitudes[left * d + right] = C64::new(angle.cos() * scale, angle.sin() * scale);
    }
    PureState::new(layout, amplitudes)
}

/// Closest product state across the cut and the fidelity achieved, i.e. the
/// top Schmidt pair and the top Schmidt coefficient.
pub fn nearest_product_state(psi: &PureState, cut: &[&str]) -> Result<(PureState, f64)> {
    let s = psi.schmidt(cut)?;
    let names = psi.layout.names();
    let cut_names: Vec<&str> = names.iter().copied().filter(|n| cut.contains(n)).collect();
    let rest: Vec<&str> = names.iter().copied().filter(|n| !cut.contains(n)).collect();
    let fronted_order: Vec<&str> = cut_names.iter().chain(rest.iter()).copied().collect();

    let left = s.left.column(0);
    let right = s.right.column(0);
    let fronted = linalg::tensor_vec(&left, &right);
    let fronted_layout = psi.layout.reordered(&fronted_order)?;
    let original_order = psi.layout.names();
    let amplitudes = linalg::permute_state(&fronted, &fronted_layout, &original_order)?;
    let product = PureState::normalized(psi.layout.clone(), amplitudes)?;
    Ok((product, s.coefficients[0]))
}

/// True iff every squared Schmidt coefficient is within tol of 1/d for an
/// equal-dimension cut.
pub fn is_maximally_entangled(psi: &PureState, cut: &[&str], tol: f64) -> Result<bool> {
    let names = psi.layout.names();
    let cut_names: Vec<&str> = names.iter().copied().filter(|n| cut.contains(n)).collect();
    let cut_qubits = psi.layout.qubit_positions_of(&cut_names)?.len();
    let rest_qubits = psi.total_qubits() - cut_qubits;
    if cut_qubits != rest_qubits {
        return Err(Error::Cut(format!(
            "cut splits {cut_qubits} vs {rest_qubits} qubits; sides must match"
        )));
    }
    let d = 1usize << cut_qubits;
    let s = psi.schmidt(cut)?;
    let target = 1.0 / d as f64;
    Ok(s.coefficients.iter().all(|c| (c * c - target).abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit(name: &str) -> RegisterLayout {
        RegisterLayout::single(name, 1).unwrap()
    }

    #[test]
    fn density_of_basis_and_plus() {
        let zero = PureState::basis(qubit("q"), 0).unwrap();
        let rho = density_of(&zero);
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap()) < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus =
            PureState::new(qubit("q"), vec![C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        let rho = density_of(&plus);
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix().get(i, j) - C64::new(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn density_of_random_state_is_idempotent_projector() {
        let layout = RegisterLayout::single("r", 2).unwrap();
        let psi = haar_random_pure(&layout, 5).unwrap();
        let rho = density_of(&psi);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        let sq = rho.matrix().mul(rho.matrix()).unwrap();
        assert!(sq.max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn haar_sampling_is_deterministic_and_normalized() {
        let layout = RegisterLayout::single("r", 3).unwrap();
        let a = haar_random_pure(&layout, 99).unwrap();
        let b = haar_random_pure(&layout, 99).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let n: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
        let c = haar_random_pure(&layout, 100).unwrap();
        assert_ne!(a.amplitudes(), c.amplitudes());
    }

    #[test]
    fn haar_first_moment_matches_dimension() {
        // E |<0|psi>|^2 = 1/d for Haar states; checked at d = 2.
        let layout = qubit("q");
        let samples = 100_000;
        let mut acc = 0.0;
        for i in 0..samples {
            let psi = haar_random_pure(&layout, derive_seed(7, i)).unwrap();
            acc += psi.amplitudes()[0].norm_sqr();
        }
        let mean = acc / samples as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn fidelity_is_one_on_equal_states() {
        let layout = RegisterLayout::single("r", 2).unwrap();
        let rho = random_density(&layout, 3, 8).unwrap();
        let f = fidelity(&rho, &rho).unwrap();
        assert!((f - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap() {
        let zero = density_of(&PureState::basis(qubit("q"), 0).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = density_of(
            &PureState::new(qubit("q"), vec![C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap(),
        );
        let f = fidelity(&zero, &plus).unwrap();
        assert!((f - h).abs() < 1e-10);
    }

    #[test]
    fn fidelity_matches_nested_sqrt_route() {
        // Independent path: tr sqrt(sqrt(rho) sigma sqrt(rho)) with two PSD
        // square roots instead of an eigenvalue sum.
        let layout = RegisterLayout::single("r", 2).unwrap();
        for trial in 0..20 {
            let rho = random_density(&layout, 1 + (trial as usize % 4), derive_seed(20, trial)).unwrap();
            let sigma =
                random_density(&layout, 1 + ((trial + 1) as usize % 4), derive_seed(21, trial)).unwrap();
            let f = fidelity(&rho, &sigma).unwrap();
            let s = psd_sqrt(rho.matrix()).unwrap();
            let inner = s.mul(sigma.matrix()).unwrap().mul(&s).unwrap().hermitized();
            let oracle = psd_sqrt(&inner).unwrap().trace().re;
            assert!((f - oracle).abs() < 1e-7, "trial {trial}: {f} vs {oracle}");
            let back = fidelity(&sigma, &rho).unwrap();
            assert!((f - back).abs() < 1e-8);
        }
    }

    #[test]
    fn bell_family_is_orthonormal_at_d2() {
        let mut states = Vec::new();
        for k in 1..=2 {
            for l in 1..=2 {
                states.push(bell_state(2, k, l).unwrap());
            }
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let overlap = a.inner(b).unwrap().norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-12, "({i},{j}) overlap {overlap}");
            }
        }
    }

    #[test]
    fn bell_states_have_flat_schmidt_spectrum() {
        for (d, k, l) in [(2, 1, 2), (4, 3, 1), (4, 4, 4)] {
            let g = bell_state(d, k, l).unwrap();
            let s = g.schmidt(&["a"]).unwrap();
            let expected = 1.0 / (d as f64).sqrt();
            for c in &s.coefficients {
                assert!((c - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_state_d2_top_indices_is_standard_pair() {
        let g = bell_state(2, 2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = PureState::new(
            g.layout().clone(),
            vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)],
        )
        .unwrap();
        assert!(g.equal_up_to_phase(&expected, 1e-12));
    }

    #[test]
    fn bell_state_rejects_out_of_range_indices() {
        assert!(matches!(bell_state(2, 0, 1), Err(Error::Index(_))));
        assert!(matches!(bell_state(2, 1, 3), Err(Error::Index(_))));
        assert!(matches!(bell_state(3, 1, 1), Err(Error::Index(_))));
    }

    #[test]
    fn nearest_product_state_returns_product_input() {
        let a = PureState::basis(qubit("a"), 0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = PureState::new(qubit("b"), vec![C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        let product = a.tensor(&b).unwrap();
        let (closest, value) = nearest_product_state(&product, &["a"]).unwrap();
        assert!((value - 1.0).abs() < 1e-10);
        assert!(closest.equal_up_to_phase(&product, 1e-10));
    }

    #[test]
    fn nearest_product_state_of_bell_is_floor() {
        let g = bell_state(2, 2, 2).unwrap();
        let (_, value) = nearest_product_state(&g, &["a"]).unwrap();
        assert!((value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn nearest_product_state_beats_random_sweep() {
        // Oracle: a seeded sweep over many random product pairs can only
        // approach the top Schmidt coefficient from below.
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        let psi = haar_random_pure(&layout, 4242).unwrap();
        let (_, value) = nearest_product_state(&psi, &["a"]).unwrap();

        let la = qubit("a");
        let lb = qubit("b");
        let mut best: f64 = 0.0;
        for i in 0..1_000_000u64 {
            let phi = haar_random_pure(&la, derive_seed(1000, i)).unwrap();
            let chi = haar_random_pure(&lb, derive_seed(2000, i)).unwrap();
            let mut overlap = C64::new(0.0, 0.0);
            for l in 0..2 {
                for r in 0..2 {
                    overlap += psi.amplitudes()[l * 2 + r].conj()
                        * phi.amplitudes()[l]
                        * chi.amplitudes()[r];
                }
            }
            best = best.max(overlap.norm());
        }
        assert!(best <= value + 1e-10, "sweep {best} exceeded schmidt value {value}");
        assert!(value - best <= 1e-3, "sweep {best} too far below {value}");
    }

    #[test]
    fn nearest_product_value_is_at_least_floor_on_equal_cut() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        for i in 0..50 {
            let psi = haar_random_pure(&layout, derive_seed(31, i)).unwrap();
            let (_, value) = nearest_product_state(&psi, &["a"]).unwrap();
            assert!(value >= std::f64::consts::FRAC_1_SQRT_2 - 1e-10);
        }
    }

    #[test]
    fn maximal_entanglement_detection() {
        let g = bell_state(2, 1, 1).unwrap();
        assert!(is_maximally_entangled(&g, &["a"], 1e-9).unwrap());
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        let zz = PureState::basis(layout, 0).unwrap();
        assert!(!is_maximally_entangled(&zz, &["a"], 1e-9).unwrap());
        for k in 1..=4 {
            for l in 1..=4 {
                let g = bell_state(4, k, l).unwrap();
                assert!(is_maximally_entangled(&g, &["a"], 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn unequal_cut_is_rejected() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 2)]).unwrap();
        let psi = haar_random_pure(&layout, 3).unwrap();
        assert!(matches!(is_maximally_entangled(&psi, &["a"], 1e-9), Err(Error::Cut(_))));
    }

    #[test]
    fn povm_validation_rejects_bad_sets() {
        let layout = RegisterLayout::single("r", 1).unwrap();
        let half = ComplexMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(Povm::new(layout.clone(), vec![half.clone(), half.clone()]).is_ok());
        // Elements not summing to the identity.
        assert!(matches!(
            Povm::new(layout.clone(), vec![half.clone(), half.clone(), half.clone()]),
            Err(Error::Contract(_))
        ));
        // A negative element.
        let neg = ComplexMatrix::diagonal(&[1.5, 1.5]).unwrap();
        let comp = ComplexMatrix::diagonal(&[-0.5, -0.5]).unwrap();
        assert!(matches!(
            Povm::new(layout, vec![neg, comp]),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn state_serde_round_trips() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        let psi = haar_random_pure(&layout, 17).unwrap();
        let json = serde_json::to_string(&psi).unwrap();
        assert!(json.contains("\"layout\"") && json.contains("\"entries\""));
        let back: PureState = serde_json::from_str(&json).unwrap();
        assert_eq!(psi, back);

        let rho = random_density(&layout, 3, 18).unwrap();
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(rho, back);

        // Deserialization re-validates invariants.
        let bad = json.replace("\"rows\":4", "\"rows\":3");
        assert!(serde_json::from_str::<DensityOperator>(&bad).is_err());
    }

    #[test]
    fn fidelity_rejects_layout_mismatch() {
        let rho = random_density(&qubit("a"), 2, 1).unwrap();
        let sigma = random_density(&qubit("b"), 2, 2).unwrap();
        assert!(matches!(fidelity(&rho, &sigma), Err(Error::Layout(_))));
    }

    #[test]
    fn fidelity_product_rule_holds() {
        let layout = RegisterLayout::single("r", 1).unwrap();
        for i in 0..100 {
            let rho1 = random_density(&layout, 2, derive_seed(50, i)).unwrap();
            let sigma1 = random_density(&layout, 2, derive_seed(51, i)).unwrap();
            let rho2 = random_density(&layout, 1 + (i as usize % 2), derive_seed(52, i)).unwrap();
            let sigma2 = random_density(&layout, 2, derive_seed(53, i)).unwrap();
            let joint_layout =
                RegisterLayout::new(vec![("x".into(), 1), ("y".into(), 1)]).unwrap();
            let rho = DensityOperator::new(
                joint_layout.clone(),
                linalg::tensor(rho1.matrix(), rho2.matrix()).unwrap(),
            )
            .unwrap();
            let sigma = DensityOperator::new(
                joint_layout,
                linalg::tensor(sigma1.matrix(), sigma2.matrix()).unwrap(),
            )
            .unwrap();
            let lhs = fidelity(&rho, &sigma).unwrap();
            let rhs = fidelity(&rho1, &sigma1).unwrap() * fidelity(&rho2, &sigma2).unwrap();
            assert!((lhs - rhs).abs() < 1e-7, "case {i}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn fidelity_chain_inequality_holds() {
        let layout = RegisterLayout::single("r", 2).unwrap();
        for i in 0..100 {
            let rho = random_density(&layout, 4, derive_seed(60, i)).unwrap();
            let sigma = random_density(&layout, 2, derive_seed(61, i)).unwrap();
            let xi = random_density(&layout, 3, derive_seed(62, i)).unwrap();
            let fab = fidelity(&rho, &sigma).unwrap();
            let fbc = fidelity(&sigma, &xi).unwrap();
            let fac = fidelity(&rho, &xi).unwrap();
            let slack = 1.0 + fac - fab * fab - fbc * fbc;
            assert!(slack >= -1e-9, "case {i}: slack {slack}");
        }
    }
}
