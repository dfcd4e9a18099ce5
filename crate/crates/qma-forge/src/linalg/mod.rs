//! Dense complex linear algebra over qubit register spaces.
//!
//! Everything here works on [`ComplexMatrix`] values tagged with a
//! [`RegisterLayout`]. The first listed register occupies the most
//! significant qubits, so a basis index is the big-endian reading of the
//! register contents and `tensor(a, b)` matches layout concatenation.

mod decomp;
mod layout;
mod matrix;

pub use decomp::{eig_hermitian, psd_sqrt, schmidt, HermitianEigen, Schmidt};
pub use layout::RegisterLayout;
pub use matrix::{ComplexMatrix, C64, DENSE_AMPLITUDE_BUDGET};

use crate::error::{Error, Result};

/// Tolerance for Hermiticity and unitarity contract checks.
pub const CONTRACT_TOL: f64 = 1e-10;

/// Value of the qubit at `position` (counted from the most significant) in a
/// basis index over `total` qubits.
#[inline]
pub(crate) fn bit_at(index: usize, position: usize, total: usize) -> usize {
    (index >> (total - 1 - position)) & 1
}

/// Bit mask selecting the qubit at `position` out of `total`.
#[inline]
pub(crate) fn mask_at(position: usize, total: usize) -> usize {
    1usize << (total - 1 - position)
}

/// Kronecker product; dimensions multiply.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or(Error::SizeLimit { amplitudes: u128::MAX, budget: DENSE_AMPLITUDE_BUDGET })?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or(Error::SizeLimit { amplitudes: u128::MAX, budget: DENSE_AMPLITUDE_BUDGET })?;
    let mut out = ComplexMatrix::zeros(rows, cols)?;
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let va = a.get(ia, ja);
            if va.re == 0.0 && va.im == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, va * b.get(ib, jb));
                }
            }
        }
    }
    Ok(out)
}

/// Tensor product of state vectors.
pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for va in a {
        for vb in b {
            out.push(va * vb);
        }
    }
    out
}

fn validate_operator_layout(op: &ComplexMatrix, layout: &RegisterLayout) -> Result<()> {
    if !op.is_square() || op.rows() != layout.dim() {
        return Err(Error::Shape(format!(
            "operator is {}x{}, layout dimension is {}",
            op.rows(),
            op.cols(),
            layout.dim()
        )));
    }
    Ok(())
}

/// Trace out the named registers, returning the operator on the rest.
pub fn partial_trace(
    rho: &ComplexMatrix,
    layout: &RegisterLayout,
    traced: &[&str],
) -> Result<ComplexMatrix> {
    validate_operator_layout(rho, layout)?;
    let kept_names: Vec<&str> = layout
        .names()
        .into_iter()
        .filter(|n| !traced.contains(n))
        .collect();
    let traced_positions = layout.qubit_positions_of(traced)?;
    let kept_positions = layout.qubit_positions_of(&kept_names)?;
    let n = layout.total_qubits();

    let scatter = |positions: &[usize]| -> Vec<usize> {
        let m = positions.len();
        (0..1usize << m)
            .map(|value| {
                let mut full = 0usize;
                for (j, &p) in positions.iter().enumerate() {
                    if (value >> (m - 1 - j)) & 1 == 1 {
                        full |= mask_at(p, n);
                    }
                }
                full
            })
            .collect()
    };
    let kept_scatter = scatter(&kept_positions);
    let traced_scatter = scatter(&traced_positions);

    let kd = kept_scatter.len();
    let mut out = ComplexMatrix::zeros(kd, kd)?;
    for a in 0..kd {
        for b in 0..kd {
            let mut acc = C64::new(0.0, 0.0);
            for t in &traced_scatter {
                acc += rho.get(kept_scatter[a] | t, kept_scatter[b] | t);
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}

/// Index map sending an old basis index to its index after re-listing the
/// registers in `new_order`.
fn index_permutation(layout: &RegisterLayout, new_order: &[&str]) -> Result<Vec<usize>> {
    let reordered = layout.reordered(new_order)?;
    debug_assert_eq!(reordered.total_qubits(), layout.total_qubits());
    // old_positions[q] = old position of the qubit landing at new position q
    let old_positions = layout.qubit_positions_of(new_order)?;
    let n = layout.total_qubits();
    let mut map = vec![0usize; 1 << n];
    for (i, slot) in map.iter_mut().enumerate() {
        let mut out = 0usize;
        for (q, &p) in old_positions.iter().enumerate() {
            if bit_at(i, p, n) == 1 {
                out |= mask_at(q, n);
            }
        }
        *slot = out;
    }
    Ok(map)
}

/// Conjugate an operator by the qubit permutation implied by re-listing the
/// registers in `new_order`.
pub fn permute_registers(
    op: &ComplexMatrix,
    layout: &RegisterLayout,
    new_order: &[&str],
) -> Result<ComplexMatrix> {
    validate_operator_layout(op, layout)?;
    let map = index_permutation(layout, new_order)?;
    let d = op.rows();
    let mut out = ComplexMatrix::zeros(d, d)?;
    for i in 0..d {
        for j in 0..d {
            out.set(map[i], map[j], op.get(i, j));
        }
    }
    Ok(out)
}

/// State-vector counterpart of [`permute_registers`].
pub fn permute_state(
    amplitudes: &[C64],
    layout: &RegisterLayout,
    new_order: &[&str],
) -> Result<Vec<C64>> {
    if amplitudes.len() != layout.dim() {
        return Err(Error::Shape(format!(
            "state has {} amplitudes, layout dimension is {}",
            amplitudes.len(),
            layout.dim()
        )));
    }
    let map = index_permutation(layout, new_order)?;
    let mut out = vec![C64::new(0.0, 0.0); amplitudes.len()];
    for (i, amp) in amplitudes.iter().enumerate() {
        out[map[i]] = *amp;
    }
    Ok(out)
}

/// |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ op, the control qubit being the first register.
pub fn controlled(op: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !op.is_unitary(CONTRACT_TOL) {
        return Err(Error::Contract("controlled() requires a unitary operator".into()));
    }
    let d = op.rows();
    let mut out = ComplexMatrix::zeros(2 * d, 2 * d)?;
    for i in 0..d {
        out.set(i, i, C64::new(1.0, 0.0));
        for j in 0..d {
            out.set(d + i, d + j, op.get(i, j));
        }
    }
    Ok(out)
}

struct Embedding {
    // old index -> index with the target registers moved to the front
    to_front: Vec<usize>,
    from_front: Vec<usize>,
    rest_bits: usize,
    op_dim: usize,
}

fn embedding(layout: &RegisterLayout, targets: &[&str], op_dim: usize) -> Result<Embedding> {
    let mut order: Vec<&str> = targets.to_vec();
    for name in layout.names() {
        if !targets.contains(&name) {
            order.push(name);
        }
    }
    let to_front = index_permutation(layout, &order)?;
    let target_qubits = layout.qubit_positions_of(targets)?.len();
    if 1usize << target_qubits != op_dim {
        return Err(Error::Shape(format!(
            "operator dimension {} does not match {} target qubits",
            op_dim, target_qubits
        )));
    }
    let mut from_front = vec![0usize; to_front.len()];
    for (i, &f) in to_front.iter().enumerate() {
        from_front[f] = i;
    }
    Ok(Embedding { to_front, from_front, rest_bits: layout.total_qubits() - target_qubits, op_dim })
}

/// Embed an operator acting on `targets` (consumed in the listed order) into
/// the full space of `layout`, acting as the identity elsewhere.
pub fn embed(op: &ComplexMatrix, layout: &RegisterLayout, targets: &[&str]) -> Result<ComplexMatrix> {
    if !op.is_square() {
        return Err(Error::Shape("embedded operator must be square".into()));
    }
    let emb = embedding(layout, targets, op.rows())?;
    let d = layout.dim();
    let lo_mask = (1usize << emb.rest_bits) - 1;
    let mut out = ComplexMatrix::zeros(d, d)?;
    for i in 0..d {
        let fi = emb.to_front[i];
        let hi_i = fi >> emb.rest_bits;
        let lo = fi & lo_mask;
        for hi_j in 0..emb.op_dim {
            let v = op.get(hi_i, hi_j);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let j = emb.from_front[(hi_j << emb.rest_bits) | lo];
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// embed(op) · acc, computed without materializing the embedding.
pub fn apply_embedded_left(
    op: &ComplexMatrix,
    layout: &RegisterLayout,
    targets: &[&str],
    acc: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let emb = embedding(layout, targets, op.rows())?;
    let d = layout.dim();
    if acc.rows() != d {
        return Err(Error::Shape("accumulator rows do not match layout dimension".into()));
    }
    let lo_mask = (1usize << emb.rest_bits) - 1;
    let mut out = ComplexMatrix::zeros(d, acc.cols())?;
    for i in 0..d {
        let fi = emb.to_front[i];
        let hi_i = fi >> emb.rest_bits;
        let lo = fi & lo_mask;
        for hi in 0..emb.op_dim {
            let v = op.get(hi_i, hi);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let k = emb.from_front[(hi << emb.rest_bits) | lo];
            for j in 0..acc.cols() {
                let add = v * acc.get(k, j);
                out.set(i, j, out.get(i, j) + add);
            }
        }
    }
    Ok(out)
}

/// acc · embed(op), computed without materializing the embedding.
pub fn apply_embedded_right(
    acc: &ComplexMatrix,
    op: &ComplexMatrix,
    layout: &RegisterLayout,
    targets: &[&str],
) -> Result<ComplexMatrix> {
    let emb = embedding(layout, targets, op.rows())?;
    let d = layout.dim();
    if acc.cols() != d {
        return Err(Error::Shape("accumulator cols do not match layout dimension".into()));
    }
    let lo_mask = (1usize << emb.rest_bits) - 1;
    let mut out = ComplexMatrix::zeros(acc.rows(), d)?;
    for j in 0..d {
        let fj = emb.to_front[j];
        let hi_j = fj >> emb.rest_bits;
        let lo = fj & lo_mask;
        for hi in 0..emb.op_dim {
            let v = op.get(hi, hi_j);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let k = emb.from_front[(hi << emb.rest_bits) | lo];
            for i in 0..acc.rows() {
                let add = acc.get(i, k) * v;
                out.set(i, j, out.get(i, j) + add);
            }
        }
    }
    Ok(out)
}

/// embed(op) applied to a state vector.
pub fn apply_embedded_to_vec(
    op: &ComplexMatrix,
    layout: &RegisterLayout,
    targets: &[&str],
    state: &[C64],
) -> Result<Vec<C64>> {
    let emb = embedding(layout, targets, op.rows())?;
    let d = layout.dim();
    if state.len() != d {
        return Err(Error::Shape("state length does not match layout dimension".into()));
    }
    let lo_mask = (1usize << emb.rest_bits) - 1;
    let mut out = vec![C64::new(0.0, 0.0); d];
    for (i, slot) in out.iter_mut().enumerate() {
        let fi = emb.to_front[i];
        let hi_i = fi >> emb.rest_bits;
        let lo = fi & lo_mask;
        let mut acc = C64::new(0.0, 0.0);
        for hi in 0..emb.op_dim {
            let v = op.get(hi_i, hi);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            acc += v * state[emb.from_front[(hi << emb.rest_bits) | lo]];
        }
        *slot = acc;
    }
    Ok(out)
}

/// P · acc for the basis permutation P|k⟩ = |perm[k]⟩.
pub fn apply_permutation_left(perm: &[usize], acc: &ComplexMatrix) -> Result<ComplexMatrix> {
    if perm.len() != acc.rows() {
        return Err(Error::Shape("permutation length does not match rows".into()));
    }
    let mut out = ComplexMatrix::zeros(acc.rows(), acc.cols())?;
    for k in 0..acc.rows() {
        for j in 0..acc.cols() {
            out.set(perm[k], j, acc.get(k, j));
        }
    }
    Ok(out)
}

/// Common single-qubit gates used when assembling circuits.
pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::new(
        2,
        2,
        vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)],
    )
    .expect("fixed 2x2 matrix")
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    )
    .expect("fixed 2x2 matrix")
}

/// SWAP on two registers of equal qubit count, as an operator on their joint
/// space (first register = most significant qubits).
pub fn swap_operator(qubits_per_side: usize) -> Result<ComplexMatrix> {
    let half = 1usize << qubits_per_side;
    let d = half * half;
    let mut out = ComplexMatrix::zeros(d, d)?;
    for a in 0..half {
        for b in 0..half {
            out.set(b * half + a, a * half + b, C64::new(1.0, 0.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{haar_random_unitary, random_density};
    use proptest::prelude::*;

    fn diag2(a: f64, b: f64) -> ComplexMatrix {
        ComplexMatrix::diagonal(&[a, b]).unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        let t = tensor(&i2, &i2).unwrap();
        assert_eq!(t, ComplexMatrix::identity(4).unwrap());
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let t = tensor(&diag2(1.0, 0.0), &diag2(0.0, 1.0)).unwrap();
        let expected = ComplexMatrix::diagonal(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn tensor_matches_index_formula() {
        // Oracle: entry (2i+k, 2j+l) equals a(i,j) * b(k,l).
        let a = haar_random_unitary(2, 11).unwrap();
        let b = haar_random_unitary(2, 12).unwrap();
        let t = tensor(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expected = a.get(i, j) * b.get(k, l);
                        assert!((t.get(2 * i + k, 2 * j + l) - expected).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
        let mut rho = ComplexMatrix::zeros(4, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                rho.set(i, j, bell[i] * bell[j].conj());
            }
        }
        let reduced = partial_trace(&rho, &layout, &["b"]).unwrap();
        let expected = ComplexMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(reduced.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 2)]).unwrap();
        let la = RegisterLayout::single("a", 1).unwrap();
        let lb = RegisterLayout::single("b", 2).unwrap();
        let rho_a = random_density(&la, 2, 5).unwrap();
        let rho_b = random_density(&lb, 4, 6).unwrap();
        let joint = tensor(rho_a.matrix(), rho_b.matrix()).unwrap();
        let reduced = partial_trace(&joint, &layout, &["b"]).unwrap();
        assert!(reduced.max_abs_diff(rho_a.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_matches_definition_sum() {
        // Oracle: tr_K rho = sum_i (I ⊗ <e_i|) rho (I ⊗ |e_i>) evaluated with
        // explicit bra/ket matrices, tracing the middle register of three.
        let layout =
            RegisterLayout::new(vec![("x".into(), 1), ("y".into(), 1), ("z".into(), 1)]).unwrap();
        let rho = random_density(&layout, 8, 7).unwrap();
        let got = partial_trace(rho.matrix(), &layout, &["y"]).unwrap();

        let mut expected = ComplexMatrix::zeros(4, 4).unwrap();
        for e in 0..2 {
            // bra = I_x ⊗ <e| ⊗ I_z as a 4x8 matrix
            let mut bra = ComplexMatrix::zeros(4, 8).unwrap();
            for x in 0..2 {
                for z in 0..2 {
                    bra.set(x * 2 + z, x * 4 + e * 2 + z, C64::new(1.0, 0.0));
                }
            }
            let term = bra.mul(rho.matrix()).unwrap().mul(&bra.adjoint()).unwrap();
            expected = expected.add(&term).unwrap();
        }
        assert!(got.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn permute_identity_is_noop() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 2)]).unwrap();
        let op = haar_random_unitary(8, 3).unwrap();
        let permuted = permute_registers(&op, &layout, &["a", "b"]).unwrap();
        assert!(permuted.max_abs_diff(&op) < 1e-15);
    }

    #[test]
    fn permute_swaps_basis_projector() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        let p01 = ComplexMatrix::diagonal(&[0.0, 1.0, 0.0, 0.0]).unwrap(); // |01><01|
        let swapped = permute_registers(&p01, &layout, &["b", "a"]).unwrap();
        let p10 = ComplexMatrix::diagonal(&[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(swapped.max_abs_diff(&p10) < 1e-15);
    }

    #[test]
    fn controlled_identity_is_identity() {
        let c = controlled(&ComplexMatrix::identity(4).unwrap()).unwrap();
        assert!(c.max_abs_diff(&ComplexMatrix::identity(8).unwrap()) < 1e-15);
    }

    #[test]
    fn controlled_swap_moves_basis_state() {
        let cswap = controlled(&swap_operator(1).unwrap()).unwrap();
        // |1>|01> is index 0b101 = 5; expect |1>|10> = 0b110 = 6.
        let mut state = vec![C64::new(0.0, 0.0); 8];
        state[5] = C64::new(1.0, 0.0);
        let out = cswap.mul_vec(&state).unwrap();
        assert!((out[6] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(out.iter().enumerate().all(|(i, z)| i == 6 || z.norm() < 1e-15));
    }

    #[test]
    fn controlled_extracts_block() {
        let u = haar_random_unitary(4, 21).unwrap();
        let c = controlled(&u).unwrap();
        assert!(c.is_unitary(1e-12));
        for i in 0..4 {
            for j in 0..4 {
                assert!((c.get(4 + i, 4 + j) - u.get(i, j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn controlled_rejects_non_unitary() {
        let m = diag2(2.0, 1.0);
        assert!(matches!(controlled(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn unknown_register_names_are_layout_errors() {
        let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
        let rho = ComplexMatrix::identity(4).unwrap().scaled_real(0.25);
        assert!(matches!(
            partial_trace(&rho, &layout, &["zz"]),
            Err(Error::Layout(_))
        ));
        assert!(matches!(
            permute_registers(&rho, &layout, &["a", "zz"]),
            Err(Error::Layout(_))
        ));
        // Repeating a register is not a permutation either.
        assert!(matches!(
            permute_registers(&rho, &layout, &["a", "a"]),
            Err(Error::Layout(_))
        ));
    }

    #[test]
    fn embed_agrees_with_tensor_permutation() {
        let layout =
            RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1), ("c".into(), 1)]).unwrap();
        let u = haar_random_unitary(4, 9).unwrap();
        // Embed on (c, a): compare against permute + tensor by hand.
        let embedded = embed(&u, &layout, &["c", "a"]).unwrap();
        let full = tensor(&u, &ComplexMatrix::identity(2).unwrap()).unwrap();
        let front_layout =
            RegisterLayout::new(vec![("c".into(), 1), ("a".into(), 1), ("b".into(), 1)]).unwrap();
        let expected = permute_registers(&full, &front_layout, &["a", "b", "c"]).unwrap();
        assert!(embedded.max_abs_diff(&expected) < 1e-13);
        assert!(embedded.is_unitary(1e-12));
    }

    #[test]
    fn embedded_multiplies_match_dense_products() {
        let layout = RegisterLayout::new(vec![("a".into(), 2), ("b".into(), 1)]).unwrap();
        let op = haar_random_unitary(2, 31).unwrap();
        let acc = haar_random_unitary(8, 32).unwrap();
        let dense = embed(&op, &layout, &["b"]).unwrap();
        let left = apply_embedded_left(&op, &layout, &["b"], &acc).unwrap();
        assert!(left.max_abs_diff(&dense.mul(&acc).unwrap()) < 1e-12);
        let right = apply_embedded_right(&acc, &op, &layout, &["b"]).unwrap();
        assert!(right.max_abs_diff(&acc.mul(&dense).unwrap()) < 1e-12);
        let v: Vec<C64> = (0..8).map(|i| C64::new(i as f64, -(i as f64) / 3.0)).collect();
        let applied = apply_embedded_to_vec(&op, &layout, &["b"], &v).unwrap();
        let expected = dense.mul_vec(&v).unwrap();
        for (x, y) in applied.iter().zip(&expected) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn partial_trace_preserves_trace_and_psd(seed in 0u64..1u64 << 48) {
            let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 2)]).unwrap();
            let rho = random_density(&layout, 8, seed).unwrap();
            let reduced = partial_trace(rho.matrix(), &layout, &["b"]).unwrap();
            prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(reduced.trace().im.abs() < 1e-12);
            let eig = eig_hermitian(&reduced).unwrap();
            prop_assert!(eig.values.iter().all(|&v| v >= -1e-10));
        }

        #[test]
        fn tensor_then_trace_scales_first_factor(seed in 0u64..1u64 << 48) {
            let la = RegisterLayout::single("a", 1).unwrap();
            let lb = RegisterLayout::single("b", 1).unwrap();
            let rho_a = random_density(&la, 2, seed).unwrap();
            let rho_b = random_density(&lb, 2, seed ^ 0x9e37).unwrap();
            // Scale the second factor so its trace is not one.
            let scaled_b = rho_b.matrix().scaled_real(0.7);
            let joint = tensor(rho_a.matrix(), &scaled_b).unwrap();
            let layout = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)]).unwrap();
            let reduced = partial_trace(&joint, &layout, &["b"]).unwrap();
            let expected = rho_a.matrix().scaled_real(0.7);
            prop_assert!(reduced.max_abs_diff(&expected) < 1e-10);
        }

        #[test]
        fn register_permutations_compose(seed in 0u64..1u64 << 48) {
            let layout = RegisterLayout::new(
                vec![("a".into(), 1), ("b".into(), 1), ("c".into(), 1)],
            ).unwrap();
            let op = haar_random_unitary(8, seed).unwrap();
            // Apply (a,b,c)->(c,a,b), then from that layout (c,a,b)->(b,c,a);
            // the composite must equal the direct permutation (a,b,c)->(b,c,a).
            let step1 = permute_registers(&op, &layout, &["c", "a", "b"]).unwrap();
            let mid = layout.reordered(&["c", "a", "b"]).unwrap();
            let step2 = permute_registers(&step1, &mid, &["b", "c", "a"]).unwrap();
            let direct = permute_registers(&op, &layout, &["b", "c", "a"]).unwrap();
            prop_assert!(step2.max_abs_diff(&direct) < 1e-12);
        }

        #[test]
        fn permutation_round_trips(seed in 0u64..1u64 << 48) {
            let layout = RegisterLayout::new(
                vec![("a".into(), 1), ("b".into(), 1), ("c".into(), 1)],
            ).unwrap();
            let op = haar_random_unitary(8, seed).unwrap();
            let there = permute_registers(&op, &layout, &["c", "a", "b"]).unwrap();
            let mid = layout.reordered(&["c", "a", "b"]).unwrap();
            let back = permute_registers(&there, &mid, &["a", "b", "c"]).unwrap();
            prop_assert!(back.max_abs_diff(&op) < 1e-12);
        }
    }
}
