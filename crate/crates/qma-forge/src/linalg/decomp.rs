//! Hermitian eigendecomposition, PSD square root, and Schmidt decomposition.
//!
//! The numerical kernels are nalgebra's; this module owns the contracts
//! (tolerances, ordering, phase conventions) the rest of the crate relies on.

use nalgebra::DMatrix;

use super::{permute_state, ComplexMatrix, RegisterLayout, C64, CONTRACT_TOL};
use crate::error::{Error, Result};

/// Eigenvalues below this magnitude are clamped to zero inside psd_sqrt.
pub(crate) const PSD_CLAMP_TOL: f64 = 1e-10;

pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

/// Multiply a column by a phase so its first significant component is real
/// and nonnegative. Keeps eigenvector output deterministic.
fn normalize_phase(column: &mut [C64]) {
    if let Some(lead) = column.iter().find(|z| z.norm() > 1e-12) {
        let phase = lead.conj() / lead.norm();
        for z in column.iter_mut() {
            *z *= phase;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// The input is symmetrized as (H + H†)/2 before decomposition; inputs that
/// are not Hermitian within 1e-10 are rejected.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::Shape("eigendecomposition needs a square matrix".into()));
    }
    if !h.is_hermitian(CONTRACT_TOL) {
        return Err(Error::Contract("matrix is not Hermitian within 1e-10".into()));
    }
    let sym = h.hermitized();
    let eig = to_nalgebra(&sym).symmetric_eigen();
    let d = h.rows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues of a Hermitian matrix are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(d, d)?;
    for (col, &src) in order.iter().enumerate() {
        let mut column: Vec<C64> = (0..d).map(|i| eig.eigenvectors[(i, src)]).collect();
        normalize_phase(&mut column);
        for (i, z) in column.into_iter().enumerate() {
            vectors.set(i, col, z);
        }
    }
    Ok(HermitianEigen { values, vectors })
}

impl HermitianEigen {
    /// Rebuild sum_i f(lambda_i) v_i v_i†.
    pub fn rebuild_with(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let d = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(d, d)?;
        for (m, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                let vi = self.vectors.get(i, m);
                if vi.re == 0.0 && vi.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    let add = vi * self.vectors.get(j, m).conj() * w;
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        Ok(out)
    }
}

/// Positive semidefinite square root.
///
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is a
/// not-PSD error.
pub fn psd_sqrt(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(rho)?;
    if let Some(&min) = eig.values.last() {
        if min < -PSD_CLAMP_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    eig.rebuild_with(|lambda| if lambda <= 0.0 { 0.0 } else { lambda.sqrt() })
}

pub struct Schmidt {
    /// Nonnegative coefficients in descending order.
    pub coefficients: Vec<f64>,
    /// Vectors on the cut side, one column per coefficient.
    pub left: ComplexMatrix,
    /// Vectors on the complementary side, one column per coefficient.
    pub right: ComplexMatrix,
}

/// Schmidt decomposition of a pure state across `cut` versus the rest.
///
/// The cut must be a nonempty proper subset of the layout's registers. The
/// state reconstructs as sum_i alpha_i |left_i> ⊗ |right_i> with the cut
/// registers listed first (in layout order), then the remaining registers.
pub fn schmidt(layout: &RegisterLayout, amplitudes: &[C64], cut: &[&str]) -> Result<Schmidt> {
    let names = layout.names();
    let cut_names: Vec<&str> = names.iter().copied().filter(|n| cut.contains(n)).collect();
    for c in cut {
        if !layout.contains(c) {
            return Err(Error::Cut(format!("unknown register '{c}' in cut")));
        }
    }
    if cut_names.is_empty() || cut_names.len() == names.len() {
        return Err(Error::Cut("cut must be a nonempty proper subset of registers".into()));
    }
    let rest: Vec<&str> = names.iter().copied().filter(|n| !cut.contains(n)).collect();
    let order: Vec<&str> = cut_names.iter().chain(rest.iter()).copied().collect();
    let fronted = permute_state(amplitudes, layout, &order)?;

    let left_qubits = layout.qubit_positions_of(&cut_names)?.len();
    let dl = 1usize << left_qubits;
    let dr = fronted.len() / dl;

    let a = DMatrix::from_fn(dl, dr, |l, r| fronted[l * dr + r]);
    let svd = a.svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let k = svd.singular_values.len();

    let mut order_idx: Vec<usize> = (0..k).collect();
    order_idx.sort_by(|&x, &y| {
        svd.singular_values[y]
            .partial_cmp(&svd.singular_values[x])
            .expect("singular values are finite")
    });

    let coefficients: Vec<f64> = order_idx.iter().map(|&m| svd.singular_values[m]).collect();
    let mut left = ComplexMatrix::zeros(dl, k)?;
    let mut right = ComplexMatrix::zeros(dr, k)?;
    for (col, &m) in order_idx.iter().enumerate() {
        let mut lcol: Vec<C64> = (0..dl).map(|i| u[(i, m)]).collect();
        // A = U Σ V_t exactly as returned; rotate the pair phase so the left
        // vector is deterministic and the product is unchanged.
        let mut rcol: Vec<C64> = (0..dr).map(|j| v_t[(m, j)]).collect();
        if let Some(lead) = lcol.iter().find(|z| z.norm() > 1e-12) {
            let phase = lead.conj() / lead.norm();
            for z in lcol.iter_mut() {
                *z *= phase;
            }
            let inv = phase.conj();
            for z in rcol.iter_mut() {
                *z *= inv;
            }
        }
        for (i, z) in lcol.into_iter().enumerate() {
            left.set(i, col, z);
        }
        for (j, z) in rcol.into_iter().enumerate() {
            right.set(j, col, z);
        }
    }
    Ok(Schmidt { coefficients, left, right })
}
