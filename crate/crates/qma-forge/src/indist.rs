//! Numerical embodiment of the product-versus-maximally-entangled
//! indistinguishability facts: the uniform mixture of product basis states
//! and the uniform mixture of generalized Bell states are the same maximally
//! mixed operator, so no POVM separates the two families better than
//! guessing, and the product fidelity of any pure state never drops below
//! 1/sqrt(d), with equality exactly on the maximally entangled set.

use crate::error::{Error, Result};
use crate::linalg::{embed, ComplexMatrix, RegisterLayout};
use crate::report::CheckResult;
use crate::states::{
    bell_state, density_of, derive_seed, haar_random_pure, haar_random_unitary,
    nearest_product_state, DensityOperator, Povm,
};

fn pair_layout(d: usize) -> Result<RegisterLayout> {
    if !d.is_power_of_two() || d < 2 {
        return Err(Error::Index(format!("dimension {d} must be a power of two >= 2")));
    }
    let n = d.trailing_zeros() as usize;
    RegisterLayout::new(vec![("a".into(), n), ("b".into(), n)])
}

/// Uniform mixture over all product basis states |e_i⟩⟨e_i| ⊗ |e_j⟩⟨e_j|:
/// exactly I / d^2.
pub fn product_basis_mixture(d: usize) -> Result<DensityOperator> {
    let layout = pair_layout(d)?;
    let dim = d * d;
    let matrix = ComplexMatrix::diagonal(&vec![1.0 / dim as f64; dim])?;
    DensityOperator::new(layout, matrix)
}

/// Uniform mixture over the generalized Bell family; completeness of the
/// family makes it I / d^2 as well.
pub fn bell_mixture(d: usize) -> Result<DensityOperator> {
    let layout = pair_layout(d)?;
    let dim = d * d;
    let mut acc = ComplexMatrix::zeros(dim, dim)?;
    for k in 1..=d {
        for l in 1..=d {
            let g = bell_state(d, k, l)?;
            acc = acc.add(density_of(&g).matrix())?;
        }
    }
    DensityOperator::new(layout, acc.scaled_real(1.0 / (dim as f64)))
}

/// Misidentification probabilities of a binary POVM against the two
/// mixtures: (p01, p10) = (tr(M1 mix0), tr(M0 mix1)). Since both mixtures
/// equal I/d^2, p01 + p10 = 1 for every POVM: random guessing.
pub fn povm_error_pair(
    m: &Povm,
    mix0: &DensityOperator,
    mix1: &DensityOperator,
) -> Result<(f64, f64)> {
    if m.elements().len() != 2 {
        return Err(Error::Shape(format!(
            "need a binary POVM, got {} elements",
            m.elements().len()
        )));
    }
    if m.layout() != mix0.layout() || m.layout() != mix1.layout() {
        return Err(Error::Layout("POVM and mixtures must share a layout".into()));
    }
    let p01 = m.elements()[1].trace_product(mix0.matrix())?.re;
    let p10 = m.elements()[0].trace_product(mix1.matrix())?.re;
    Ok((p01, p10))
}

/// Random binary POVM {E, I - E} with E = W W† scaled to unit top eigenvalue.
pub fn random_binary_povm(layout: &RegisterLayout, seed: u64) -> Result<Povm> {
    let d = layout.dim();
    let w = haar_random_unitary(d, seed)?;
    // Conjugate a seeded diagonal in [0, 1] for a full-rank PSD contraction.
    let mut diag = Vec::with_capacity(d);
    for i in 0..d {
        diag.push((derive_seed(seed, i as u64) >> 11) as f64 / (1u64 << 53) as f64);
    }
    let e = w
        .mul(&ComplexMatrix::diagonal(&diag)?)?
        .mul(&w.adjoint())?
        .hermitized();
    let complement = ComplexMatrix::identity(d)?.sub(&e)?;
    Povm::new(layout.clone(), vec![e, complement])
}

/// Product-fidelity floor report: maximally entangled states achieve exactly
/// 1/sqrt(d), and no pure state goes below it.
#[derive(Clone, Debug)]
pub struct FloorReport {
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// For `trials` random maximally entangled states the nearest-product
/// fidelity must equal 1/sqrt(d) within 1e-9; for `trials` Haar-random pure
/// states it must be at least 1/sqrt(d) - 1e-9.
pub fn fidelity_floor_check(d: usize, trials: u64, seed: u64) -> Result<FloorReport> {
    let layout = pair_layout(d)?;
    let floor = 1.0 / (d as f64).sqrt();
    let base = bell_state(d, d, d)?;

    let mut max_deviation: f64 = 0.0;
    for t in 0..trials {
        // (U ⊗ I) applied to a Bell state spans the maximally entangled set.
        let u = haar_random_unitary(d, derive_seed(seed, t))?;
        let rotated = embed(&u, &layout, &["a"])?;
        let amplitudes = rotated.mul_vec(base.amplitudes())?;
        let psi = crate::states::PureState::normalized(layout.clone(), amplitudes)?;
        let (_, value) = nearest_product_state(&psi, &["a"])?;
        max_deviation = max_deviation.max((value - floor).abs());
    }

    let mut min_slack = f64::INFINITY;
    for t in 0..trials {
        let psi = haar_random_pure(&layout, derive_seed(seed ^ 0x5151, t))?;
        let (_, value) = nearest_product_state(&psi, &["a"])?;
        min_slack = min_slack.min(value - floor);
    }

    let checks = vec![
        CheckResult::within(
            "max |product fidelity - 1/sqrt(d)| over maximally entangled states",
            max_deviation,
            0.0,
            1e-9,
        ),
        CheckResult::at_least(
            "min (product fidelity - 1/sqrt(d)) over random pure states",
            min_slack,
            0.0,
            1e-9,
        ),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(FloorReport { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;
    use crate::states::PureState;

    #[test]
    fn product_mixture_is_maximally_mixed() {
        for d in [2usize, 4] {
            let mix = product_basis_mixture(d).unwrap();
            let expected = ComplexMatrix::diagonal(&vec![1.0 / (d * d) as f64; d * d]).unwrap();
            assert_eq!(mix.matrix().max_abs_diff(&expected), 0.0);
            assert!((mix.matrix().trace().re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bell_mixture_is_maximally_mixed() {
        for d in [2usize, 4] {
            let mix = bell_mixture(d).unwrap();
            let expected = ComplexMatrix::diagonal(&vec![1.0 / (d * d) as f64; d * d]).unwrap();
            assert!(
                mix.matrix().max_abs_diff(&expected) < 1e-12,
                "d={d}: deviation {}",
                mix.matrix().max_abs_diff(&expected)
            );
        }
    }

    #[test]
    fn mixtures_coincide() {
        for d in [2usize, 4] {
            let a = product_basis_mixture(d).unwrap();
            let b = bell_mixture(d).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn bell_family_gram_is_identity() {
        for d in [2usize, 4] {
            let mut states = Vec::new();
            for k in 1..=d {
                for l in 1..=d {
                    states.push(bell_state(d, k, l).unwrap());
                }
            }
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let overlap = a.inner(b).unwrap().norm();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((overlap - expected).abs() < 1e-12, "d={d} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn povm_error_pair_trivial_elements() {
        let layout = pair_layout(2).unwrap();
        let mix0 = product_basis_mixture(2).unwrap();
        let mix1 = bell_mixture(2).unwrap();
        let identity = ComplexMatrix::identity(4).unwrap();
        let zero = ComplexMatrix::zeros(4, 4).unwrap();
        let m = Povm::new(layout.clone(), vec![identity.clone(), zero]).unwrap();
        let (p01, p10) = povm_error_pair(&m, &mix0, &mix1).unwrap();
        assert!((p01 - 0.0).abs() < 1e-15);
        assert!((p10 - 1.0).abs() < 1e-15);

        let half = identity.scaled_real(0.5);
        let m = Povm::new(layout, vec![half.clone(), half]).unwrap();
        let (p01, p10) = povm_error_pair(&m, &mix0, &mix1).unwrap();
        assert!((p01 - 0.5).abs() < 1e-12);
        assert!((p10 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn random_povms_cannot_beat_guessing() {
        let layout = pair_layout(2).unwrap();
        let mix0 = product_basis_mixture(2).unwrap();
        let mix1 = bell_mixture(2).unwrap();
        for t in 0..100 {
            let m = random_binary_povm(&layout, derive_seed(40, t)).unwrap();
            let (p01, p10) = povm_error_pair(&m, &mix0, &mix1).unwrap();
            assert!((p01 + p10 - 1.0).abs() < 1e-10, "trial {t}: {}", p01 + p10);
        }
    }

    #[test]
    fn any_povm_element_has_equal_expectations_on_both_mixtures() {
        let layout = pair_layout(4).unwrap();
        let mix0 = product_basis_mixture(4).unwrap();
        let mix1 = bell_mixture(4).unwrap();
        for t in 0..20 {
            let m = random_binary_povm(&layout, derive_seed(41, t)).unwrap();
            for e in m.elements() {
                let a = e.trace_product(mix0.matrix()).unwrap().re;
                let b = e.trace_product(mix1.matrix()).unwrap().re;
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn floor_check_passes_at_small_dimensions() {
        for d in [2usize, 4] {
            let report = fidelity_floor_check(d, 25, 99).unwrap();
            assert!(report.pass, "d={d}: {:?}", report.checks);
        }
    }

    #[test]
    fn fixed_angle_state_has_cosine_fidelity() {
        // cos(pi/6)|00⟩ + sin(pi/6)|11⟩ has top Schmidt coefficient cos(pi/6).
        let layout = pair_layout(2).unwrap();
        let theta = std::f64::consts::PI / 6.0;
        let amps = vec![
            crate::linalg::C64::new(theta.cos(), 0.0),
            crate::linalg::C64::new(0.0, 0.0),
            crate::linalg::C64::new(0.0, 0.0),
            crate::linalg::C64::new(theta.sin(), 0.0),
        ];
        let psi = PureState::new(layout, amps).unwrap();
        let (_, value) = nearest_product_state(&psi, &["a"]).unwrap();
        assert!((value - theta.cos()).abs() < 1e-12);
        assert!(value > std::f64::consts::FRAC_1_SQRT_2);
    }

    #[test]
    fn minimum_fidelity_over_many_states_respects_floor() {
        let layout = pair_layout(2).unwrap();
        let mut min_value = f64::INFINITY;
        for t in 0..10_000u64 {
            let psi = haar_random_pure(&layout, derive_seed(123, t)).unwrap();
            let (_, value) = nearest_product_state(&psi, &["a"]).unwrap();
            min_value = min_value.min(value);
        }
        assert!(min_value >= std::f64::consts::FRAC_1_SQRT_2 - 1e-6);
    }

    #[test]
    fn mixture_spectra_are_flat() {
        let mix = bell_mixture(2).unwrap();
        let eig = eig_hermitian(mix.matrix()).unwrap();
        for v in eig.values {
            assert!((v - 0.25).abs() < 1e-13);
        }
    }
}
