//! Adversarial product-prover optimization: see-saw alternating eigenvector
//! iteration over one proof slot at a time, a brute-force oracle at tiny
//! dimensions, and soundness certificates combining the product search with
//! the entangled top-eigenvalue upper bound.
//!
//! The product maximization is nonconvex; nothing here claims global
//! optimality. Certificates distinguish "conclusive via the entangled bound"
//! from "lower bound only".

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, ComplexMatrix, HermitianEigen, RegisterLayout, C64};
use crate::states::{derive_seed, haar_random_pure, PureState};
use crate::verifier::{acceptance_operator, AcceptanceOperator, Verifier};

/// Joint dimension up to which the brute-force oracle is allowed to run.
pub const BRUTE_FORCE_DIM_LIMIT: usize = 64;

/// Search configuration for the product-prover optimization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductSearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub seed: u64,
    /// Samples for the brute-force cross-check inside certificates.
    pub brute_force_samples: u64,
}

impl ProductSearchConfig {
    pub fn new(restarts: usize, max_iterations: usize, convergence_tol: f64, seed: u64) -> Result<Self> {
        if restarts == 0 {
            return Err(Error::Hypothesis("need at least one restart".into()));
        }
        if convergence_tol <= 0.0 {
            return Err(Error::Hypothesis("convergence tolerance must be positive".into()));
        }
        Ok(Self { restarts, max_iterations, convergence_tol, seed, brute_force_samples: 1_000_000 })
    }
}

impl Default for ProductSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 200,
            convergence_tol: 1e-12,
            seed: 0,
            brute_force_samples: 1_000_000,
        }
    }
}

fn slot_strides(slot_dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; slot_dims.len()];
    for i in (0..slot_dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * slot_dims[i + 1];
    }
    strides
}

fn check_slot_dims(m: &AcceptanceOperator, slot_dims: &[usize]) -> Result<()> {
    if slot_dims.is_empty() {
        return Err(Error::Shape("need at least one slot".into()));
    }
    let product: usize = slot_dims.iter().product();
    if product != m.dim() {
        return Err(Error::Shape(format!(
            "slot dimensions multiply to {product}, operator dimension is {}",
            m.dim()
        )));
    }
    if slot_dims.iter().any(|d| !d.is_power_of_two()) {
        return Err(Error::Shape("slot dimensions must be powers of two".into()));
    }
    Ok(())
}

fn slot_layout(index: usize, dim: usize) -> RegisterLayout {
    RegisterLayout::single(&format!("m{}", index + 1), dim.trailing_zeros() as usize)
        .expect("power-of-two slot dimension")
}

/// Contract the acceptance operator against every proof except the one in
/// the hold-out slot, leaving a Hermitian operator on that slot whose
/// quadratic form equals the joint form.
pub fn effective_operator(
    m: &AcceptanceOperator,
    proofs: &[PureState],
    hold_out: usize,
) -> Result<ComplexMatrix> {
    let slot_dims: Vec<usize> = proofs.iter().map(|p| p.dim()).collect();
    check_slot_dims(m, &slot_dims)?;
    if hold_out >= proofs.len() {
        return Err(Error::Index(format!(
            "hold-out slot {hold_out} out of range for {} slots",
            proofs.len()
        )));
    }
    let strides = slot_strides(&slot_dims);
    let d = m.dim();
    let hold_dim = slot_dims[hold_out];
    let hold_stride = strides[hold_out];

    // Weight of each joint index from the non-held slots.
    let mut weights = vec![C64::new(1.0, 0.0); d];
    for (x, w) in weights.iter_mut().enumerate() {
        for (j, proof) in proofs.iter().enumerate() {
            if j == hold_out {
                continue;
            }
            let idx = (x / strides[j]) % slot_dims[j];
            *w *= proof.amplitudes()[idx];
        }
    }

    let mut out = ComplexMatrix::zeros(hold_dim, hold_dim)?;
    for x in 0..d {
        let a = (x / hold_stride) % hold_dim;
        let wx = weights[x].conj();
        if wx.re == 0.0 && wx.im == 0.0 {
            continue;
        }
        for y in 0..d {
            let entry = m.matrix().get(x, y);
            if entry.re == 0.0 && entry.im == 0.0 {
                continue;
            }
            let b = (y / hold_stride) % hold_dim;
            let add = wx * entry * weights[y];
            out.set(a, b, out.get(a, b) + add);
        }
    }
    Ok(out)
}

/// Deterministic top eigenvector: among eigenvectors within 1e-12 of the top
/// eigenvalue, pick the lexicographically largest phase-normalized column.
fn top_eigenvector(eig: &HermitianEigen) -> Vec<C64> {
    let top = eig.values[0];
    let mut best: Option<Vec<C64>> = None;
    for (i, &v) in eig.values.iter().enumerate() {
        if top - v > 1e-12 {
            break;
        }
        let column = eig.vectors.column(i);
        best = Some(match best {
            None => column,
            Some(cur) => {
                let ahead = column.iter().zip(&cur).find_map(|(a, b)| {
                    if (a.re - b.re).abs() > 1e-12 {
                        Some(a.re > b.re)
                    } else if (a.im - b.im).abs() > 1e-12 {
                        Some(a.im > b.im)
                    } else {
                        None
                    }
                });
                if ahead == Some(true) {
                    column
                } else {
                    cur
                }
            }
        });
    }
    best.expect("eigendecomposition of a nonempty matrix")
}

/// Result of a see-saw run.
#[derive(Clone, Debug)]
pub struct SeesawOutcome {
    /// Best product quadratic form found.
    pub value: f64,
    /// The maximizing product tuple.
    pub proofs: Vec<PureState>,
    /// Per-sweep objective of the winning restart.
    pub trace: Vec<f64>,
    /// Per-sweep objectives of every restart, in restart order.
    pub restart_traces: Vec<Vec<f64>>,
}

struct RestartResult {
    value: f64,
    proofs: Vec<PureState>,
    trace: Vec<f64>,
}

fn run_restart(
    m: &AcceptanceOperator,
    slot_dims: &[usize],
    init: Vec<PureState>,
    config: &ProductSearchConfig,
) -> Result<RestartResult> {
    let mut proofs = init;
    let mut trace = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    for _ in 0..config.max_iterations {
        for hold_out in 0..slot_dims.len() {
            let eff = effective_operator(m, &proofs, hold_out)?.hermitized();
            let eig = eig_hermitian(&eff)?;
            let column = top_eigenvector(&eig);
            proofs[hold_out] = PureState::normalized(slot_layout(hold_out, slot_dims[hold_out]), column)?;
        }
        let joint = joint_amplitudes(&proofs);
        let objective = m.quadratic_form(&joint)?;
        trace.push(objective);
        if (objective - previous).abs() < config.convergence_tol {
            break;
        }
        previous = objective;
    }
    let value = trace.last().copied().unwrap_or(0.0);
    Ok(RestartResult { value, proofs, trace })
}

fn joint_amplitudes(proofs: &[PureState]) -> Vec<C64> {
    let mut joint = vec![C64::new(1.0, 0.0)];
    for p in proofs {
        joint = linalg::tensor_vec(&joint, p.amplitudes());
    }
    joint
}

/// Marginal start: the top eigenvector of each slot's partial trace of
/// M / tr(M).
fn marginal_start(m: &AcceptanceOperator, slot_dims: &[usize]) -> Result<Vec<PureState>> {
    let trace = m.matrix().trace().re;
    let mut registers = Vec::new();
    for (i, d) in slot_dims.iter().enumerate() {
        registers.push((format!("m{}", i + 1), d.trailing_zeros() as usize));
    }
    let layout = RegisterLayout::new(registers)?;
    let mut proofs = Vec::with_capacity(slot_dims.len());
    for (i, &dim) in slot_dims.iter().enumerate() {
        if trace < 1e-14 {
            proofs.push(PureState::basis(slot_layout(i, dim), 0)?);
            continue;
        }
        let name = format!("m{}", i + 1);
        let others: Vec<String> = (0..slot_dims.len())
            .filter(|&j| j != i)
            .map(|j| format!("m{}", j + 1))
            .collect();
        let other_refs: Vec<&str> = others.iter().map(|s| s.as_str()).collect();
        let scaled = m.matrix().scaled_real(1.0 / trace);
        let marginal = linalg::partial_trace(&scaled, &layout, &other_refs)?.hermitized();
        let eig = eig_hermitian(&marginal)?;
        let _ = name;
        proofs.push(PureState::normalized(slot_layout(i, dim), top_eigenvector(&eig))?);
    }
    Ok(proofs)
}

/// Alternating maximization over one proof slot at a time. Each step
/// replaces one proof by the top eigenvector of its effective operator, so
/// the objective never decreases. Deterministic given the seed; restarts run
/// in parallel and merge by maximum value (earliest restart wins ties).
pub fn seesaw(
    m: &AcceptanceOperator,
    slot_dims: &[usize],
    config: &ProductSearchConfig,
) -> Result<SeesawOutcome> {
    check_slot_dims(m, slot_dims)?;
    if config.restarts == 0 {
        return Err(Error::Hypothesis("need at least one restart".into()));
    }
    let inits: Vec<Vec<PureState>> = (0..config.restarts)
        .map(|r| -> Result<Vec<PureState>> {
            if r == 0 {
                marginal_start(m, slot_dims)
            } else {
                slot_dims
                    .iter()
                    .enumerate()
                    .map(|(i, &dim)| {
                        haar_random_pure(
                            &slot_layout(i, dim),
                            derive_seed(config.seed, (r * slot_dims.len() + i) as u64),
                        )
                    })
                    .collect()
            }
        })
        .collect::<Result<_>>()?;

    let results: Vec<Result<RestartResult>> = inits
        .into_par_iter()
        .map(|init| run_restart(m, slot_dims, init, config))
        .collect();
    let mut restarts = Vec::with_capacity(results.len());
    for r in results {
        restarts.push(r?);
    }
    let best = restarts
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.value
                .partial_cmp(&b.value)
                .expect("objectives are finite")
                .then(ib.cmp(ia))
        })
        .map(|(i, _)| i)
        .expect("at least one restart");
    let winner = &restarts[best];
    Ok(SeesawOutcome {
        value: winner.value,
        proofs: winner.proofs.clone(),
        trace: winner.trace.clone(),
        restart_traces: restarts.iter().map(|r| r.trace.clone()).collect(),
    })
}

/// Max quadratic form over seeded Haar product tuples plus every
/// computational-basis product tuple: a certified lower bound on the product
/// maximum. Doubling `samples` with the same seed never decreases the result.
pub fn brute_force_product(
    m: &AcceptanceOperator,
    slot_dims: &[usize],
    samples: u64,
    seed: u64,
) -> Result<f64> {
    check_slot_dims(m, slot_dims)?;
    if m.dim() > BRUTE_FORCE_DIM_LIMIT {
        return Err(Error::SizeLimit {
            amplitudes: m.dim() as u128,
            budget: BRUTE_FORCE_DIM_LIMIT as u128,
        });
    }
    // Basis product tuples are exactly the diagonal entries.
    let mut best: f64 = 0.0;
    for x in 0..m.dim() {
        best = best.max(m.matrix().get(x, x).re);
    }
    let k = slot_dims.len() as u64;
    let chunk = 8192u64;
    let chunk_count = samples.div_ceil(chunk);
    let sampled_best = (0..chunk_count)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(samples);
            let mut local: f64 = 0.0;
            for i in lo..hi {
                let proofs: Vec<PureState> = slot_dims
                    .iter()
                    .enumerate()
                    .map(|(j, &dim)| {
                        haar_random_pure(&slot_layout(j, dim), derive_seed(seed, i * k + j as u64))
                            .expect("slot layout is valid")
                    })
                    .collect();
                let joint = joint_amplitudes(&proofs);
                let value = m.quadratic_form(&joint).expect("dimensions checked");
                local = local.max(value);
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(best.max(sampled_best))
}

/// Which bound certifies (or fails to certify) the claimed threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundUsed {
    /// The entangled optimum is already at or below the threshold.
    Entangled,
    /// Only the product lower bound is available; the verdict is not
    /// conclusive for the supremum.
    ProductLowerBound,
}

/// Certificate for the adversarial acceptance supremum of a verifier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoundnessCertificate {
    pub product_lower_bound: f64,
    pub entangled_upper_bound: f64,
    pub conclusive: bool,
    pub bound_used: BoundUsed,
    pub threshold: f64,
    pub restarts: usize,
    pub seed: u64,
}

/// Certify (or refuse to certify) that no proof tuple is accepted with
/// probability above `threshold`.
///
/// If the entangled optimum is at most the threshold the certificate is
/// conclusive. Otherwise the best product strategy found is reported as a
/// lower bound; when the joint dimension is within the brute-force oracle
/// scale the search cross-checks see-saw against seeded sampling.
pub fn certify_soundness(
    v: &Verifier,
    slot_dims: &[usize],
    threshold: f64,
    config: &ProductSearchConfig,
) -> Result<SoundnessCertificate> {
    let m = acceptance_operator(v)?;
    check_slot_dims(&m, slot_dims)?;
    let entangled_upper_bound = m.lambda_max()?.clamp(0.0, 1.0);
    let search = seesaw(&m, slot_dims, config)?;
    let mut product_lower_bound = search.value;
    if m.dim() <= BRUTE_FORCE_DIM_LIMIT && config.brute_force_samples > 0 {
        let sampled = brute_force_product(&m, slot_dims, config.brute_force_samples, config.seed)?;
        product_lower_bound = product_lower_bound.max(sampled);
    }
    if product_lower_bound > entangled_upper_bound + 1e-9 {
        return Err(Error::Contract(format!(
            "product bound {product_lower_bound} exceeds entangled bound {entangled_upper_bound}"
        )));
    }
    let conclusive = entangled_upper_bound <= threshold;
    Ok(SoundnessCertificate {
        product_lower_bound,
        entangled_upper_bound,
        conclusive,
        bound_used: if conclusive { BoundUsed::Entangled } else { BoundUsed::ProductLowerBound },
        threshold,
        restarts: config.restarts,
        seed: config.seed,
    })
}
