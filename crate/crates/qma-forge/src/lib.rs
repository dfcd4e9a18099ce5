//! qma-forge: a simulation and verification workbench for multi-proof
//! quantum Merlin-Arthur protocols over small, exactly simulable Hilbert
//! spaces.
//!
//! The crate builds verifier protocols as explicit unitary circuits over
//! named qubit registers, computes exact acceptance probabilities, optimizes
//! honest and adversarial provers (entangled and unentangled), and certifies
//! the protocol-level acceptance and soundness bounds numerically.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices over register layouts (tensor,
//!   partial trace, Hermitian eigendecomposition, PSD square root, Schmidt
//!   decomposition, register permutation, controlled gates).
//! - [`states`]: pure and mixed states, seeded Haar sampling, fidelity, the
//!   generalized Bell family, nearest-product-state extraction.
//! - [`verifier`]: the executable k-proof verifier model with acceptance
//!   probabilities and acceptance operators.
//! - [`protocols`]: verifier-to-verifier compilers (swap test, parallel
//!   amplification, proof-count reductions, proof concatenation, and the
//!   uniform-proof nondeterministic simulation).
//! - [`prover_opt`]: adversarial product-prover optimization (see-saw and
//!   brute force) plus soundness certificates.
//! - [`indist`]: the product-versus-maximally-entangled indistinguishability
//!   checks.
//! - [`report`] / [`experiments`]: machine-readable experiment reports and
//!   the named experiment runners behind the CLI.
//!
//! Everything is deterministic given an explicit 64-bit seed; parallel trials
//! partition seed space rather than sharing generators.

pub mod error;
pub mod experiments;
pub mod indist;
pub mod linalg;
pub mod protocols;
pub mod prover_opt;
pub mod report;
pub mod states;
pub mod verifier;

pub use error::{Error, Result};
