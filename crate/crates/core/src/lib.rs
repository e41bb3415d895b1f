//! Measurement-modified quantum tunneling on a flux-threaded ring.
//!
//! A single defect dot couples to one site of a 2N-site tight-binding ring
//! threaded by a dimensionless flux. This crate computes how repeated
//! projective measurement reshapes the dot's decay: exact single-excitation
//! unitary dynamics ([`dynamics`]), the second-order measurement-modified
//! rate formulas with their literal published variants ([`rates`]), the
//! flux-free boson counterparts for Fock and coherent preparations
//! ([`boson`]), Zeno / anti-Zeno classification and phase maps over control
//! parameters ([`zeno`]), and a deterministic CLI with a self-verification
//! suite ([`cli`]).
//!
//! hbar = 1 everywhere: energies and rates share one inverse-time unit.

pub mod boson;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;
pub mod rates;
pub mod zeno;

pub use error::{Error, Result};
pub use model::{Statistics, SystemParams};
