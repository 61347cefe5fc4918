//! Numerics for time-covariant quantum channels.
//!
//! A channel that commutes with the time evolution of a non-degenerate
//! Hamiltonian `H = diag(ω₁, …, ωₙ)` splits canonically into energy-shift
//! sectors, `G(ρ) = Σ_σ S_σ (M_σ ∗ ρ) S_σ†`, where `S_σ` is a partial shift
//! and `M_σ` a positive dephasing mask. This crate extracts that
//! decomposition, evaluates the coherent-information bound for Hadamard
//! channels, analyses channels with reliable timing, and decomposes the
//! single-mode Gaussian displacement channel into Laguerre masks.

pub mod capacity;
pub mod covariant;
pub mod error;
pub mod fock;
pub mod io;
pub mod matcore;
pub mod random;
pub mod timing;

pub use error::{Error, Result};
pub use matcore::{CMatrix, CVector, Channel, ChoiMatrix, DensityMatrix, Tolerances};
