//! Hidden quantum Markov model (HQMM) of the AKLT spin-1 chain.
//!
//! The hidden layer is a chain of virtual spin-1/2 systems driven by the
//! transition expectation `E_H(X ⊗ X') = V†(X ⊗ X')V`; the physical spin-1
//! chain is emitted through `E_{O,H}(X ⊗ Y) = W†(X ⊗ Y)W`, where `W` stacks
//! the AKLT tensors `A_k`. Everything is finite-horizon and dense, and every
//! quantity is cross-checked against a brute-force periodic MPS oracle.
//!
//! Module map:
//! - [`operators`]: complex matrices, partial traces, entropies, the fixed operator zoo
//! - [`channels`]: Kraus calculus, Choi matrices, CPTP checks, transfer spectra
//! - [`transitions`]: the isometries `V`, `W`, the projection `P`, `E_H`, `E_{O,H}`
//! - [`hqmm`]: the generative triplet, state evaluation, marginals, sampling
//! - [`oracle_mps`]: explicit AKLT state vector, Hamiltonian, correlators
//! - [`spt`]: symmetry representations, covariance, equivariance, D₂ index
//! - [`cli`]: the `aklt-hqmm` command-line surface

pub mod channels;
pub mod cli;
mod error;
pub mod hqmm;
pub mod io;
pub mod operators;
pub mod oracle_mps;
pub mod random;
pub mod spt;
pub mod transitions;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operators::ComplexMatrix;

/// Shared absolute tolerance for every check that does not state its own.
pub const TOLERANCE: f64 = 1e-10;
