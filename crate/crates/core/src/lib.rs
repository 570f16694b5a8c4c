//! Qudit stabilizer algebra over `Z_D` and the prime-power reduction of
//! stabilizer AME states.
//!
//! The crate is organised bottom-up:
//!
//! - [`ring`]: factorization, CRT split/combine, idempotents, Smith normal form.
//! - [`pauli`]: the phase-tracked Weyl-Heisenberg group `λ^γ X^x Z^z`.
//! - [`stabgroup`]: validity of generator lists, enumeration, Sylow components
//!   and their projection onto a prime-power factor.
//! - [`statevec`]: dense states, partial traces and the dense AME check.
//! - [`ame`]: symbolic AME check, CRT relabeling, decomposition and merging.
//! - [`search`]: exhaustive graph-state search.
//! - [`nogo`]: no-go propagation tables (CSV and SVG).
//! - [`cli`]: the batch commands behind the `qudit-ame` binary.
//!
//! Conventions: `ω = e^{2πi/D}`, `λ = e^{iπ/D}`, `X = Σ|j⟩⟨j+1|`,
//! `Z = Σ ω^j |j⟩⟨j|`. Parties are indexed from 0 and basis states are
//! party-major (party 0 is the most significant digit).

pub mod ame;
pub mod cli;
pub mod construct;
mod error;
pub mod nogo;
pub mod pauli;
pub mod ring;
pub mod search;
pub mod stabgroup;
pub mod statevec;

pub use error::{Error, Result};
pub use pauli::PauliProduct;
pub use ring::{factorize, PrimePowerFactorization};
pub use stabgroup::{StabilizerGroup, ValidityReport};
pub use statevec::DenseState;

/// Tolerance for equality of states (fidelity) and maximal mixedness.
pub const STATE_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities between dense matrices.
pub const ALGEBRA_TOL: f64 = 1e-12;
