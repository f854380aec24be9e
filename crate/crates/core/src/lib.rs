//! Quantum Fisher information for states evolving under non-Hermitian
//! Hamiltonians, via the projective-Hilbert-space decomposition
//! |Ψ⟩ = e^{α+iβ}|ψ⟩.
//!
//! The crate is organized around a dual-route discipline: every structured
//! formula (closed forms, generator expressions, spectral sums) is paired
//! with an independent finite-difference oracle in [`oracle`], and the
//! [`check`] suite pins their agreement — or, for two formulas transcribed
//! verbatim from their source with known typos, their documented,
//! reproducible disagreement.
//!
//! - [`hilbert`]: the e^{α+iβ} decomposition and mixed-state spectral data.
//! - [`qfi`]: pure/mixed, Hermitian/non-Hermitian, direct and generator
//!   forms of the QFI, plus the Cramér–Rao bound.
//! - [`pseudo_hermitian`]: the dilated two-qubit sensor and its F_x curves.
//! - [`pt_symmetric`]: the PT qubit across unbroken/broken/EP regimes.
//! - [`oracle`]: expm, finite differences, the spectral QFI reference, and
//!   a Monte Carlo Cramér–Rao validator.

pub mod check;
pub mod error;
pub mod family;
pub mod hilbert;
pub mod linalg;
pub mod oracle;
pub mod pseudo_hermitian;
pub mod pt_symmetric;
pub mod qfi;
pub mod sweep;

pub use error::{Error, Result};
pub use family::{DensityFamily, OperatorFamily, StateFamily};
pub use hilbert::{MixedState, ProjectiveDecomposition};
pub use linalg::{CMatrix, CVector};
pub use qfi::{GeneratorContext, QfiMethod, QfiReport};
pub use sweep::SweepRecord;
