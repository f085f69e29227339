//! Two-qubit entanglement, teleportation fidelity, and classical
//! correlation under amplitude damping, with weak-measurement /
//! reverse-weak-measurement protection.
//!
//! The library keeps two independent routes to every quantity: explicit
//! closed-form expressions and operational matrix pipelines. The `wmrwm`
//! module compares them; where a published closed form disagrees with the
//! matrix it was derived from, the matrix wins and the disagreement is
//! surfaced through the audit tooling in the CLI crate.
//!
//! Module map:
//! - [`cmatrix`]: dense complex matrices, Kronecker products, partial
//!   traces, a Jacobi Hermitian eigensolver, PSD square roots.
//! - [`qchannel`]: amplitude damping, weak measurement, reverse weak
//!   measurement, and their application to one qubit of a pair.
//! - [`qstate`]: validated density matrices, the closed-form states, and
//!   the Kraus pipeline builder.
//! - [`qmeasure`]: concurrence, fully entangled fraction, teleportation
//!   fidelity, entropies, mutual information, classical correlation.
//! - [`wmrwm`]: closed forms for protected states, the reverse-strength
//!   optimizer, per-grid-point assembly.
//! - [`teleportsim`]: protocol-level teleportation with Bell measurement
//!   and Pauli corrections, exact 2-design and Monte-Carlo averaging.
//!
//! All types are immutable values and every function is pure (Monte-Carlo
//! routines take explicit seeds), so everything can be shared freely across
//! threads.

pub mod cmatrix;
pub mod error;
pub mod optim;
pub mod qchannel;
pub mod qmeasure;
pub mod qstate;
pub mod teleportsim;
pub mod wmrwm;

pub use cmatrix::{CMatrix, EigDecomp, Qubit};
pub use error::{CoreError, Result};
pub use qchannel::{KrausChannel, LocalKraus};
pub use qmeasure::{BlochVector, CorrelationReport};
pub use qstate::{DensityMatrix, LocalOpStep, SelectiveOutcome};
pub use wmrwm::{OptResult, Scenario, ScenarioPoint, Variant};
