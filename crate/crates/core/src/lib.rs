//! Quantum-memory-assisted entropic uncertainty bounds and the correlation
//! measures that compete under them.
//!
//! The crate is organised in layers:
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`linalg`] | dense complex matrices, Hermitian eigendecomposition, tensor products, partial trace, purification |
//! | [`entropy`] | von Neumann / conditional entropy, post-measurement states, the memory-assisted uncertainty bound |
//! | [`correlations`] | classical correlation J, quantum discord D, entanglement of formation and assistance, one-way unlocalizable duals |
//! | [`states`] | constructors for the named state families plus seeded Haar sampling |
//! | [`theorems`] | runtime audits of the identities and inequalities tying the above together |
//!
//! All entropies are in bits (base-2 logarithms). Subsystem 0 is always the
//! most significant tensor factor, and measurements act on subsystem 0 unless
//! stated otherwise; callers permute subsystems first when they need a
//! different party measured.

pub mod correlations;
pub mod entropy;
pub mod error;
pub mod fmt;
pub mod linalg;
pub(crate) mod optimize;
pub mod states;
pub mod theorems;
pub mod tolerances;

pub use correlations::{
    classical_correlation, concurrence, conditional_entropy_after_measurement,
    correlation_report, entanglement_of_assistance, entanglement_of_formation,
    quantum_discord, unlocalizable_discord, unlocalizable_entanglement, CorrelationReport,
    MeasurementBasis, OptimizerResult, ToleranceTier,
};
pub use entropy::{
    binary_entropy, conditional_entropy, mutual_information, post_measurement_state,
    uncertainty_report, von_neumann_entropy, ObservablePair, UncertaintyReport,
};
pub use error::{Error, Result};
pub use linalg::{eigh, purify, tensor, ComplexMatrix, DensityMatrix, Eigh, HilbertSpace, PureState};
pub use states::{
    bell, factorized, ghz, qubit_qudit_example, sample_haar_pure, sample_haar_pure_stream,
    sample_random_mixed, sample_random_mixed_stream, w_marginal, w_purification, w_state,
    werner, BuiltState, FactorizedState, StateFamily, StateSpec,
};
pub use theorems::{
    audit_claim, audit_random_batch, check_factorization_case, detect_crossing,
    find_werner_threshold, find_werner_threshold_with_tolerance, sweep_w_family, AuditInput,
    BatchSummary, ClaimId, ClaimResult, SweepPoint, WernerThreshold,
};
