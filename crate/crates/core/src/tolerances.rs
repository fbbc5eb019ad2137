//! Tolerance tiers used across the crate.
//!
//! Two tiers cover everything: `TAU_EXACT` for closed-form quantities
//! (entropies, two-qubit entanglement of formation, state invariants) and
//! `TAU_OPT` for anything that contains a measurement optimization. Identities
//! mixing both inherit the looser tier.

/// Closed-form tier: entropies, spectra, state invariants.
pub const TAU_EXACT: f64 = 1e-9;

/// Optimizer tier: values produced by the measurement search and identities
/// built from them.
pub const TAU_OPT: f64 = 2e-3;

/// Eigenvalues of density matrices in `[-EIG_CLIP, 0)` are clipped to zero on
/// read; anything below is a hard error.
pub const EIG_CLIP: f64 = 1e-10;

/// Eigenvalues below this threshold do not contribute a purification ancilla
/// dimension.
pub const PURIFY_RANK_CUTOFF: f64 = 1e-12;

/// Measurement outcomes with probability below this contribute zero to
/// conditional entropies.
pub const OUTCOME_PROB_CUTOFF: f64 = 1e-12;

/// Eigendecomposition and purification round-trip reconstruction tolerance.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Slack floor for the memory-assisted uncertainty bound audit.
pub const UNCERTAINTY_SLACK_TOL: f64 = 1e-7;

/// Largest total dimension accepted by user-facing space and state
/// constructors. Purifying ancillas may exceed this internally.
pub const MAX_REGISTERED_DIM: usize = 64;
