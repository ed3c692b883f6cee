//! Default thresholds shared across the numeric code paths.

/// General certification tolerance (`--tol`).
pub const DEFAULT_TOL: f64 = 1e-10;

/// Reciprocal condition number below which `λ − H_S̄S̄` counts as singular.
pub const SHIFT_RCOND: f64 = 1e-12;

/// Relative pairing tolerance for multiset subtraction of spectra, times `1 + ‖H‖_max`.
pub const PAIRING_REL: f64 = 1e-8;

/// Relative singular-value cut for numerical nullspaces.
pub const NULLSPACE_REL: f64 = 1e-10;

/// Relative gap below which two eigenvalues of a symmetry are grouped, times `1 + ‖T‖_max`.
pub const GROUPING_REL: f64 = 1e-8;

/// Tolerance for eigenvector classification and sampled ISR commutators.
pub const EIGVEC_TOL: f64 = 1e-8;

/// Relative norm below which an orthogonalized Krylov vector counts as dependent, times `max(1, ‖H‖_∞)`.
pub const KRYLOV_RANK_REL: f64 = 1e-10;

/// Bound on the runtime checks of the lifting construction (orthogonality, vanishing on S).
pub const PROOF_CHECK: f64 = 1e-9;
