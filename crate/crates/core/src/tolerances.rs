//! Numerical tolerances shared by every module.
//!
//! Values are absolute unless noted. Inputs are normalized density matrices or
//! unitaries, so entries are O(1).

/// Hermiticity check on inputs to `eigh` and `DensityMatrix::new`.
pub const HERMITIAN: f64 = 1e-10;

/// Jacobi sweeps stop once every off-diagonal magnitude is below this.
pub const JACOBI_OFFDIAG: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Trace normalization of density matrices.
pub const TRACE: f64 = 1e-10;

/// Smallest eigenvalue tolerated in a density matrix.
pub const MIN_EIGENVALUE: f64 = -1e-9;

/// Partial-trace preservation and unitarity of single rotations.
pub const EXACT: f64 = 1e-12;

/// Energy residual for the β′ bisection.
pub const BETA_RESIDUAL: f64 = 1e-10;

/// Iteration cap shared by all bisections.
pub const BISECTION_MAX_ITERS: usize = 200;

/// Mutual information values in (-MI_CLAMP, 0) are clamped to zero.
pub const MI_CLAMP: f64 = 1e-9;

/// Spectrum preservation and work non-negativity for protocol outputs.
pub const SPECTRUM: f64 = 1e-9;

/// Upper end of the p-interval used by the threshold root finders.
pub const P_UPPER: f64 = 1.0 - 1e-12;

/// Maximum allowed residual of a reported threshold root.
pub const ROOT_RESIDUAL: f64 = 1e-9;

/// Feasibility slack for the energy constraint W ≤ ΔE.
pub const WORK_SLACK: f64 = 1e-9;

/// Negative circulant weights below this signal an infeasible plan.
pub const ALPHA_NEGATIVE: f64 = 1e-10;

/// Largest Hilbert dimension handled with dense matrices.
pub const MAX_DENSE_DIM: usize = 4096;
