//! Gaussian-state algebra in the quadrature convention `x_1, p_1, ..., x_N, p_N`.
//!
//! Units are fixed throughout: `[x, p] = i`, so the vacuum covariance matrix is
//! `I/2`, a state is separable across a cut only if its minimum partially
//! transposed symplectic eigenvalue is at least `1/2`, and the logarithmic
//! negativity is `max(0, -ln 2 eta)`.

mod entanglement;
mod ops;
mod state;
mod symplectic;
pub mod textio;

pub use entanglement::{
    log_negativity, log_negativity_from_eta, min_pts_eigenvalue, partial_transpose,
    two_mode_min_pts_eigenvalue, Bipartition,
};
pub use ops::Quadrature;
pub use state::{purity_of_cm, validate_cm, GaussianState, ValidityReport};
pub use symplectic::{symplectic_eigenvalues, SymplecticForm};

/// Smallest allowed eigenvalue of `V + iJ/2` for a state to count as physical.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Relative symmetry tolerance (scaled by the largest entry, floored at one).
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Measured-quadrature variances below this are rejected by homodyne conditioning.
pub const DEGENERACY_TOL: f64 = 1e-14;

pub(crate) fn max_abs(m: &nalgebra::DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}
