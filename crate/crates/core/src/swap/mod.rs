//! Entanglement swapping between two tripartite Gaussian states.
//!
//! Each site `k` holds a remote mode `a_k`, a Bell mode `b_k` sent to the
//! central station, and a certifying mode `c_k` also sent there. The station
//! mixes `b_1`, `b_2` on a balanced beam splitter and reads
//! `x_- = (x_b2 - x_b1)/sqrt 2` and `p_+ = (p_b2 + p_b1)/sqrt 2`.
//!
//! All closed forms in this module are written in terms of the rescaled
//! outcome `y = sqrt 2 Z (x_-, p_+)`, which as a random variable equals
//! `Z b_2 - b_1` and therefore has covariance `M = B_1 + Z B_2 Z`
//! (`Z = diag(1, -1)`). Its covariance with each kept mode is
//!
//! | mode  | `Cov(y, mode)` |
//! |-------|----------------|
//! | `a_1` | `-D_1^T`       |
//! | `a_2` | `Z D_2^T`      |
//! | `c_1` | `-E_1`         |
//! | `c_2` | `Z E_2`        |
//!
//! A gain matrix `G` displaces a kept mode as `q -> q - G^T y`; with this
//! convention unit-gain feed-forward is `G_a1 = diag(-1, 1)`,
//! `G_a2 = diag(1, 1)`, and likewise for the certifying modes.
//!
//! Output covariance matrices use the mode order `(a_1, a_2, c_1, c_2)`.

mod certify;
mod gains;
mod montecarlo;
mod output;
mod tripartite;

pub use certify::{
    chi, classify, inseparability_bound, purities_triplet, symmetric_closed_forms, ClosedForms,
    ProtocolClass, Purities, CLASSIFY_REL_TOL,
};
pub use gains::{displaced_first_moment, optimal_gains, BellOutcome, DisplacedMoment, GainMatrices};
pub use montecarlo::{monte_carlo_ensemble, BellOutcomeSampler, EnsembleEstimate};
pub use output::{bell_measurement_oracle, conditional_output_cm, ensemble_output_blocks, SwapOutput};
pub use tripartite::{bell_matrix, StandardFormParams, TripartiteCm, STANDARD_FORM_TOL};

use nalgebra::Matrix2;

/// `Z = diag(1, -1)`.
pub(crate) fn z() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// Smallest `|det M|` accepted before the Bell measurement counts as degenerate.
pub const SINGULAR_TOL: f64 = 1e-12;

/// `Cov(y, q)` for the four kept modes, in the order `(a_1, a_2, c_1, c_2)`.
pub(crate) fn outcome_correlations(v1: &TripartiteCm, v2: &TripartiteCm) -> [Matrix2<f64>; 4] {
    let z = z();
    [-v1.d.transpose(), z * v2.d.transpose(), -v1.e, z * v2.e]
}

pub(crate) fn inverse_bell_matrix(v1: &TripartiteCm, v2: &TripartiteCm) -> crate::Result<Matrix2<f64>> {
    let m = bell_matrix(v1, v2);
    let det = m.determinant();
    if det.abs() <= SINGULAR_TOL {
        return Err(crate::Error::SingularBellMatrix { det });
    }
    m.try_inverse().ok_or(crate::Error::SingularBellMatrix { det })
}
