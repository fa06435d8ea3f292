use nalgebra::{DMatrix, Matrix2, Matrix4};

use super::{inverse_bell_matrix, outcome_correlations, GainMatrices, TripartiteCm};
use crate::error::{Error, Result};
use crate::gaussian::{log_negativity_from_eta, min_pts_eigenvalue, Bipartition, GaussianState, Quadrature};

/// Swapped four-mode state in the order `(a_1, a_2, c_1, c_2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutput {
    /// Remote pair `(a_1, a_2)`.
    pub remote: Matrix4<f64>,
    /// Certifying pair `(c_1, c_2)`.
    pub certifying: Matrix4<f64>,
    /// Cross covariances `Cov((a_1, a_2), (c_1, c_2))`.
    pub cross: Matrix4<f64>,
    pub eta_remote: f64,
    pub eta_certifying: f64,
    pub log_neg_remote: f64,
    pub log_neg_certifying: f64,
}

impl SwapOutput {
    fn from_blocks(remote: Matrix4<f64>, certifying: Matrix4<f64>, cross: Matrix4<f64>) -> Result<Self> {
        let bp = Bipartition::two_mode();
        let eta_remote = min_pts_eigenvalue(&to_dmatrix(&remote), &bp)?;
        let eta_certifying = min_pts_eigenvalue(&to_dmatrix(&certifying), &bp)?;
        Ok(Self {
            remote,
            certifying,
            cross,
            eta_remote,
            eta_certifying,
            log_neg_remote: log_negativity_from_eta(eta_remote),
            log_neg_certifying: log_negativity_from_eta(eta_certifying),
        })
    }

    /// The assembled 8x8 covariance matrix.
    pub fn cm(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(8, 8);
        m.view_mut((0, 0), (4, 4)).copy_from(&self.remote);
        m.view_mut((0, 4), (4, 4)).copy_from(&self.cross);
        m.view_mut((4, 0), (4, 4)).copy_from(&self.cross.transpose());
        m.view_mut((4, 4), (4, 4)).copy_from(&self.certifying);
        m
    }
}

pub(crate) fn to_dmatrix(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |r, c| m[(r, c)])
}

/// Unconditioned covariance blocks of the kept modes `(a_1, a_2, c_1, c_2)`.
fn kept_blocks(v1: &TripartiteCm, v2: &TripartiteCm) -> [[Matrix2<f64>; 4]; 4] {
    let zero = Matrix2::zeros();
    [
        [v1.r, zero, v1.f, zero],
        [zero, v2.r, zero, v2.f],
        [v1.f.transpose(), zero, v1.c, zero],
        [zero, v2.f.transpose(), zero, v2.c],
    ]
}

fn assemble(blocks: &[[Matrix2<f64>; 4]; 4], rows: [usize; 2], cols: [usize; 2]) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| blocks[rows[r / 2]][cols[c / 2]][(r % 2, c % 2)])
}

fn split(blocks: &[[Matrix2<f64>; 4]; 4]) -> (Matrix4<f64>, Matrix4<f64>, Matrix4<f64>) {
    (
        assemble(blocks, [0, 1], [0, 1]),
        assemble(blocks, [2, 3], [2, 3]),
        assemble(blocks, [0, 1], [2, 3]),
    )
}

fn check_physical(v: &TripartiteCm, which: &str) -> Result<()> {
    let report = v.to_state().validate();
    if !report.is_valid() {
        return Err(Error::Unphysical(format!(
            "{which} input: min eigenvalue {:e}, symmetry defect {:e}",
            report.min_eigenvalue, report.symmetry_defect
        )));
    }
    Ok(())
}

/// Covariance matrix of the conditional (equivalently, optimally displaced)
/// output state: `V_qr - Cov(y, q)^T M^{-1} Cov(y, r)` for kept modes `q, r`.
///
/// Written out, the remote block is
///
/// ```text
/// [ R_1 - D_1 M^-1 D_1^T      D_1 M^-1 Z D_2^T       ]
/// [ D_2 Z M^-1 D_1^T          R_2 - D_2 Z M^-1 Z D_2^T ]
/// ```
///
/// and the certifying and cross blocks follow with `E` (transposed) and `F`.
pub fn conditional_output_cm(v1: &TripartiteCm, v2: &TripartiteCm) -> Result<SwapOutput> {
    check_physical(v1, "first")?;
    check_physical(v2, "second")?;
    let m_inv = inverse_bell_matrix(v1, v2)?;
    let w = outcome_correlations(v1, v2);
    let mut blocks = kept_blocks(v1, v2);
    for (i, row) in blocks.iter_mut().enumerate() {
        for (j, blk) in row.iter_mut().enumerate() {
            *blk -= w[i].transpose() * m_inv * w[j];
        }
    }
    let (remote, certifying, cross) = split(&blocks);
    SwapOutput::from_blocks(remote, certifying, cross)
}

/// Remote and certifying blocks of the outcome-averaged state for arbitrary
/// gains: `V_qr + G_q^T M G_r - G_q^T Cov(y, r) - Cov(y, q)^T G_r`.
///
/// The cross block of the ensemble is deliberately not exposed here; the
/// Monte Carlo estimator covers it.
pub fn ensemble_output_blocks(
    v1: &TripartiteCm,
    v2: &TripartiteCm,
    gains: &GainMatrices,
) -> (Matrix4<f64>, Matrix4<f64>) {
    let m = super::bell_matrix(v1, v2);
    let w = outcome_correlations(v1, v2);
    let g = gains.as_array();
    let mut blocks = kept_blocks(v1, v2);
    for (i, row) in blocks.iter_mut().enumerate() {
        for (j, blk) in row.iter_mut().enumerate() {
            *blk += g[i].transpose() * m * g[j] - g[i].transpose() * w[j] - w[i].transpose() * g[j];
        }
    }
    let (remote, certifying, _) = split(&blocks);
    (remote, certifying)
}

/// Index of each site's modes in the joint state `V_1 (+) V_2`.
const B1: usize = 1;
const B2: usize = 4;

/// The Bell measurement done step by step on `V_1 (+) V_2` with the generic
/// Gaussian operations: beam splitter on `b_1, b_2`, homodyne `x` on the minus
/// port, homodyne `p` on the plus port. Returns the conditional state of
/// `(a_1, a_2, c_1, c_2)` for the given outcome.
pub fn bell_measurement_oracle(
    v1: &TripartiteCm,
    v2: &TripartiteCm,
    outcome: &super::BellOutcome,
) -> Result<GaussianState> {
    let joint = v1.to_state().direct_sum(&v2.to_state());
    let mixed = joint.beam_splitter(B1, B2)?;
    oracle_condition(&mixed, outcome)
}

/// Conditions an already beam-split joint state (plus port on mode 1, minus
/// port on mode 4).
pub(crate) fn oracle_condition(mixed: &GaussianState, outcome: &super::BellOutcome) -> Result<GaussianState> {
    let after_x = mixed.homodyne_condition_on(B2, Quadrature::X, outcome.x_minus)?;
    // Mode 4 is gone; the plus port is still mode 1. Remaining: a1, c1, a2, c2.
    let after_p = after_x.homodyne_condition_on(B1, Quadrature::P, outcome.p_plus)?;
    after_p.partial_trace(&[0, 2, 1, 3])
}
