use nalgebra::{DMatrix, Matrix2, SVector, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::output::oracle_condition;
use super::{BellOutcome, GainMatrices, TripartiteCm};
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;

/// Seeded stream of Bell-measurement outcomes drawn from their marginal
/// distribution, a zero-mean Gaussian in `(x_-, p_+)`.
pub struct BellOutcomeSampler {
    cholesky: Matrix2<f64>,
    covariance: Matrix2<f64>,
    rng: ChaCha8Rng,
}

impl BellOutcomeSampler {
    pub fn new(v1: &TripartiteCm, v2: &TripartiteCm, seed: u64) -> Result<Self> {
        let mixed = v1.to_state().direct_sum(&v2.to_state()).beam_splitter(1, 4)?;
        Self::from_mixed(&mixed, seed)
    }

    fn from_mixed(mixed: &GaussianState, seed: u64) -> Result<Self> {
        // x of the minus port (mode 4) and p of the plus port (mode 1).
        let (ix, ip) = (8, 3);
        let cm = mixed.cm();
        let covariance = Matrix2::new(cm[(ix, ix)], cm[(ix, ip)], cm[(ip, ix)], cm[(ip, ip)]);
        let cholesky = covariance
            .cholesky()
            .ok_or_else(|| Error::Unphysical("Bell outcome covariance is not positive definite".into()))?
            .l();
        Ok(Self { cholesky, covariance, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// Analytic covariance of `(x_-, p_+)`.
    pub fn covariance(&self) -> Matrix2<f64> {
        self.covariance
    }
}

impl Iterator for BellOutcomeSampler {
    type Item = BellOutcome;

    fn next(&mut self) -> Option<BellOutcome> {
        let z = Vector2::new(StandardNormal.sample(&mut self.rng), StandardNormal.sample(&mut self.rng));
        let s = self.cholesky * z;
        Some(BellOutcome::new(s[0], s[1]))
    }
}

/// Monte Carlo estimate of an outcome-averaged output state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEstimate {
    /// Estimated 8x8 covariance matrix, modes `(a_1, a_2, c_1, c_2)`.
    pub cm: DMatrix<f64>,
    /// Per-entry standard error of `cm`.
    pub std_error: DMatrix<f64>,
    pub samples: usize,
}

impl EnsembleEstimate {
    pub fn remote(&self) -> DMatrix<f64> {
        self.cm.view((0, 0), (4, 4)).into_owned()
    }

    pub fn certifying(&self) -> DMatrix<f64> {
        self.cm.view((4, 4), (4, 4)).into_owned()
    }
}

/// Samples `n` outcomes, conditions the joint state on each through the
/// generic beam-splitter and homodyne operations, applies the feed-forward
/// `q -> q - G_q^T y`, and returns the covariance matrix of the resulting
/// mixture: the (outcome-independent) conditional covariance plus the sample
/// covariance of the displaced means.
pub fn monte_carlo_ensemble(
    v1: &TripartiteCm,
    v2: &TripartiteCm,
    gains: &GainMatrices,
    n: usize,
    seed: u64,
) -> Result<EnsembleEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    let mixed = v1.to_state().direct_sum(&v2.to_state()).beam_splitter(1, 4)?;
    let sampler = BellOutcomeSampler::from_mixed(&mixed, seed)?;
    let g = gains.as_array();

    let mut sum = SVector::<f64, 8>::zeros();
    let mut sum_outer = DMatrix::<f64>::zeros(8, 8);
    let mut sum_outer_sq = DMatrix::<f64>::zeros(8, 8);
    let mut conditional: Option<DMatrix<f64>> = None;

    for outcome in sampler.take(n) {
        let state = oracle_condition(&mixed, &outcome)?;
        let y = outcome.scaled();
        let mut d = SVector::<f64, 8>::zeros();
        for k in 0..4 {
            let shift = g[k].transpose() * y;
            d[2 * k] = state.mean()[2 * k] - shift[0];
            d[2 * k + 1] = state.mean()[2 * k + 1] - shift[1];
        }
        sum += d;
        for r in 0..8 {
            for c in 0..8 {
                let p = d[r] * d[c];
                sum_outer[(r, c)] += p;
                sum_outer_sq[(r, c)] += p * p;
            }
        }
        if conditional.is_none() {
            conditional = Some(state.cm().clone());
        }
    }

    let nf = n as f64;
    let mean = sum / nf;
    let mut cm = conditional.expect("n >= 2");
    let mut std_error = DMatrix::zeros(8, 8);
    for r in 0..8 {
        for c in 0..8 {
            let second = sum_outer[(r, c)] / nf;
            cm[(r, c)] += (second - mean[r] * mean[c]) * nf / (nf - 1.0);
            let var = (sum_outer_sq[(r, c)] / nf - second * second).max(0.0);
            std_error[(r, c)] = (var / nf).sqrt();
        }
    }
    Ok(EnsembleEstimate { cm, std_error, samples: n })
}
