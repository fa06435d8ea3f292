use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use super::{GaussianState, DEGENERACY_TOL};
use crate::error::{Error, Result};

/// Which quadrature a homodyne detector reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }
}

impl GaussianState {
    /// Balanced beam splitter on modes `i`, `j`.
    ///
    /// Afterwards mode `i` carries `(q_j + q_i)/sqrt 2` and mode `j` carries
    /// `(q_j - q_i)/sqrt 2` for both quadratures `q`.
    pub fn beam_splitter(&self, i: usize, j: usize) -> Result<GaussianState> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(Error::InvalidArgument("beam splitter needs two distinct modes".into()));
        }
        let dim = 2 * self.n_modes();
        let mut s = DMatrix::<f64>::identity(dim, dim);
        for q in 0..2 {
            let (ri, rj) = (2 * i + q, 2 * j + q);
            s[(ri, ri)] = FRAC_1_SQRT_2;
            s[(ri, rj)] = FRAC_1_SQRT_2;
            s[(rj, ri)] = -FRAC_1_SQRT_2;
            s[(rj, rj)] = FRAC_1_SQRT_2;
        }
        let cm = &s * self.cm() * s.transpose();
        let mean = &s * self.mean();
        GaussianState::new(cm, mean)
    }

    /// Homodyne conditioning with the outcome equal to the quadrature's mean.
    ///
    /// The conditional covariance matrix never depends on the outcome, so this
    /// is the form used when only second moments matter.
    pub fn homodyne_condition(&self, mode: usize, quadrature: Quadrature) -> Result<GaussianState> {
        self.check_mode(mode)?;
        let outcome = self.mean()[2 * mode + quadrature.offset()];
        self.homodyne_condition_on(mode, quadrature, outcome)
    }

    /// Condition on reading `outcome` for `quadrature` of `mode`; the measured
    /// mode is removed and the remaining modes keep their relative order.
    pub fn homodyne_condition_on(
        &self,
        mode: usize,
        quadrature: Quadrature,
        outcome: f64,
    ) -> Result<GaussianState> {
        self.check_mode(mode)?;
        if self.n_modes() < 2 {
            return Err(Error::InvalidArgument("cannot condition away the only mode".into()));
        }
        let q = 2 * mode + quadrature.offset();
        let var = self.cm()[(q, q)];
        if var < DEGENERACY_TOL {
            return Err(Error::DegenerateMeasurement { variance: var });
        }
        let rest: Vec<usize> = (0..2 * self.n_modes()).filter(|&k| k / 2 != mode).collect();
        let cross = DVector::from_fn(rest.len(), |r, _| self.cm()[(rest[r], q)]);
        let cm = DMatrix::from_fn(rest.len(), rest.len(), |r, c| {
            self.cm()[(rest[r], rest[c])] - cross[r] * cross[c] / var
        });
        let shift = (outcome - self.mean()[q]) / var;
        let mean = DVector::from_fn(rest.len(), |r, _| self.mean()[rest[r]] + cross[r] * shift);
        GaussianState::new(cm, mean)
    }
}
