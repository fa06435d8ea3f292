use std::f64::consts::SQRT_2;

use nalgebra::{Matrix2, SVector, Vector2};

use super::{inverse_bell_matrix, outcome_correlations, TripartiteCm};
use crate::error::Result;

/// Homodyne readings of the Bell measurement.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BellOutcome {
    pub x_minus: f64,
    pub p_plus: f64,
}

impl BellOutcome {
    pub fn new(x_minus: f64, p_plus: f64) -> Self {
        Self { x_minus, p_plus }
    }

    /// `y = sqrt 2 Z (x_-, p_+)`, the vector the gain matrices act on.
    pub fn scaled(&self) -> Vector2<f64> {
        Vector2::new(SQRT_2 * self.x_minus, -SQRT_2 * self.p_plus)
    }
}

/// Feed-forward gain blocks; mode `q` is displaced by `-G_q^T y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMatrices {
    pub a1: Matrix2<f64>,
    pub a2: Matrix2<f64>,
    pub c1: Matrix2<f64>,
    pub c2: Matrix2<f64>,
}

impl GainMatrices {
    pub fn zero() -> Self {
        Self { a1: Matrix2::zeros(), a2: Matrix2::zeros(), c1: Matrix2::zeros(), c2: Matrix2::zeros() }
    }

    /// Scalar gains `(g, h)` per mode, laid out as `diag(-g, h)` for site 1 and
    /// `diag(g, h)` for site 2. `g = h = 1` everywhere is unit-gain feed-forward.
    pub fn from_scalars(a1: (f64, f64), a2: (f64, f64), c1: (f64, f64), c2: (f64, f64)) -> Self {
        Self {
            a1: Matrix2::new(-a1.0, 0.0, 0.0, a1.1),
            a2: Matrix2::new(a2.0, 0.0, 0.0, a2.1),
            c1: Matrix2::new(-c1.0, 0.0, 0.0, c1.1),
            c2: Matrix2::new(c2.0, 0.0, 0.0, c2.1),
        }
    }

    pub fn unit() -> Self {
        Self::from_scalars((1.0, 1.0), (1.0, 1.0), (1.0, 1.0), (1.0, 1.0))
    }

    pub fn as_array(&self) -> [Matrix2<f64>; 4] {
        [self.a1, self.a2, self.c1, self.c2]
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.as_array().iter().all(|g| g[(0, 1)].abs() <= tol && g[(1, 0)].abs() <= tol)
    }
}

/// Gains that null the displaced first moment for every outcome:
/// `G_q = M^{-1} Cov(y, q)`.
///
/// In standard form this is `G_a1 = -Z M^-1 Z D_1`, `G_a2 = Z M^-1 D_2`,
/// `G_c1 = -Z M^-1 Z E_1`, `G_c2 = Z M^-1 E_2`; for general states the blocks
/// need not be diagonal.
pub fn optimal_gains(v1: &TripartiteCm, v2: &TripartiteCm) -> Result<GainMatrices> {
    let m_inv = inverse_bell_matrix(v1, v2)?;
    let [a1, a2, c1, c2] = outcome_correlations(v1, v2).map(|w| m_inv * w);
    Ok(GainMatrices { a1, a2, c1, c2 })
}

/// First moments of the displaced conditional state in the order
/// `(a_1, a_2, c_1, c_2)`, quadratures `(x, p)` per mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedMoment(pub SVector<f64, 8>);

impl DisplacedMoment {
    /// The same vector in the order `(a_1, c_1, c_2, a_2)`.
    pub fn printed_order(&self) -> SVector<f64, 8> {
        const MODES: [usize; 4] = [0, 2, 3, 1];
        SVector::<f64, 8>::from_fn(|i, _| self.0[2 * MODES[i / 2] + i % 2])
    }

    pub fn mode(&self, index: usize) -> Vector2<f64> {
        Vector2::new(self.0[2 * index], self.0[2 * index + 1])
    }
}

/// Mean of the conditional state after feed-forward with `gains`:
/// `d_q = (Cov(y, q)^T M^{-1} - G_q^T) y`.
pub fn displaced_first_moment(
    v1: &TripartiteCm,
    v2: &TripartiteCm,
    gains: &GainMatrices,
    outcome: &BellOutcome,
) -> Result<DisplacedMoment> {
    let m_inv = inverse_bell_matrix(v1, v2)?;
    let y = outcome.scaled();
    let w = outcome_correlations(v1, v2);
    let g = gains.as_array();
    let mut d = SVector::<f64, 8>::zeros();
    for k in 0..4 {
        let dk = (w[k].transpose() * m_inv - g[k].transpose()) * y;
        d[2 * k] = dk[0];
        d[2 * k + 1] = dk[1];
    }
    Ok(DisplacedMoment(d))
}
