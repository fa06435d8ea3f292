use nalgebra::{DMatrix, Matrix6};
use num_complex::Complex64;

use super::params::{drive_rate, single_photon_coupling, Branch, OptomechParams};
use crate::error::Result;

/// Classical steady state around which the dynamics is linearized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Intracavity amplitudes `E / (kappa + i Delta)` for the Bell and certifying modes.
    pub amplitudes: [Complex64; 2],
    /// Static mechanical displacement in zero-point units.
    pub q_s: f64,
    /// Effective couplings `sqrt 2 G_0 |a_s|` (rad/s).
    pub couplings: [f64; 2],
}

/// `a_s = E / (kappa + i Delta)` with the given effective detunings, and the
/// displacement `q_s = (G_0b |a_b|^2 + G_0c |a_c|^2) / omega_m`.
pub fn steady_state(params: &OptomechParams) -> SteadyState {
    let mut amplitudes = [Complex64::new(0.0, 0.0); 2];
    let mut couplings = [0.0; 2];
    let mut q_s = 0.0;
    for branch in Branch::BOTH {
        let b = params.branch(branch);
        let g0 = single_photon_coupling(params, branch);
        let a = drive_rate(params, branch) / Complex64::new(b.kappa, b.detuning);
        amplitudes[branch.index()] = a;
        couplings[branch.index()] = std::f64::consts::SQRT_2 * g0 * a.norm();
        q_s += g0 * a.norm_sqr() / params.omega_m;
    }
    SteadyState { amplitudes, q_s, couplings }
}

/// Drift matrix in the order `(q, p, x_b, y_b, x_c, y_c)`. All rates share
/// whatever unit the caller uses.
pub fn build_drift_matrix(
    omega_m: f64,
    gamma_m: f64,
    couplings: [f64; 2],
    kappas: [f64; 2],
    detunings: [f64; 2],
) -> Matrix6<f64> {
    let [gb, gc] = couplings;
    let [kb, kc] = kappas;
    let [db, dc] = detunings;
    #[rustfmt::skip]
    let k = Matrix6::new(
        0.0,      omega_m,  0.0, 0.0, 0.0, 0.0,
        -omega_m, -gamma_m, gb,  0.0, gc,  0.0,
        0.0,      0.0,      -kb, db,  0.0, 0.0,
        gb,       0.0,      -db, -kb, 0.0, 0.0,
        0.0,      0.0,      0.0, 0.0, -kc, dc,
        gc,       0.0,      0.0, 0.0, -dc, -kc,
    );
    k
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stability {
    pub stable: bool,
    /// Largest real part among the eigenvalues.
    pub abscissa: f64,
    pub eigenvalues: Vec<Complex64>,
}

pub fn check_stability(k: &Matrix6<f64>) -> Stability {
    let eigenvalues: Vec<Complex64> = DMatrix::from_fn(6, 6, |r, c| k[(r, c)])
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect();
    let abscissa = eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    Stability { stable: abscissa < 0.0, abscissa, eigenvalues }
}

/// Linearized dynamics of one site, with rates in units of `omega_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedModel {
    pub params: OptomechParams,
    pub steady: SteadyState,
    /// Drift matrix in units of `omega_m`.
    pub drift: Matrix6<f64>,
    pub stability: Stability,
}

impl LinearizedModel {
    pub fn stable(&self) -> bool {
        self.stability.stable
    }

    /// Effective couplings in units of `omega_m`.
    pub fn scaled_couplings(&self) -> [f64; 2] {
        self.steady.couplings.map(|g| g / self.params.omega_m)
    }
}

pub fn linearize(params: &OptomechParams) -> Result<LinearizedModel> {
    params.validate()?;
    let steady = steady_state(params);
    let w = params.omega_m;
    let drift = build_drift_matrix(
        1.0,
        params.gamma_m() / w,
        steady.couplings.map(|g| g / w),
        [params.bell.kappa / w, params.certifying.kappa / w],
        [params.bell.detuning / w, params.certifying.detuning / w],
    );
    let stability = check_stability(&drift);
    Ok(LinearizedModel { params: *params, steady, drift, stability })
}
