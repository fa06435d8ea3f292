use nalgebra::DMatrix;
use num_complex::Complex64;

use super::model::{linearize, LinearizedModel};
use super::params::OptomechParams;
use super::quad::Integrator;
use super::spectra::ScaledModel;
use crate::error::{Error, Result};
use crate::gaussian::validate_cm;
use crate::swap::TripartiteCm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputOptions {
    /// Multiplies the default split point between the direct and mapped ranges.
    pub window_scale: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
    /// Bandwidth of the mechanical bath in units of `omega_m`. The Brownian
    /// noise `gamma omega coth(theta omega / 2)` makes the momentum variance
    /// grow as `ln(cutoff)`, so it needs a finite value.
    pub mechanical_cutoff: f64,
}

impl Default for OutputOptions {
    fn default() -> Self {
        OutputOptions { window_scale: 1.0, rel_tol: 1e-8, max_evaluations: 1_000_000, mechanical_cutoff: 50.0 }
    }
}

/// Stationary covariance matrix of `(mechanics, Bell output, certifying output)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputCm {
    pub cm: DMatrix<f64>,
    pub model: LinearizedModel,
    pub evaluations: usize,
    /// Largest entrywise error estimate relative to `sqrt(V_ii V_jj)`.
    pub error_estimate: f64,
    /// Largest imaginary part of the assembled integral.
    pub imaginary_residue: f64,
}

impl OutputCm {
    pub fn tripartite(&self) -> TripartiteCm {
        TripartiteCm::from_matrix(&self.cm).expect("output covariance matrix is 6x6 and symmetric")
    }
}

pub fn output_cm(params: &OptomechParams) -> Result<OutputCm> {
    output_cm_with(params, &OutputOptions::default())
}

/// Window `max(50, 20 max(kappa, 1/tau) + |Delta|)` in units of `omega_m`,
/// beyond which the integral runs over `omega = window / t`.
fn default_window(s: &ScaledModel) -> f64 {
    let mut widest = 0.0_f64;
    for i in 0..2 {
        widest = widest.max(20.0 * s.kappa[i].max(1.0 / s.filter_time[i]) + s.detuning[i].abs());
        widest = widest.max(20.0 / s.filter_time[i] + s.filter_center[i].abs());
    }
    widest.max(50.0)
}

pub fn output_cm_with(params: &OptomechParams, options: &OutputOptions) -> Result<OutputCm> {
    let model = linearize(params)?;
    if !model.stable() {
        return Err(Error::Unstable { abscissa: model.stability.abscissa });
    }
    let mut scaled = ScaledModel::new(&model);
    scaled.mechanical_cutoff = options.mechanical_cutoff;
    let window = default_window(&scaled) * options.window_scale;
    let breakpoints = scaled.breakpoints(window, &model.stability.eigenvalues);
    let folded = |w: f64| scaled.integrand(w) + scaled.integrand(-w);
    let integral = Integrator::new(folded, options.rel_tol, options.max_evaluations)
        .integrate_half_line(&breakpoints, window, &[options.mechanical_cutoff])?;

    let value = integral.value;
    let cm = DMatrix::from_fn(6, 6, |r, c| 0.5 * (value[(r, c)].re + value[(c, r)].re));
    let imaginary_residue = value.iter().map(|z: &Complex64| z.im.abs()).fold(0.0, f64::max);
    let error_estimate = (0..6)
        .flat_map(|i| (0..6).map(move |j| (i, j)))
        .map(|(i, j)| integral.error[(i, j)] / (cm[(i, i)] * cm[(j, j)]).sqrt())
        .fold(0.0, f64::max);

    let report = validate_cm(&cm)?;
    if !report.is_physical() {
        return Err(Error::Unphysical(format!(
            "integrated covariance matrix has min eigenvalue {:e} of V + iJ/2",
            report.min_eigenvalue
        )));
    }
    Ok(OutputCm { cm, model, evaluations: integral.evaluations, error_estimate, imaginary_residue })
}
