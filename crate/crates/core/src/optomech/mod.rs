//! Linearized cavity-optomechanics source for the tripartite input state.
//!
//! One mechanical resonator is coupled to two driven cavity modes: the Bell
//! mode `b` and the certifying mode `c`. The stationary state of the
//! mechanical mode and the two filtered cavity outputs is a Gaussian state
//! whose covariance matrix is a frequency integral over the linearized
//! Langevin spectrum.
//!
//! Frequencies are handled internally in units of `omega_m`; temperature only
//! enters through `theta = hbar omega_m / (k_B T)`. Quadrature order is
//! `(q, p, x_b, y_b, x_c, y_c)` for the intracavity vector and
//! `(q, p, x_b_out, y_b_out, x_c_out, y_c_out)` for the output state.

mod model;
mod output;
mod params;
mod quad;
mod spectra;

pub use model::{build_drift_matrix, check_stability, linearize, steady_state, LinearizedModel, Stability, SteadyState};
pub use output::{output_cm, output_cm_with, OutputCm, OutputOptions};
pub use params::{drive_rate, single_photon_coupling, Branch, BranchParams, OptomechParams, BOLTZMANN, HBAR, SPEED_OF_LIGHT};
pub use spectra::{filter_response, ScaledModel};
