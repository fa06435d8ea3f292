//! Browser bindings for the swapping model.
//!
//! Three operations are exported: a classification map over the
//! `(kappa, tau_b)` plane, a single-point evaluation, and a certification
//! explorer for squeezed tripartite states.

use cvswap_core::optomech::OptomechParams;
use nalgebra::DMatrix;
use cvswap_core::swap::{
    classify, conditional_output_cm, purities_triplet, symmetric_closed_forms, TripartiteCm,
};
use cvswap_core::sweep::run_point;
use wasm_bindgen::prelude::*;

/// Ratio `tau_b / tau_c` used by the map and point operations.
pub const TAU_RATIO: f64 = 6.0;

/// Field layout of [`evaluate_point`].
pub const POINT_FIELDS: [&str; 9] = ["class", "stable", "E_N_RRE", "E_N_CCE", "mu_B", "mu_RB", "mu_BC", "chi", "G_b"];

/// Field layout of [`certify_explorer`].
pub const CERTIFY_FIELDS: [&str; 9] =
    ["class", "physical", "E_N_RRE", "E_N_CCE", "eta_R", "eta_C", "mu_B", "mu_RB", "mu_BC"];

fn params(kappa: f64, tau_b: f64, power_b_mw: f64) -> OptomechParams {
    let mut p = OptomechParams::default();
    let w = p.omega_m;
    for b in [&mut p.bell, &mut p.certifying] {
        b.kappa = kappa * w;
    }
    p.bell.filter_time = tau_b / w;
    p.certifying.filter_time = tau_b / (TAU_RATIO * w);
    let offset = p.certifying.power - p.bell.power;
    p.bell.power = power_b_mw * 1e-3;
    p.certifying.power = p.bell.power + offset;
    p
}

fn class_code(p: &OptomechParams) -> f64 {
    let r = run_point(p);
    r.class.map_or(0.0, |c| f64::from(c.number()))
}

/// Class numbers (1 to 4, 0 for a flagged point) on an `n x n` grid,
/// `kappa` linear and `tau_b` logarithmic, row-major with `tau_b` along rows.
/// `kappa` is in units of `omega_m`, `tau_b` in units of `1/omega_m`.
#[wasm_bindgen]
pub fn class_map(kappa_min: f64, kappa_max: f64, tau_min: f64, tau_max: f64, power_b_mw: f64, n: usize) -> Vec<f64> {
    if n < 2 || !(kappa_min > 0.0 && kappa_max > kappa_min && tau_min > 0.0 && tau_max > tau_min) {
        return Vec::new();
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        let tau = tau_min * (tau_max / tau_min).powf(step(row));
        for col in 0..n {
            let kappa = kappa_min + (kappa_max - kappa_min) * step(col);
            out.push(class_code(&params(kappa, tau, power_b_mw)));
        }
    }
    out
}

/// One point of the optomechanical pipeline; fields follow [`POINT_FIELDS`].
/// Non-finite entries mark a flagged point.
#[wasm_bindgen]
pub fn evaluate_point(kappa: f64, tau_b: f64, power_b_mw: f64) -> Vec<f64> {
    let r = run_point(&params(kappa, tau_b, power_b_mw));
    vec![
        r.class.map_or(0.0, |c| f64::from(c.number())),
        if r.stable { 1.0 } else { 0.0 },
        r.e_n_rre,
        r.e_n_cce,
        r.mu_b,
        r.mu_rb,
        r.mu_bc,
        r.chi,
        r.couplings[0],
    ]
}

fn two_mode_squeezer(i: usize, j: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(6, 6);
    let (ch, sh) = (r.cosh(), r.sinh());
    for q in 0..2 {
        let sign = if q == 0 { 1.0 } else { -1.0 };
        let (a, b) = (2 * i + q, 2 * j + q);
        s[(a, a)] = ch;
        s[(b, b)] = ch;
        s[(a, b)] = sign * sh;
        s[(b, a)] = sign * sh;
    }
    s
}

/// Tripartite state: thermal noise `nbar` on every mode, then two-mode
/// squeezing `r_rb` on (remote, Bell), then `r_bc` on (Bell, certifying).
pub fn explorer_state(r_rb: f64, r_bc: f64, nbar: f64) -> cvswap_core::Result<TripartiteCm> {
    let noise = DMatrix::<f64>::identity(6, 6) * (nbar + 0.5);
    let s = two_mode_squeezer(1, 2, r_bc) * two_mode_squeezer(0, 1, r_rb);
    let v = &s * noise * s.transpose();
    let (standard, _) = TripartiteCm::from_matrix(&((&v + v.transpose()) * 0.5))?.to_standard_form()?;
    Ok(standard)
}

/// Swaps two copies of [`explorer_state`]; fields follow [`CERTIFY_FIELDS`].
/// Invalid input returns `physical = 0` and NaN elsewhere.
#[wasm_bindgen]
pub fn certify_explorer(r_rb: f64, r_bc: f64, nbar: f64) -> Vec<f64> {
    let mut out = vec![f64::NAN; CERTIFY_FIELDS.len()];
    out[1] = 0.0;
    if !(r_rb.is_finite() && r_bc.is_finite() && nbar >= 0.0) {
        return out;
    }
    let Ok(v) = explorer_state(r_rb, r_bc, nbar) else {
        return out;
    };
    let (Ok(p), Ok(cf), Ok(swap)) = (purities_triplet(&v), symmetric_closed_forms(&v), conditional_output_cm(&v, &v))
    else {
        return out;
    };
    out[0] = f64::from(classify(&p).number());
    out[1] = 1.0;
    out[2] = swap.log_neg_remote;
    out[3] = swap.log_neg_certifying;
    out[4] = cf.eta_remote_minus;
    out[5] = cf.eta_certifying_minus;
    out[6] = p.mu_b;
    out[7] = p.mu_rb;
    out[8] = p.mu_bc;
    out
}
