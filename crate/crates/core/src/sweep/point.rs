use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::textio::write_matrix;
use crate::optomech::{output_cm_with, OptomechParams, OutputCm, OutputOptions};
use crate::swap::{chi, classify, conditional_output_cm, optimal_gains, purities_triplet, ProtocolClass, SwapOutput, TripartiteCm};

/// Outcome of evaluating one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointStatus {
    Ok,
    Unstable,
    NotConverged,
    Failed,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Unstable => "unstable",
            PointStatus::NotConverged => "not_converged",
            PointStatus::Failed => "failed",
        }
    }
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub status: PointStatus,
    pub stable: bool,
    /// Populated only when `status` is `Ok`.
    pub class: Option<ProtocolClass>,
    pub e_n_rre: f64,
    pub e_n_cce: f64,
    pub mu_b: f64,
    pub mu_rb: f64,
    pub mu_bc: f64,
    pub chi: f64,
    /// Effective couplings in units of `omega_m`.
    pub couplings: [f64; 2],
    pub spectral_abscissa: f64,
    /// Error text for flagged points.
    pub message: Option<String>,
}

impl PointRecord {
    fn flagged(status: PointStatus, stable: bool, couplings: [f64; 2], abscissa: f64, message: String) -> Self {
        PointRecord {
            status,
            stable,
            class: None,
            e_n_rre: f64::NAN,
            e_n_cce: f64::NAN,
            mu_b: f64::NAN,
            mu_rb: f64::NAN,
            mu_bc: f64::NAN,
            chi: f64::NAN,
            couplings,
            spectral_abscissa: abscissa,
            message: Some(message),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == PointStatus::Ok
    }
}

/// Input state of one site, its standard form, and the swap of two
/// identical standard-form copies.
#[derive(Debug, Clone)]
pub struct PointState {
    pub input: OutputCm,
    pub standard: TripartiteCm,
    pub swap: SwapOutput,
}

pub fn evaluate_state(params: &OptomechParams, options: &OutputOptions) -> Result<PointState> {
    let input = output_cm_with(params, options)?;
    let (standard, _) = input.tripartite().to_standard_form()?;
    let swap = conditional_output_cm(&standard, &standard)?;
    Ok(PointState { input, standard, swap })
}

fn record_from(state: &PointState) -> Result<PointRecord> {
    let v = &state.standard;
    let p = purities_triplet(v)?;
    Ok(PointRecord {
        status: PointStatus::Ok,
        stable: true,
        class: Some(classify(&p)),
        e_n_rre: state.swap.log_neg_remote,
        e_n_cce: state.swap.log_neg_certifying,
        mu_b: p.mu_b,
        mu_rb: p.mu_rb,
        mu_bc: p.mu_bc,
        chi: chi(v)?,
        couplings: state.input.model.scaled_couplings(),
        spectral_abscissa: state.input.model.stability.abscissa,
        message: None,
    })
}

/// Evaluates a point; failures become flagged records rather than errors.
pub fn run_point(params: &OptomechParams) -> PointRecord {
    run_point_with(params, &OutputOptions::default())
}

pub fn run_point_with(params: &OptomechParams, options: &OutputOptions) -> PointRecord {
    let linear = match crate::optomech::linearize(params) {
        Ok(m) => m,
        Err(e) => return PointRecord::flagged(PointStatus::Failed, false, [f64::NAN; 2], f64::NAN, e.to_string()),
    };
    let couplings = linear.scaled_couplings();
    let abscissa = linear.stability.abscissa;
    match evaluate_state(params, options).and_then(|s| record_from(&s)) {
        Ok(r) => r,
        Err(e @ Error::Unstable { .. }) => PointRecord::flagged(PointStatus::Unstable, false, couplings, abscissa, e.to_string()),
        Err(e @ Error::NotConverged { .. }) => {
            PointRecord::flagged(PointStatus::NotConverged, true, couplings, abscissa, e.to_string())
        }
        Err(e) => PointRecord::flagged(PointStatus::Failed, linear.stable(), couplings, abscissa, e.to_string()),
    }
}

/// Writes `input_cm.txt` (6x6), `standard_cm.txt` (6x6), `output_cm.txt` (8x8, modes `a_1, a_2, c_1, c_2`),
/// `gains.txt` (2x8, `[G_a1 G_a2 G_c1 G_c2]`) and `purities.txt`
/// (`mu_B mu_RB mu_BC chi`) into `dir`.
pub fn dump_state(params: &OptomechParams, dir: &Path) -> Result<PointRecord> {
    let state = evaluate_state(params, &OutputOptions::default())?;
    let record = record_from(&state)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.display().to_string(), message: e.to_string() })?;
    let v = &state.standard;
    let gains = optimal_gains(v, v)?;
    let g = gains.as_array();
    let gm = DMatrix::from_fn(2, 8, |r, c| g[c / 2][(r, c % 2)]);
    let class = record.class.map(|c| c.as_str()).unwrap_or("none");
    write_matrix(&dir.join("input_cm.txt"), &state.input.cm, Some("modes: mechanics, bell output, certifying output"))?;
    write_matrix(&dir.join("standard_cm.txt"), &v.to_matrix(), Some("input in standard form"))?;
    write_matrix(&dir.join("output_cm.txt"), &state.swap.cm(), Some("modes: a1, a2, c1, c2 (optimal gains)"))?;
    write_matrix(&dir.join("gains.txt"), &gm, Some("G_a1 G_a2 G_c1 G_c2"))?;
    let pm = DMatrix::from_row_slice(1, 4, &[record.mu_b, record.mu_rb, record.mu_bc, record.chi]);
    write_matrix(&dir.join("purities.txt"), &pm, Some(&format!("mu_B mu_RB mu_BC chi\nclass {class}")))?;
    Ok(record)
}
