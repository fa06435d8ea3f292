//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

mod common;

use std::time::{Duration, Instant};

use common::{random_gains, random_standard_form, random_structured_standard_form, random_tripartite, rel_frobenius, rng};
use cvswap_core::gaussian::{log_negativity, min_pts_eigenvalue, Bipartition, GaussianState};
use cvswap_core::optomech::{build_drift_matrix, check_stability, linearize, output_cm, output_cm_with, OptomechParams, OutputOptions};
use cvswap_core::swap::{
    bell_measurement_oracle, chi, classify, conditional_output_cm, displaced_first_moment, ensemble_output_blocks,
    monte_carlo_ensemble, optimal_gains, purities_triplet, BellOutcome, GainMatrices, ProtocolClass,
};
use cvswap_core::sweep::{run_sweep, Axis, AxisParam, Links, Spacing, SweepResult, SweepSpec};
use nalgebra::{DMatrix, Matrix4};
use rand::Rng;
use rand_distr::StandardNormal;

const GRID_POINTS: usize = 30;
const SWEEP_BUDGET: Duration = Duration::from_secs(120);
const ORACLE_PAIRS: usize = 500;
const ORACLE_TOL: f64 = 1e-10;
const ORACLE_BUDGET: Duration = Duration::from_secs(5);
const GAIN_CASES: usize = 100;
const GAIN_TOL: f64 = 1e-12;
const MC_SAMPLES: usize = 100_000;
const MC_SIGMAS: f64 = 5.0;
const MC_BUDGET: Duration = Duration::from_secs(30);
const SOUNDNESS_STATES: usize = 1000;
const SOUNDNESS_TOL: f64 = 1e-9;
const TMSV_TOL: f64 = 1e-10;
const VACUUM_OPTICS_TOL: f64 = 1e-8;
const THERMAL_REL_TOL: f64 = 0.01;
const QUADRATURE_TOL: f64 = 1e-6;

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn omega_m() -> f64 {
    2.0 * std::f64::consts::PI * 10e6
}

/// L = 1 mm, m = 10 ng, omega_m / 2 pi = 10 MHz, Q_m = 1e5, T = 0.4 K,
/// Stokes-detuned and filtered Bell drive, anti-Stokes certifying drive.
fn site(p_b: f64, p_c: f64, kappa: f64, tau_b: f64, tau_ratio: f64) -> OptomechParams {
    let w = omega_m();
    let mut p = OptomechParams {
        length: 1e-3,
        mass: 10e-12,
        omega_m: w,
        q_m: 1e5,
        temperature: 0.4,
        ..OptomechParams::default()
    };
    p.bell.wavelength = 810.045e-9;
    p.certifying.wavelength = 810.373e-9;
    p.bell.power = p_b;
    p.certifying.power = p_c;
    p.bell.kappa = kappa * w;
    p.certifying.kappa = kappa * w;
    p.bell.detuning = -w;
    p.certifying.detuning = w;
    p.bell.filter_center = -w;
    p.certifying.filter_center = w;
    p.bell.filter_time = tau_b / w;
    p.certifying.filter_time = tau_b / (w * tau_ratio);
    p
}

fn kappa_tau_spec() -> SweepSpec {
    let w = omega_m();
    SweepSpec::new(
        site(4e-3, 4.5e-3, 1.0, 8.0, 6.0),
        [
            Axis::new(AxisParam::Kappa, 0.2 * w, 2.0 * w, GRID_POINTS, Spacing::Linear).unwrap(),
            Axis::new(AxisParam::TauB, 2.0 / w, 30.0 / w, GRID_POINTS, Spacing::Log).unwrap(),
        ],
        Links { equal_kappa: true, tau_ratio: Some(6.0), power_offset: None },
    )
    .unwrap()
}

fn power_tau_spec() -> SweepSpec {
    let w = omega_m();
    SweepSpec::new(
        site(4e-3, 4.5e-3, 0.5, 8.0, 5.0),
        [
            Axis::new(AxisParam::PowerB, 0.5e-3, 8e-3, GRID_POINTS, Spacing::Linear).unwrap(),
            Axis::new(AxisParam::TauB, 2.0 / w, 30.0 / w, GRID_POINTS, Spacing::Log).unwrap(),
        ],
        Links { equal_kappa: true, tau_ratio: Some(5.0), power_offset: Some(0.5e-3) },
    )
    .unwrap()
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn operating_point(name: &'static str, result: &SweepResult, elapsed: Duration, rre: (f64, f64), cce: (f64, f64)) -> Check {
    let w = result.spec.base.omega_m;
    let hit = result
        .records
        .iter()
        .filter(|r| r.point.class == Some(ProtocolClass::Certifiable))
        .filter(|r| (r.point.e_n_rre - rre.0).abs() <= rre.1 && (r.point.e_n_cce - cce.0).abs() <= cce.1)
        .filter(|r| r.point.e_n_rre > r.point.e_n_cce)
        .min_by(|a, b| {
            let score = |r: &&cvswap_core::sweep::SweepRecord| {
                ((r.point.e_n_rre - rre.0) / rre.1).powi(2) + ((r.point.e_n_cce - cce.0) / cce.1).powi(2)
            };
            score(a).total_cmp(&score(b))
        });
    let in_time = elapsed <= SWEEP_BUDGET;
    let detail = match hit {
        Some(r) => format!(
            "{}={:.4} {}={:.4} E_N_RRE={:.4} (target {}+-{}) E_N_CCE={:.4} (target {}+-{}); {}x{} grid in {:.1?}",
            result.spec.axes[0].param.column(),
            result.spec.axes[0].param.display_value(r.axis[0], w),
            result.spec.axes[1].param.column(),
            result.spec.axes[1].param.display_value(r.axis[1], w),
            r.point.e_n_rre,
            rre.0,
            rre.1,
            r.point.e_n_cce,
            cce.0,
            cce.1,
            GRID_POINTS,
            GRID_POINTS,
            elapsed
        ),
        None => format!("no certifiable grid point inside the target band; grid took {elapsed:.1?}"),
    };
    Check { name, pass: hit.is_some() && in_time, detail }
}

fn oracle_equivalence() -> Check {
    let mut r = rng(11);
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for _ in 0..ORACLE_PAIRS {
        let (v1, v2) = (random_tripartite(&mut r), random_tripartite(&mut r));
        let outcome = BellOutcome::new(r.sample(StandardNormal), r.sample(StandardNormal));
        let closed = conditional_output_cm(&v1, &v2).unwrap().cm();
        let oracle = bell_measurement_oracle(&v1, &v2, &outcome).unwrap();
        worst = worst.max(rel_frobenius(oracle.cm(), &closed));
    }
    let elapsed = start.elapsed();
    Check {
        name: "oracle equivalence",
        pass: worst <= ORACLE_TOL && elapsed <= ORACLE_BUDGET,
        detail: format!("{ORACLE_PAIRS} random pairs, worst relative Frobenius {worst:.2e} (tol {ORACLE_TOL:e}) in {elapsed:.2?}"),
    }
}

fn to_d(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

fn optimal_gain_suite() -> Check {
    let mut r = rng(12);
    let (mut worst_moment, mut worst_blocks) = (0.0_f64, 0.0_f64);
    for _ in 0..GAIN_CASES {
        let (v1, v2) = (random_tripartite(&mut r), random_tripartite(&mut r));
        let outcome = BellOutcome::new(r.sample(StandardNormal), r.sample(StandardNormal));
        let g = optimal_gains(&v1, &v2).unwrap();
        let undisplaced = displaced_first_moment(&v1, &v2, &GainMatrices::zero(), &outcome).unwrap().0.norm();
        let closed = displaced_first_moment(&v1, &v2, &g, &outcome).unwrap().0.norm();
        let mean = bell_measurement_oracle(&v1, &v2, &outcome).unwrap().mean().clone();
        let y = outcome.scaled();
        let mut oracle = 0.0_f64;
        for (k, gk) in g.as_array().iter().enumerate() {
            let shift = gk.transpose() * y;
            oracle = oracle.max((mean[2 * k] - shift[0]).abs()).max((mean[2 * k + 1] - shift[1]).abs());
        }
        worst_moment = worst_moment.max(closed.max(oracle) / undisplaced.max(1.0));
        let cond = conditional_output_cm(&v1, &v2).unwrap();
        let (remote, cert) = ensemble_output_blocks(&v1, &v2, &g);
        worst_blocks = worst_blocks
            .max(rel_frobenius(&to_d(&remote), &to_d(&cond.remote)))
            .max(rel_frobenius(&to_d(&cert), &to_d(&cond.certifying)));
    }
    Check {
        name: "optimal gains",
        pass: worst_moment <= GAIN_TOL && worst_blocks <= GAIN_TOL,
        detail: format!(
            "{GAIN_CASES} cases: worst |d_dis| {worst_moment:.2e} (closed form and homodyne path), worst ensemble-vs-conditional {worst_blocks:.2e} (tol {GAIN_TOL:e})"
        ),
    }
}

fn monte_carlo() -> Check {
    let mut r = rng(13);
    let start = Instant::now();
    let bound = MC_SIGMAS / (MC_SAMPLES as f64).sqrt();
    let mut worst = 0.0_f64;
    for seed in 0..3 {
        let (v1, v2) = (random_tripartite(&mut r), random_tripartite(&mut r));
        let g = random_gains(&mut r);
        let est = monte_carlo_ensemble(&v1, &v2, &g, MC_SAMPLES, 100 + seed).unwrap();
        let (remote, cert) = ensemble_output_blocks(&v1, &v2, &g);
        worst = worst.max(rel_frobenius(&est.remote(), &to_d(&remote))).max(rel_frobenius(&est.certifying(), &to_d(&cert)));
    }
    let elapsed = start.elapsed();
    Check {
        name: "monte carlo ensemble",
        pass: worst <= bound && elapsed <= MC_BUDGET,
        detail: format!("3 pairs x {MC_SAMPLES} samples, worst relative Frobenius {worst:.2e} (bound {bound:.2e}) in {elapsed:.1?}"),
    }
}

fn certification_soundness() -> Check {
    let mut r = rng(14);
    let (mut certifying, mut sampled, mut violations) = (0, 0, 0);
    let mut worst_identity = 0.0_f64;
    while certifying < SOUNDNESS_STATES && sampled < 100 * SOUNDNESS_STATES {
        let v = if sampled % 2 == 0 { random_standard_form(&mut r) } else { random_structured_standard_form(&mut r) };
        sampled += 1;
        let Ok(out) = conditional_output_cm(&v, &v) else { continue };
        let p = purities_triplet(&v).unwrap();
        worst_identity = worst_identity
            .max((out.eta_remote - p.mu_b / (2.0 * p.mu_rb)).abs())
            .max((out.eta_certifying - p.mu_b / (2.0 * p.mu_bc)).abs());
        if classify(&p) != ProtocolClass::Certifiable {
            continue;
        }
        certifying += 1;
        let x = chi(&v).unwrap();
        if x < 1.0 && out.log_neg_certifying > 0.0 && out.log_neg_remote < out.log_neg_certifying - SOUNDNESS_TOL {
            violations += 1;
        }
    }
    Check {
        name: "certification soundness",
        pass: certifying >= SOUNDNESS_STATES && violations == 0 && worst_identity <= SOUNDNESS_TOL,
        detail: format!(
            "{certifying} certifying states of {sampled} sampled, {violations} violations, worst purity-identity error {worst_identity:.2e} (tol {SOUNDNESS_TOL:e})"
        ),
    }
}

fn analytic_fixtures() -> Check {
    let bp = Bipartition::two_mode();
    let tmsv = [0.1, 0.5, 1.0, 2.0]
        .iter()
        .map(|&r| (log_negativity(GaussianState::two_mode_squeezed(r).cm(), &bp).unwrap() - 2.0 * r).abs())
        .fold(0.0, f64::max);
    let vacuum = (min_pts_eigenvalue(GaussianState::vacuum(2).unwrap().cm(), &bp).unwrap() - 0.5).abs();
    let p = site(0.0, 0.0, 1.0, 8.0, 6.0);
    let out = output_cm(&p).unwrap();
    let mut optics = 0.0_f64;
    for i in 2..6 {
        for j in 0..6 {
            let want = if i == j { 0.5 } else { 0.0 };
            optics = optics.max((out.cm[(i, j)] - want).abs());
        }
    }
    let nbar = p.thermal_occupation() + 0.5;
    let thermal = ((out.cm[(0, 0)] / nbar - 1.0).abs()).max((out.cm[(1, 1)] / nbar - 1.0).abs());
    Check {
        name: "analytic fixtures",
        pass: tmsv <= TMSV_TOL && vacuum <= TMSV_TOL && optics <= VACUUM_OPTICS_TOL && thermal <= THERMAL_REL_TOL,
        detail: format!(
            "TMSV |E_N - 2r| {tmsv:.1e}, vacuum |eta - 1/2| {vacuum:.1e}, undriven optics {optics:.1e}, mechanics V_qq={:.3} vs n+1/2={nbar:.3} (rel {thermal:.1e})",
            out.cm[(0, 0)]
        ),
    }
}

fn quadrature_robustness(specs: &[&SweepSpec]) -> Check {
    let refined = OutputOptions { window_scale: 2.0, rel_tol: 1e-9, ..OutputOptions::default() };
    let (mut worst, mut points, mut failures) = (0.0_f64, 0, 0);
    for spec in specs {
        let grid = spec.grid();
        for i in 0..grid[0].len() {
            for j in 0..grid[1].len() {
                let p = spec.params_at(&grid, i, j);
                points += 1;
                match (output_cm(&p), output_cm_with(&p, &refined)) {
                    (Ok(a), Ok(b)) => {
                        for r in 0..6 {
                            for c in 0..6 {
                                let scale = (a.cm[(r, r)] * a.cm[(c, c)]).sqrt();
                                worst = worst.max((a.cm[(r, c)] - b.cm[(r, c)]).abs() / scale);
                            }
                        }
                    }
                    _ => failures += 1,
                }
            }
        }
    }
    Check {
        name: "quadrature robustness",
        pass: failures == 0 && worst < QUADRATURE_TOL,
        detail: format!("{points} grid points, {failures} failures, worst entry change {worst:.2e} relative to sqrt(V_ii V_jj) (tol {QUADRATURE_TOL:e})"),
    }
}

fn stability(spec: &SweepSpec) -> Check {
    let grid = spec.grid();
    let (mut points, mut unstable, mut unbalanced) = (0, 0, 0);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..grid[0].len() {
        for j in 0..grid[1].len() {
            let p = spec.params_at(&grid, i, j);
            let m = linearize(&p).unwrap();
            points += 1;
            if !m.stable() {
                unstable += 1;
            }
            let w = p.omega_m;
            let g = m.steady.couplings[0] / w;
            let kappa = [p.bell.kappa / w, p.certifying.kappa / w];
            let k = build_drift_matrix(1.0, p.gamma_m() / w, [g, g], kappa, [-1.0, 1.0]);
            let s = check_stability(&k);
            worst = worst.max(s.abscissa).max(m.stability.abscissa);
            if !s.stable {
                unbalanced += 1;
            }
        }
    }
    Check {
        name: "stability",
        pass: unstable == 0 && unbalanced == 0,
        detail: format!(
            "{points} grid points: {unstable} unstable as driven, {unbalanced} unstable with G_c = G_b; largest spectral abscissa {worst:.2e} omega_m"
        ),
    }
}

fn main() {
    let kt = kappa_tau_spec();
    let pt = power_tau_spec();

    let start = Instant::now();
    let kt_result = run_sweep(&kt, workers());
    let kt_time = start.elapsed();
    let start = Instant::now();
    let pt_result = run_sweep(&pt, workers());
    let pt_time = start.elapsed();

    let checks = [
        operating_point("kappa-tau operating point", &kt_result, kt_time, (0.3, 0.1), (0.05, 0.05)),
        operating_point("power-tau operating point", &pt_result, pt_time, (0.2, 0.1), (0.1, 0.07)),
        oracle_equivalence(),
        optimal_gain_suite(),
        monte_carlo(),
        certification_soundness(),
        analytic_fixtures(),
        quadrature_robustness(&[&kt, &pt]),
        stability(&kt),
    ];
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.pass);
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
