use cvswap_core::optomech::{
    drive_rate, filter_response, linearize, output_cm, single_photon_coupling, Branch, OptomechParams, ScaledModel,
};
use cvswap_core::gaussian::validate_cm;

fn unit_kappa() -> OptomechParams {
    let mut p = OptomechParams::default();
    p.bell.kappa = p.omega_m;
    p.certifying.kappa = p.omega_m;
    p
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn coupling_and_drive_fixtures() {
    let p = unit_kappa();
    assert!(rel(single_photon_coupling(&p, Branch::Bell), 952.6636002352755) < 1e-12);
    assert!(rel(single_photon_coupling(&p, Branch::Certifying), 952.2780078464899) < 1e-12);
    assert!(rel(drive_rate(&p, Branch::Bell), 1431697064398.5964) < 1e-12);
    assert!(rel(drive_rate(&p, Branch::Certifying), 1518851464368.3064) < 1e-12);
    let [gb, gc] = linearize(&p).unwrap().scaled_couplings();
    assert!(rel(gb, 0.3454864106979046) < 1e-12);
    assert!(rel(gc, 0.36636950882847236) < 1e-12);
}

#[test]
fn thermal_fixture() {
    let p = OptomechParams::default();
    assert!(rel(p.theta(), 0.0011998107676064083) < 1e-12);
    assert!(rel(p.thermal_occupation(), 832.9648654280111) < 1e-12);
    let s = ScaledModel::new(&linearize(&p).unwrap());
    let high_t = 2.0 * s.gamma / s.theta;
    assert!(rel(s.mechanical_diffusion(1.0), high_t) < 1e-6);
}

#[test]
fn filter_peak_and_width() {
    let tau = 7.0;
    let peak = filter_response(-1.0, -1.0, tau).norm_sqr();
    assert!(rel(peak, 2.0 * tau) < 1e-14);
    let half = filter_response(-1.0 + 1.0 / tau, -1.0, tau).norm_sqr();
    assert!(rel(half, tau) < 1e-14);
}

#[test]
fn default_point_output() {
    let out = output_cm(&OptomechParams::default()).unwrap();
    assert!(validate_cm(&out.cm).unwrap().is_valid());
    assert!(out.imaginary_residue < 1e-10);
    let v = out.tripartite();
    let bp = cvswap_core::gaussian::Bipartition::two_mode();
    let pair = |m: nalgebra::Matrix4<f64>| nalgebra::DMatrix::from_fn(4, 4, |i, j| m[(i, j)]);
    let rb = cvswap_core::gaussian::log_negativity(&pair(v.v_rb()), &bp).unwrap();
    let rc = cvswap_core::gaussian::log_negativity(&pair(v.v_rc()), &bp).unwrap();
    assert!(rb > rc, "remote-Bell {rb} vs remote-certifying {rc}");
}
