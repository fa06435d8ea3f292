use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix6};
use num_complex::Complex64;

use super::model::LinearizedModel;
use super::params::Branch;

type C6 = Matrix6<Complex64>;

/// `h(omega) = sqrt(2/tau) / (1/tau + i (center - omega))`, the transform of
/// the causal filter `sqrt(2/tau) Theta(t) exp[-(1/tau + i center) t]` under
/// `f(omega) = int f(t) exp(i omega t) dt`.
pub fn filter_response(omega: f64, center: f64, tau: f64) -> Complex64 {
    (2.0 / tau).sqrt() / Complex64::new(1.0 / tau, center - omega)
}

/// Dimensionless model: all rates in units of `omega_m`, times in `1/omega_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledModel {
    pub drift: Matrix6<f64>,
    pub gamma: f64,
    pub theta: f64,
    pub kappa: [f64; 2],
    pub detuning: [f64; 2],
    pub filter_center: [f64; 2],
    pub filter_time: [f64; 2],
    /// Mechanical bath noise is dropped above this frequency.
    pub mechanical_cutoff: f64,
}

impl ScaledModel {
    pub fn new(model: &LinearizedModel) -> Self {
        let p = &model.params;
        let w = p.omega_m;
        let pick = |f: fn(&super::params::BranchParams) -> f64| Branch::BOTH.map(|b| f(p.branch(b)));
        ScaledModel {
            drift: model.drift,
            gamma: p.gamma_m() / w,
            theta: p.theta(),
            kappa: pick(|b| b.kappa).map(|k| k / w),
            detuning: pick(|b| b.detuning).map(|d| d / w),
            filter_center: pick(|b| b.filter_center).map(|o| o / w),
            filter_time: pick(|b| b.filter_time).map(|t| t * w),
            mechanical_cutoff: f64::INFINITY,
        }
    }

    /// `gamma omega coth(theta omega / 2)`, continuous at zero with value
    /// `2 gamma / theta`, and zero beyond the bath cutoff.
    pub fn mechanical_diffusion(&self, omega: f64) -> f64 {
        if omega.abs() > self.mechanical_cutoff {
            return 0.0;
        }
        if self.theta.is_infinite() {
            return self.gamma * omega.abs();
        }
        let y = 0.5 * self.theta * omega;
        if y.abs() < 1e-6 {
            2.0 * self.gamma / self.theta * (1.0 + y * y / 3.0)
        } else {
            self.gamma * omega / y.tanh()
        }
    }

    /// Diagonal of the diffusion matrix `Q(omega)`.
    pub fn diffusion_diagonal(&self, omega: f64) -> [f64; 6] {
        let [kb, kc] = self.kappa;
        [0.0, self.mechanical_diffusion(omega), kb, kb, kc, kc]
    }

    pub fn diffusion_matrix(&self, omega: f64) -> Matrix6<f64> {
        Matrix6::from_diagonal(&self.diffusion_diagonal(omega).into())
    }

    /// Quadrature-space filter block `sqrt(2 kappa) [[H_R, -H_I], [H_I, H_R]]`,
    /// where `H_R`, `H_I` transform the real and imaginary parts of `h(t)`.
    pub fn filter_transfer(&self, omega: f64, branch: Branch) -> Matrix2<Complex64> {
        let i = branch.index();
        let (center, tau) = (self.filter_center[i], self.filter_time[i]);
        let plus = filter_response(omega, center, tau);
        let minus = filter_response(-omega, center, tau).conj();
        let h_re = (plus + minus) * 0.5;
        let h_im = (plus - minus) / Complex64::new(0.0, 2.0);
        let s = (2.0 * self.kappa[i]).sqrt();
        Matrix2::new(h_re, -h_im, h_im, h_re) * Complex64::from(s)
    }

    /// `T(omega) [N(omega) + P] Q(omega) [N(omega) + P]^dag T(omega)^dag / 2 pi`.
    pub fn integrand(&self, omega: f64) -> C6 {
        let iw = Complex64::new(0.0, omega);
        let a = C6::from_fn(|r, c| Complex64::from(self.drift[(r, c)]) + if r == c { iw } else { Complex64::from(0.0) });
        let mut n = a.try_inverse().expect("drift matrix has an eigenvalue on the imaginary axis");
        for (j, k) in [(2, 0), (3, 0), (4, 1), (5, 1)] {
            n[(j, j)] += Complex64::from(0.5 / self.kappa[k]);
        }
        let mut t = C6::zeros();
        t[(0, 0)] = Complex64::from(1.0);
        t[(1, 1)] = Complex64::from(1.0);
        for (branch, o) in [(Branch::Bell, 2), (Branch::Certifying, 4)] {
            t.fixed_view_mut::<2, 2>(o, o).copy_from(&self.filter_transfer(omega, branch));
        }
        let mut tn = t * n;
        let q = self.diffusion_diagonal(omega);
        let tn_adj = tn.adjoint();
        for (c, qc) in q.iter().enumerate() {
            tn.column_mut(c).scale_mut(*qc / (2.0 * PI));
        }
        tn * tn_adj
    }

    /// Breakpoints on `[0, window]` around the folded pole positions of the integrand.
    pub(crate) fn breakpoints(&self, window: f64, eigenvalues: &[Complex64]) -> Vec<f64> {
        const STEPS: [f64; 12] = [0.0, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1e3, 3e3, 1e4, 3e4, 1e5];
        let mut pts = vec![0.0, window];
        if self.mechanical_cutoff < window {
            pts.push(self.mechanical_cutoff);
        }
        let mut push = |center: f64, width: f64, steps: &[f64]| {
            for s in steps {
                for x in [center - s * width, center + s * width] {
                    if x > 0.0 && x < window {
                        pts.push(x);
                    }
                }
            }
        };
        for l in eigenvalues {
            push(l.im.abs(), l.re.abs().max(1e-12), &STEPS);
        }
        for i in 0..2 {
            push(self.filter_center[i].abs(), 1.0 / self.filter_time[i], &STEPS[..5]);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1e-12));
        pts
    }
}
