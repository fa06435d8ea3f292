use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::Matrix6;
use num_complex::Complex64;

use crate::error::{Error, Result};

type C6 = Matrix6<Complex64>;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Domain {
    /// `x` on `[a, b]` directly.
    Direct,
    /// `x = window / t` for `t` on `[a, b]`.
    Tail(f64),
}

struct Panel {
    a: f64,
    b: f64,
    domain: Domain,
    value: C6,
    error: Matrix6<f64>,
    priority: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

pub(crate) struct Integral {
    pub value: C6,
    pub error: Matrix6<f64>,
    pub evaluations: usize,
}

pub(crate) struct Integrator<F> {
    f: F,
    pub rel_tol: f64,
    pub max_evaluations: usize,
    evaluations: usize,
}

impl<F: Fn(f64) -> C6> Integrator<F> {
    pub fn new(f: F, rel_tol: f64, max_evaluations: usize) -> Self {
        Integrator { f, rel_tol, max_evaluations, evaluations: 0 }
    }

    fn eval(&mut self, x: f64, domain: Domain) -> C6 {
        self.evaluations += 1;
        match domain {
            Domain::Direct => (self.f)(x),
            Domain::Tail(w) => {
                let t = x.max(1e-150);
                (self.f)(w / t) * Complex64::from(w / (t * t))
            }
        }
    }

    fn gk15(&mut self, a: f64, b: f64, domain: Domain) -> (C6, Matrix6<f64>) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut kronrod = self.eval(c, domain) * Complex64::from(WGK[7]);
        let mut gauss = kronrod * Complex64::from(WG[3] / WGK[7]);
        for j in 0..7 {
            let pair = self.eval(c - h * XGK[j], domain) + self.eval(c + h * XGK[j], domain);
            kronrod += pair * Complex64::from(WGK[j]);
            if j % 2 == 1 {
                gauss += pair * Complex64::from(WG[j / 2]);
            }
        }
        let hk = Complex64::from(h);
        let value = kronrod * hk;
        let error = (value - gauss * hk).map(|z| z.norm());
        (value, error)
    }

    fn panel(&mut self, a: f64, b: f64, domain: Domain, scale: &Matrix6<f64>) -> Panel {
        let (value, error) = self.gk15(a, b, domain);
        let priority = normalized(&error, scale);
        Panel { a, b, domain, value, error, priority }
    }

    /// Integrates over `[0, window]` split at `breakpoints`, plus `[window, inf)`
    /// split at `tail_breaks` (frequencies beyond the window).
    /// Converged when every entry's summed error estimate is within
    /// `rel_tol sqrt(|I_ii I_jj|)`.
    pub fn integrate_half_line(mut self, breakpoints: &[f64], window: f64, tail_breaks: &[f64]) -> Result<Integral> {
        let unit = Matrix6::from_element(f64::INFINITY);
        let mut panels: Vec<Panel> = breakpoints
            .windows(2)
            .map(|w| self.panel(w[0], w[1], Domain::Direct, &unit))
            .collect();
        let mut ts: Vec<f64> = tail_breaks.iter().filter(|&&x| x > window).map(|x| window / x).collect();
        ts.extend([0.0, 1.0]);
        ts.sort_by(f64::total_cmp);
        for t in ts.windows(2) {
            panels.push(self.panel(t[0], t[1], Domain::Tail(window), &unit));
        }

        let mut total = C6::zeros();
        let mut error = Matrix6::zeros();
        for p in &panels {
            total += p.value;
            error += p.error;
        }
        let mut scale = scales(&total, self.rel_tol);
        let mut heap: BinaryHeap<Panel> = panels
            .into_iter()
            .map(|mut p| {
                p.priority = normalized(&p.error, &scale);
                p
            })
            .collect();

        loop {
            if normalized(&error, &scale) <= 1.0 {
                return Ok(Integral { value: total, error, evaluations: self.evaluations });
            }
            if self.evaluations >= self.max_evaluations {
                let worst = normalized(&error, &scale) * self.rel_tol;
                return Err(Error::NotConverged { error: worst, evaluations: self.evaluations });
            }
            let worst = heap.pop().expect("panel heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            let left = self.panel(worst.a, mid, worst.domain, &scale);
            let right = self.panel(mid, worst.b, worst.domain, &scale);
            total += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            scale = scales(&total, self.rel_tol);
            heap.push(left);
            heap.push(right);
        }
    }
}

fn scales(total: &C6, rel_tol: f64) -> Matrix6<f64> {
    Matrix6::from_fn(|i, j| rel_tol * (total[(i, i)].norm() * total[(j, j)].norm()).sqrt() + f64::MIN_POSITIVE)
}

fn normalized(error: &Matrix6<f64>, scale: &Matrix6<f64>) -> f64 {
    error.zip_map(scale, |e, s| e / s).max()
}
