#![allow(dead_code)]

use cvswap_core::swap::{GainMatrices, StandardFormParams, TripartiteCm};
use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn embed(n: usize, modes: &[usize], s: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::identity(2 * n, 2 * n);
    for (a, &ma) in modes.iter().enumerate() {
        for (b, &mb) in modes.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    out[(2 * ma + r, 2 * mb + c)] = s[(2 * a + r, 2 * b + c)];
                }
            }
        }
    }
    out
}

fn rotation(t: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()])
}

/// Random symplectic matrix on `n` modes built from phase shifts, squeezers
/// and beam splitters.
pub fn random_symplectic(rng: &mut impl Rng, n: usize, max_squeeze: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n, 2 * n);
    for _ in 0..4 * n {
        let m = rng.random_range(0..n);
        let r = rng.random_range(-max_squeeze..max_squeeze);
        let sq = DMatrix::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
        let local = rotation(rng.random_range(0.0..6.3)) * sq * rotation(rng.random_range(0.0..6.3));
        s = embed(n, &[m], &local) * s;
        if n > 1 {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            let t: f64 = rng.random_range(0.0..1.6);
            let (c, sn) = (t.cos(), t.sin());
            let bs = DMatrix::from_row_slice(
                4,
                4,
                &[c, 0.0, sn, 0.0, 0.0, c, 0.0, sn, -sn, 0.0, c, 0.0, 0.0, -sn, 0.0, c],
            );
            s = embed(n, &[i, j], &bs) * s;
        }
    }
    s
}

/// Random physical `n`-mode covariance matrix: a random symplectic map
/// applied to a thermal state.
pub fn random_cm(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let nu = 0.5 + rng.random_range(0.0..1.5);
        d[(2 * k, 2 * k)] = nu;
        d[(2 * k + 1, 2 * k + 1)] = nu;
    }
    let s = random_symplectic(rng, n, 0.8);
    let v = &s * d * s.transpose();
    (&v + v.transpose()) * 0.5
}

pub fn random_tripartite(rng: &mut impl Rng) -> TripartiteCm {
    TripartiteCm::from_matrix(&random_cm(rng, 3)).unwrap()
}

/// Random standard-form state with `e'' = 0` that is physical.
pub fn random_standard_form(rng: &mut impl Rng) -> TripartiteCm {
    loop {
        let (s, _) = random_tripartite(rng).to_standard_form().unwrap();
        let mut p = StandardFormParams {
            r: s.r[(0, 0)],
            b: s.b[(0, 0)],
            c: s.c[(0, 0)],
            d: s.d[(0, 0)],
            d_p: s.d[(1, 1)],
            e: s.e[(0, 0)],
            e_p: s.e[(1, 1)],
            e_pp: 0.0,
            f: [s.f[(0, 0)], s.f[(0, 1)], s.f[(1, 0)], s.f[(1, 1)]],
        };
        p.e_pp = 0.0;
        let v = TripartiteCm::from_standard_form(&p);
        if v.to_state().validate().is_physical() {
            return v;
        }
    }
}

pub fn random_gains(rng: &mut impl Rng) -> GainMatrices {
    let mut m = || Matrix2::from_fn(|_, _| rng.random_range(-1.5..1.5));
    GainMatrices { a1: m(), a2: m(), c1: m(), c2: m() }
}

pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn two_mode_squeezer(r: f64) -> DMatrix<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    DMatrix::from_row_slice(4, 4, &[c, 0.0, s, 0.0, 0.0, c, 0.0, -s, s, 0.0, c, 0.0, 0.0, -s, 0.0, c])
}

fn beam_splitter(t: f64) -> DMatrix<f64> {
    let (c, s) = (t.cos(), t.sin());
    DMatrix::from_row_slice(4, 4, &[c, 0.0, s, 0.0, 0.0, c, 0.0, s, -s, 0.0, c, 0.0, 0.0, -s, 0.0, c])
}

/// Standard-form state (`e'' = 0`) from thermal modes with remote-Bell
/// squeezing, a weaker Bell-certifying interaction and random local maps;
/// these often satisfy the certifying purity ordering.
pub fn random_structured_standard_form(rng: &mut impl Rng) -> TripartiteCm {
    loop {
        let mut d = DMatrix::zeros(6, 6);
        for k in 0..3 {
            let nu = 0.5 + rng.random_range(0.0..1.0);
            d[(2 * k, 2 * k)] = nu;
            d[(2 * k + 1, 2 * k + 1)] = nu;
        }
        let mut s = embed(3, &[0, 1], &two_mode_squeezer(rng.random_range(0.2..1.4)));
        let bc = if rng.random_bool(0.5) {
            two_mode_squeezer(rng.random_range(0.0..0.7))
        } else {
            beam_splitter(rng.random_range(0.0..0.8))
        };
        s = embed(3, &[1, 2], &bc) * s;
        s = embed(3, &[0, 2], &two_mode_squeezer(rng.random_range(-0.2..0.2))) * s;
        for m in 0..3 {
            let r: f64 = rng.random_range(-0.5..0.5);
            let sq = DMatrix::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
            s = embed(3, &[m], &(rotation(rng.random_range(0.0..6.3)) * sq)) * s;
        }
        let v = &s * d * s.transpose();
        let (std, _) = TripartiteCm::from_matrix(&((&v + v.transpose()) * 0.5)).unwrap().to_standard_form().unwrap();
        let mut e = std.e;
        e[(0, 1)] = 0.0;
        let out = TripartiteCm { e, ..std };
        if out.to_state().validate().is_physical() {
            return out;
        }
    }
}
