use nalgebra::{DMatrix, Matrix2, Matrix4};

use super::z;
use crate::error::{Error, Result};
use crate::gaussian::{max_abs, validate_cm, GaussianState};

/// Tolerance of the standard-form zero-pattern check.
pub const STANDARD_FORM_TOL: f64 = 1e-9;

/// Tripartite covariance matrix in the block layout
///
/// ```text
/// [ R   D   F ]
/// [ D^T B   E ]
/// [ F^T E^T C ]
/// ```
///
/// for the mode order (remote `a`, Bell `b`, certifying `c`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripartiteCm {
    pub r: Matrix2<f64>,
    pub d: Matrix2<f64>,
    pub f: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub e: Matrix2<f64>,
    pub c: Matrix2<f64>,
}

/// Entries of a standard-form tripartite state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StandardFormParams {
    pub r: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub d_p: f64,
    pub e: f64,
    pub e_p: f64,
    pub e_pp: f64,
    pub f: [f64; 4],
}

fn block(m: &DMatrix<f64>, i: usize, j: usize) -> Matrix2<f64> {
    Matrix2::new(m[(2 * i, 2 * j)], m[(2 * i, 2 * j + 1)], m[(2 * i + 1, 2 * j)], m[(2 * i + 1, 2 * j + 1)])
}

impl TripartiteCm {
    /// Splits a symmetric 6x6 covariance matrix into blocks.
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.shape() != (6, 6) {
            return Err(Error::Dimension(format!("tripartite CM must be 6x6, got {:?}", m.shape())));
        }
        let report = validate_cm(m)?;
        if !report.is_symmetric() {
            return Err(Error::Unphysical(format!(
                "covariance matrix not symmetric (defect {:e})",
                report.symmetry_defect
            )));
        }
        Ok(Self {
            r: block(m, 0, 0),
            d: block(m, 0, 1),
            f: block(m, 0, 2),
            b: block(m, 1, 1),
            e: block(m, 1, 2),
            c: block(m, 2, 2),
        })
    }

    pub fn from_standard_form(p: &StandardFormParams) -> Self {
        Self {
            r: Matrix2::identity() * p.r,
            d: Matrix2::new(p.d, 0.0, 0.0, p.d_p),
            f: Matrix2::new(p.f[0], p.f[1], p.f[2], p.f[3]),
            b: Matrix2::identity() * p.b,
            e: Matrix2::new(p.e, p.e_pp, 0.0, p.e_p),
            c: Matrix2::identity() * p.c,
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let blocks = [
            [self.r, self.d, self.f],
            [self.d.transpose(), self.b, self.e],
            [self.f.transpose(), self.e.transpose(), self.c],
        ];
        DMatrix::from_fn(6, 6, |r, c| blocks[r / 2][c / 2][(r % 2, c % 2)])
    }

    pub fn to_state(&self) -> GaussianState {
        GaussianState::from_cm(self.to_matrix()).expect("6x6 matrix")
    }

    /// Remote-Bell subsystem `[[R, D], [D^T, B]]`.
    pub fn v_rb(&self) -> Matrix4<f64> {
        pair(&self.r, &self.d, &self.b)
    }

    /// Bell-certifying subsystem `[[B, E], [E^T, C]]`.
    pub fn v_bc(&self) -> Matrix4<f64> {
        pair(&self.b, &self.e, &self.c)
    }

    /// Remote-certifying subsystem `[[R, F], [F^T, C]]`.
    pub fn v_rc(&self) -> Matrix4<f64> {
        pair(&self.r, &self.f, &self.c)
    }

    /// Largest violation of the standard-form zero pattern: `R`, `B`, `C`
    /// proportional to the identity, `D` diagonal, `E` upper triangular.
    pub fn standard_form_defect(&self) -> f64 {
        let iso = |m: &Matrix2<f64>| m[(0, 1)].abs().max(m[(1, 0)].abs()).max((m[(0, 0)] - m[(1, 1)]).abs());
        iso(&self.r)
            .max(iso(&self.b))
            .max(iso(&self.c))
            .max(self.d[(0, 1)].abs())
            .max(self.d[(1, 0)].abs())
            .max(self.e[(1, 0)].abs())
    }

    pub fn is_standard_form(&self) -> bool {
        let scale = max_abs(&self.to_matrix()).max(1.0);
        self.standard_form_defect() <= STANDARD_FORM_TOL * scale
    }

    /// Exchanges the roles of the remote and certifying modes.
    pub fn swap_remote_and_certifying(&self) -> Self {
        Self {
            r: self.c,
            d: self.e.transpose(),
            f: self.f.transpose(),
            b: self.b,
            e: self.d.transpose(),
            c: self.r,
        }
    }

    /// Applies the local symplectic maps `s_a`, `s_b`, `s_c` to the three modes.
    pub fn local_transform(&self, s_a: &Matrix2<f64>, s_b: &Matrix2<f64>, s_c: &Matrix2<f64>) -> Self {
        Self {
            r: s_a * self.r * s_a.transpose(),
            d: s_a * self.d * s_b.transpose(),
            f: s_a * self.f * s_c.transpose(),
            b: s_b * self.b * s_b.transpose(),
            e: s_b * self.e * s_c.transpose(),
            c: s_c * self.c * s_c.transpose(),
        }
    }

    /// Brings the state to standard form with local symplectic maps: each
    /// single-mode block to `sqrt(det) I`, `D` diagonal, `E[1][0] = 0`.
    /// Returns the reduced state and the maps `[S_a, S_b, S_c]`.
    pub fn to_standard_form(&self) -> Result<(Self, [Matrix2<f64>; 3])> {
        let s_r = williamson(&self.r)?;
        let s_b = williamson(&self.b)?;
        let s_c = williamson(&self.c)?;
        let d = s_r * self.d * s_b.transpose();
        let svd = d.svd(true, true);
        let mut u = svd.u.expect("requested U");
        let mut v_t = svd.v_t.expect("requested V^T");
        if u.determinant() < 0.0 {
            u.set_column(1, &(-u.column(1)));
        }
        if v_t.determinant() < 0.0 {
            v_t.set_row(1, &(-v_t.row(1)));
        }
        let o_r = u.transpose();
        let o_b = v_t;
        let e = o_b * s_b * self.e * s_c.transpose();
        let phi = (-e[(1, 0)]).atan2(e[(1, 1)]);
        let (sin, cos) = phi.sin_cos();
        let o_c = Matrix2::new(cos, sin, -sin, cos);
        let maps = [o_r * s_r, o_b * s_b, o_c * s_c];
        let mut out = self.local_transform(&maps[0], &maps[1], &maps[2]);
        for m in [&mut out.r, &mut out.b, &mut out.c] {
            let x = 0.5 * (m[(0, 0)] + m[(1, 1)]);
            *m = Matrix2::new(x, 0.0, 0.0, x);
        }
        out.d[(0, 1)] = 0.0;
        out.d[(1, 0)] = 0.0;
        out.e[(1, 0)] = 0.0;
        Ok((out, maps))
    }
}

/// `det(X)^(1/4) X^(-1/2)`: symplectic, maps `X` to `sqrt(det X) I`.
fn williamson(x: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let eig = x.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::Unphysical(format!("single-mode block is not positive definite: {x}")));
    }
    let q = eig.eigenvectors;
    let inv_sqrt = Matrix2::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let det = eig.eigenvalues.product();
    Ok(q * inv_sqrt * q.transpose() * det.powf(0.25))
}

fn pair(a: &Matrix2<f64>, c: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

/// `M = B_1 + Z B_2 Z`, the covariance of the rescaled Bell outcome.
pub fn bell_matrix(v1: &TripartiteCm, v2: &TripartiteCm) -> Matrix2<f64> {
    let z = z();
    v1.b + z * v2.b * z
}
