use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{max_abs, SymplecticForm, PHYSICALITY_TOL, SYMMETRY_TOL};
use crate::error::{Error, Result};

/// Outcome of [`validate_cm`]: the smallest eigenvalue of `V + iJ/2` and the
/// largest asymmetry `|V_ij - V_ji|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub min_eigenvalue: f64,
    pub symmetry_defect: f64,
    pub symmetry_scale: f64,
}

impl ValidityReport {
    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect <= SYMMETRY_TOL * self.symmetry_scale
    }

    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -PHYSICALITY_TOL
    }

    pub fn is_valid(&self) -> bool {
        self.is_symmetric() && self.is_physical()
    }
}

fn check_cm_shape(cm: &DMatrix<f64>) -> Result<usize> {
    let (r, c) = cm.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return Err(Error::Dimension(format!(
            "covariance matrix must be square with positive even dimension, got {r}x{c}"
        )));
    }
    Ok(r / 2)
}

/// Checks symmetry and the uncertainty relation `V + iJ/2 >= 0`.
pub fn validate_cm(cm: &DMatrix<f64>) -> Result<ValidityReport> {
    let n = check_cm_shape(cm)?;
    let dim = 2 * n;
    let symmetry_defect = (cm - cm.transpose()).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let sym = (cm + cm.transpose()) * 0.5;
    let j = SymplecticForm::new(n)?.matrix();
    let h = DMatrix::<Complex64>::from_fn(dim, dim, |r, c| {
        Complex64::new(sym[(r, c)], 0.5 * j[(r, c)])
    });
    let min_eigenvalue = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(ValidityReport {
        min_eigenvalue,
        symmetry_defect,
        symmetry_scale: max_abs(cm).max(1.0),
    })
}

/// Purity `1 / (2^N sqrt(det V))` of an `N`-mode covariance matrix.
pub fn purity_of_cm(cm: &DMatrix<f64>) -> Result<f64> {
    let n = check_cm_shape(cm)?;
    let det = cm.determinant();
    if det <= 0.0 {
        return Err(Error::Unphysical(format!("non-positive determinant {det:e}")));
    }
    Ok(1.0 / (2f64.powi(n as i32) * det.sqrt()))
}

/// A Gaussian state: covariance matrix and mean vector over `N` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cm: DMatrix<f64>,
    mean: DVector<f64>,
}

impl GaussianState {
    pub fn new(cm: DMatrix<f64>, mean: DVector<f64>) -> Result<Self> {
        let n = check_cm_shape(&cm)?;
        if mean.len() != 2 * n {
            return Err(Error::Dimension(format!(
                "mean has length {} but the covariance matrix describes {n} modes",
                mean.len()
            )));
        }
        Ok(Self { cm, mean })
    }

    /// Zero-mean state with the given covariance matrix.
    pub fn from_cm(cm: DMatrix<f64>) -> Result<Self> {
        let dim = cm.nrows();
        Self::new(cm, DVector::zeros(dim))
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::EmptyModes);
        }
        Self::from_cm(DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5)
    }

    /// Single-mode thermal state with mean occupation `nbar`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        Self::from_cm(DMatrix::identity(2, 2) * (nbar + 0.5))
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let (c, s) = ((2.0 * r).cosh() * 0.5, (2.0 * r).sinh() * 0.5);
        let cm = DMatrix::from_row_slice(
            4,
            4,
            &[
                c, 0.0, s, 0.0, //
                0.0, c, 0.0, -s, //
                s, 0.0, c, 0.0, //
                0.0, -s, 0.0, c,
            ],
        );
        Self { cm, mean: DVector::zeros(4) }
    }

    pub fn n_modes(&self) -> usize {
        self.cm.nrows() / 2
    }

    pub fn cm(&self) -> &DMatrix<f64> {
        &self.cm
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn into_parts(self) -> (DMatrix<f64>, DVector<f64>) {
        (self.cm, self.mean)
    }

    /// Tensor product: `self` occupies the first modes.
    pub fn direct_sum(&self, other: &GaussianState) -> GaussianState {
        let (da, db) = (self.cm.nrows(), other.cm.nrows());
        let mut cm = DMatrix::zeros(da + db, da + db);
        cm.view_mut((0, 0), (da, da)).copy_from(&self.cm);
        cm.view_mut((da, da), (db, db)).copy_from(&other.cm);
        let mut mean = DVector::zeros(da + db);
        mean.rows_mut(0, da).copy_from(&self.mean);
        mean.rows_mut(da, db).copy_from(&other.mean);
        GaussianState { cm, mean }
    }

    pub fn validate(&self) -> ValidityReport {
        validate_cm(&self.cm).expect("shape checked at construction")
    }

    pub(crate) fn check_mode(&self, index: usize) -> Result<()> {
        if index >= self.n_modes() {
            return Err(Error::ModeOutOfRange { index, n_modes: self.n_modes() });
        }
        Ok(())
    }

    /// Reduced state on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<GaussianState> {
        if keep.is_empty() {
            return Err(Error::EmptyModes);
        }
        for (i, &m) in keep.iter().enumerate() {
            self.check_mode(m)?;
            if keep[..i].contains(&m) {
                return Err(Error::InvalidArgument(format!("mode {m} listed twice")));
            }
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let cm = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cm[(idx[r], idx[c])]);
        let mean = DVector::from_fn(idx.len(), |r, _| self.mean[idx[r]]);
        Ok(GaussianState { cm, mean })
    }

    /// Purity of the reduced state on `modes`.
    pub fn purity(&self, modes: &[usize]) -> Result<f64> {
        purity_of_cm(self.partial_trace(modes)?.cm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_passes_with_zero_margin() {
        let rep = GaussianState::vacuum(3).unwrap().validate();
        assert!(rep.is_valid());
        assert_abs_diff_eq!(rep.min_eigenvalue, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn sub_vacuum_fails() {
        let rep = validate_cm(&(DMatrix::identity(2, 2) * 0.25)).unwrap();
        assert!(!rep.is_valid());
        assert_abs_diff_eq!(rep.min_eigenvalue, -0.25, epsilon = 1e-14);
    }

    #[test]
    fn asymmetric_matrix_flagged() {
        let mut cm = DMatrix::identity(2, 2);
        cm[(0, 1)] = 1e-6;
        assert!(!validate_cm(&cm).unwrap().is_symmetric());
    }

    #[test]
    fn bad_shapes_rejected() {
        assert!(validate_cm(&DMatrix::identity(3, 3)).is_err());
        assert!(GaussianState::new(DMatrix::identity(2, 2), DVector::zeros(3)).is_err());
    }

    #[test]
    fn purities() {
        let vac = GaussianState::vacuum(1).unwrap();
        assert_abs_diff_eq!(vac.purity(&[0]).unwrap(), 1.0, epsilon = 1e-15);
        let th = GaussianState::thermal(0.5).unwrap();
        assert_abs_diff_eq!(th.purity(&[0]).unwrap(), 0.5, epsilon = 1e-15);
        let r = 1.0_f64;
        let tmsv = GaussianState::two_mode_squeezed(r);
        let marginal = tmsv.purity(&[1]).unwrap();
        assert_abs_diff_eq!(marginal, 1.0 / (2.0 * r).cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(marginal, 0.265_802_228_834_079_7, epsilon = 1e-12);
        assert_abs_diff_eq!(tmsv.purity(&[0, 1]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(tmsv.purity(&[]), Err(Error::EmptyModes));
    }

    #[test]
    fn partial_trace_cases() {
        let prod = GaussianState::vacuum(1)
            .unwrap()
            .direct_sum(&GaussianState::thermal(2.0).unwrap());
        assert_eq!(prod.partial_trace(&[0]).unwrap(), GaussianState::vacuum(1).unwrap());

        let r = 0.7_f64;
        let m = GaussianState::two_mode_squeezed(r).partial_trace(&[0]).unwrap();
        let expect = DMatrix::identity(2, 2) * ((2.0 * r).cosh() / 2.0);
        assert!((m.cm() - expect).amax() < 1e-14);

        let six = GaussianState::vacuum(6).unwrap();
        assert_eq!(six.partial_trace(&[0, 1, 2, 3, 4, 5]).unwrap(), six);

        assert!(matches!(
            six.partial_trace(&[6]),
            Err(Error::ModeOutOfRange { index: 6, n_modes: 6 })
        ));
    }

    #[test]
    fn partial_trace_reorders() {
        let tmsv = GaussianState::two_mode_squeezed(0.3);
        let th = GaussianState::thermal(1.0).unwrap();
        let s = tmsv.direct_sum(&th);
        let sub = s.partial_trace(&[2, 0]).unwrap();
        assert_abs_diff_eq!(sub.cm()[(0, 0)], 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sub.cm()[(2, 2)], (0.6f64).cosh() / 2.0, epsilon = 1e-15);
    }
}
