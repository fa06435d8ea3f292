use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// The `N`-mode symplectic form, a direct sum of `[[0, 1], [-1, 0]]` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n_modes: usize,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Dimension("symplectic form needs at least one mode".into()));
        }
        Ok(Self { n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let dim = 2 * self.n_modes;
        let mut j = DMatrix::zeros(dim, dim);
        for k in 0..self.n_modes {
            j[(2 * k, 2 * k + 1)] = 1.0;
            j[(2 * k + 1, 2 * k)] = -1.0;
        }
        j
    }
}

/// Symplectic eigenvalues of a covariance matrix, sorted ascending.
///
/// Computed as the moduli of the eigenvalues of `J V`, which come in pairs
/// `+-i nu`; each pair contributes one value.
pub fn symplectic_eigenvalues(cm: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (rows, cols) = cm.shape();
    if rows != cols || rows % 2 != 0 || rows == 0 {
        return Err(Error::Dimension(format!(
            "covariance matrix must be square with even dimension, got {rows}x{cols}"
        )));
    }
    let n = rows / 2;
    let j = SymplecticForm::new(n)?.matrix();
    let jv = &j * cm;
    let mut moduli: Vec<f64> = jv.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);

    let scale = moduli.last().copied().unwrap_or(0.0).max(1.0);
    let mut out = Vec::with_capacity(n);
    for pair in moduli.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        if (a - b).abs() > 1e-9 * scale {
            return Err(Error::Unphysical(format!(
                "symplectic spectrum does not pair up ({a:e} vs {b:e})"
            )));
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}
