use nalgebra::DMatrix;

use super::symplectic_eigenvalues;
use crate::error::{Error, Result};

/// Two disjoint ordered groups of modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    party_a: Vec<usize>,
    party_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(party_a: Vec<usize>, party_b: Vec<usize>) -> Result<Self> {
        if party_a.is_empty() || party_b.is_empty() {
            return Err(Error::EmptyModes);
        }
        let all: Vec<usize> = party_a.iter().chain(&party_b).copied().collect();
        for (i, m) in all.iter().enumerate() {
            if all[..i].contains(m) {
                return Err(Error::OverlappingBipartition(*m));
            }
        }
        Ok(Self { party_a, party_b })
    }

    /// Mode 0 against mode 1.
    pub fn two_mode() -> Self {
        Self { party_a: vec![0], party_b: vec![1] }
    }

    pub fn party_a(&self) -> &[usize] {
        &self.party_a
    }

    pub fn party_b(&self) -> &[usize] {
        &self.party_b
    }

    fn max_mode(&self) -> usize {
        self.party_a.iter().chain(&self.party_b).copied().max().unwrap_or(0)
    }

    fn covers(&self, n_modes: usize) -> bool {
        self.party_a.len() + self.party_b.len() == n_modes && self.max_mode() < n_modes
    }
}

fn n_modes_of(cm: &DMatrix<f64>) -> Result<usize> {
    let (r, c) = cm.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return Err(Error::Dimension(format!("expected square even-dimensional matrix, got {r}x{c}")));
    }
    Ok(r / 2)
}

/// `P V P` with `P = diag(1, -1)` on every mode of party B and identity elsewhere.
pub fn partial_transpose(cm: &DMatrix<f64>, bipartition: &Bipartition) -> Result<DMatrix<f64>> {
    let n = n_modes_of(cm)?;
    if !bipartition.covers(n) {
        return Err(Error::IncompleteBipartition { n_modes: n });
    }
    let mut sign = vec![1.0; 2 * n];
    for &m in bipartition.party_b() {
        sign[2 * m + 1] = -1.0;
    }
    Ok(DMatrix::from_fn(2 * n, 2 * n, |r, c| sign[r] * sign[c] * cm[(r, c)]))
}

/// Minimum symplectic eigenvalue of the partially transposed covariance matrix
/// of the subsystem `party_a + party_b`.
pub fn min_pts_eigenvalue(cm: &DMatrix<f64>, bipartition: &Bipartition) -> Result<f64> {
    let n = n_modes_of(cm)?;
    if bipartition.max_mode() >= n {
        return Err(Error::ModeOutOfRange { index: bipartition.max_mode(), n_modes: n });
    }
    let modes: Vec<usize> = bipartition.party_a.iter().chain(&bipartition.party_b).copied().collect();
    let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| cm[(idx[r], idx[c])]);
    let local = Bipartition {
        party_a: (0..bipartition.party_a.len()).collect(),
        party_b: (bipartition.party_a.len()..modes.len()).collect(),
    };
    let pt = partial_transpose(&sub, &local)?;
    Ok(symplectic_eigenvalues(&pt)?[0])
}

/// Closed-form minimum PTS eigenvalue of a two-mode covariance matrix
/// `[[A, C], [C^T, B]]`, using `Sigma = det A + det B - 2 det C`.
pub fn two_mode_min_pts_eigenvalue(cm: &DMatrix<f64>) -> Result<f64> {
    if cm.shape() != (4, 4) {
        return Err(Error::Dimension(format!("expected 4x4, got {:?}", cm.shape())));
    }
    let det2 = |r: usize, c: usize| cm[(r, c)] * cm[(r + 1, c + 1)] - cm[(r, c + 1)] * cm[(r + 1, c)];
    let sigma = det2(0, 0) + det2(2, 2) - 2.0 * det2(0, 2);
    let det = cm.determinant();
    let disc = (sigma * sigma - 4.0 * det).max(0.0);
    let inner = (sigma - disc.sqrt()).max(0.0);
    Ok((inner / 2.0).sqrt())
}

pub fn log_negativity_from_eta(eta: f64) -> f64 {
    (-(2.0 * eta).ln()).max(0.0)
}

/// `E_N = max(0, -ln 2 eta)` across the given bipartition.
pub fn log_negativity(cm: &DMatrix<f64>, bipartition: &Bipartition) -> Result<f64> {
    Ok(log_negativity_from_eta(min_pts_eigenvalue(cm, bipartition)?))
}
