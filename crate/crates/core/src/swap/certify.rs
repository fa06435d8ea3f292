use std::fmt;
use std::str::FromStr;

use super::TripartiteCm;
use crate::error::{Error, Result};
use crate::gaussian::purity_of_cm;

use super::output::to_dmatrix;

/// Relative margin required for the strict purity inequalities.
pub const CLASSIFY_REL_TOL: f64 = 1e-9;

/// Minimum PTS eigenvalues of the symmetric protocol output, from the
/// input-state determinants alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForms {
    pub eta_remote_minus: f64,
    pub eta_certifying_minus: f64,
    pub eta_certifying_plus: f64,
}

/// Closed forms for two identical standard-form inputs:
/// `eta_R = sqrt(det V_RB) / b` and
/// `eta_C(+-) = [det V_BC + b^2 c^2 +- sqrt((b^2 c^2 - det V_BC)^2 - (2 b c e' e'')^2)]^(1/2) / (b sqrt 2)`.
pub fn symmetric_closed_forms(v: &TripartiteCm) -> Result<ClosedForms> {
    if !v.is_standard_form() {
        return Err(Error::NotStandardForm { defect: v.standard_form_defect() });
    }
    let b = v.b[(0, 0)];
    let c = v.c[(0, 0)];
    let (e_p, e_pp) = (v.e[(1, 1)], v.e[(0, 1)]);
    let det_rb = v.v_rb().determinant();
    let det_bc = v.v_bc().determinant();
    let bc2 = b * b * c * c;
    let disc = ((bc2 - det_bc).powi(2) - (2.0 * b * c * e_p * e_pp).powi(2)).max(0.0).sqrt();
    let scale = 1.0 / (b * std::f64::consts::SQRT_2);
    Ok(ClosedForms {
        eta_remote_minus: det_rb.max(0.0).sqrt() / b,
        eta_certifying_minus: scale * (det_bc + bc2 - disc).max(0.0).sqrt(),
        eta_certifying_plus: scale * (det_bc + bc2 + disc).sqrt(),
    })
}

/// `chi = sqrt(det V_RB / det V_BC)`, invariant under local symplectic maps.
pub fn chi(v: &TripartiteCm) -> Result<f64> {
    let det_rb = v.v_rb().determinant();
    let det_bc = v.v_bc().determinant();
    if det_bc <= 0.0 || det_rb <= 0.0 {
        return Err(Error::Unphysical(format!(
            "subsystem determinants must be positive (det V_RB = {det_rb:e}, det V_BC = {det_bc:e})"
        )));
    }
    Ok((det_rb / det_bc).sqrt())
}

/// Purities of the Bell mode, the remote-Bell pair and the Bell-certifying pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purities {
    pub mu_b: f64,
    pub mu_rb: f64,
    pub mu_bc: f64,
}

pub fn purities_triplet(v: &TripartiteCm) -> Result<Purities> {
    let b = nalgebra::DMatrix::from_fn(2, 2, |r, c| v.b[(r, c)]);
    Ok(Purities {
        mu_b: purity_of_cm(&b)?,
        mu_rb: purity_of_cm(&to_dmatrix(&v.v_rb()))?,
        mu_bc: purity_of_cm(&to_dmatrix(&v.v_bc()))?,
    })
}

/// The four classes of tripartite input states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolClass {
    /// `mu_RB > mu_BC > mu_B`: swapped entanglement is certified locally.
    Certifiable,
    /// `mu_RB > mu_B >= mu_BC`: swapping works but the certifying pair is separable.
    NotCertifiable,
    /// `mu_BC > mu_B` and `mu_BC >= mu_RB`: the certifying pair ends up at least as entangled.
    WrongSwapping,
    /// `mu_RB <= mu_B` and `mu_BC <= mu_B`.
    NoSwapping,
}

impl ProtocolClass {
    pub const ALL: [ProtocolClass; 4] = [
        ProtocolClass::Certifiable,
        ProtocolClass::NotCertifiable,
        ProtocolClass::WrongSwapping,
        ProtocolClass::NoSwapping,
    ];

    /// Class number 1-4.
    pub fn number(self) -> u8 {
        match self {
            ProtocolClass::Certifiable => 1,
            ProtocolClass::NotCertifiable => 2,
            ProtocolClass::WrongSwapping => 3,
            ProtocolClass::NoSwapping => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolClass::Certifiable => "certifiable",
            ProtocolClass::NotCertifiable => "not_certifiable",
            ProtocolClass::WrongSwapping => "wrong_swapping",
            ProtocolClass::NoSwapping => "no_swapping",
        }
    }
}

impl fmt::Display for ProtocolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class {s:?}")))
    }
}

fn greater(x: f64, y: f64) -> bool {
    x > y + CLASSIFY_REL_TOL * x.abs().max(y.abs())
}

/// Classifies by the purity inequalities. Every inequality is strict with a
/// relative margin; a state on a boundary falls into the class that does not
/// certify.
pub fn classify(p: &Purities) -> ProtocolClass {
    let rb_swaps = greater(p.mu_rb, p.mu_b);
    let bc_swaps = greater(p.mu_bc, p.mu_b);
    match (rb_swaps, bc_swaps) {
        (true, true) if greater(p.mu_rb, p.mu_bc) => ProtocolClass::Certifiable,
        (true, true) => ProtocolClass::WrongSwapping,
        (true, false) => ProtocolClass::NotCertifiable,
        (false, true) => ProtocolClass::WrongSwapping,
        (false, false) => ProtocolClass::NoSwapping,
    }
}

/// `mu_x mu_y / sqrt(mu_x^2 + mu_y^2 - mu_x^2 mu_y^2)`: a two-mode state with
/// local purities `mu_x`, `mu_y` is inseparable iff its global purity exceeds this.
pub fn inseparability_bound(mu_x: f64, mu_y: f64) -> Result<f64> {
    for mu in [mu_x, mu_y] {
        if !(mu > 0.0 && mu <= 1.0 + 1e-12) {
            return Err(Error::InvalidPurity(mu));
        }
    }
    let (x2, y2) = (mu_x * mu_x, mu_y * mu_y);
    Ok(mu_x * mu_y / (x2 + y2 - x2 * y2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swap::{conditional_output_cm, StandardFormParams};
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix2;

    fn sf() -> TripartiteCm {
        TripartiteCm::from_standard_form(&StandardFormParams {
            r: 2.2,
            b: 1.9,
            c: 1.4,
            d: 1.3,
            d_p: -1.2,
            e: 0.7,
            e_p: -0.6,
            ..Default::default()
        })
    }

    #[test]
    fn closed_forms_match_general_path() {
        let v = sf();
        let cf = symmetric_closed_forms(&v).unwrap();
        let out = conditional_output_cm(&v, &v).unwrap();
        assert_abs_diff_eq!(cf.eta_remote_minus, out.eta_remote, epsilon = 1e-10);
        assert_abs_diff_eq!(cf.eta_certifying_minus, out.eta_certifying, epsilon = 1e-10);
        assert_abs_diff_eq!(cf.eta_remote_minus, chi(&v).unwrap() * cf.eta_certifying_minus, epsilon = 1e-12);
    }

    #[test]
    fn product_state_closed_form() {
        let v = TripartiteCm::from_standard_form(&StandardFormParams { r: 0.9, b: 1.1, c: 0.7, ..Default::default() });
        let cf = symmetric_closed_forms(&v).unwrap();
        assert_abs_diff_eq!(cf.eta_remote_minus, 0.9, epsilon = 1e-14);
    }

    #[test]
    fn closed_forms_need_standard_form() {
        let mut v = sf();
        v.b[(0, 1)] = 0.1;
        v.b[(1, 0)] = 0.1;
        assert!(matches!(symmetric_closed_forms(&v), Err(Error::NotStandardForm { .. })));
    }

    #[test]
    fn chi_symmetries() {
        let mut v = sf();
        v.c = v.r;
        v.e = v.d.transpose();
        assert_abs_diff_eq!(chi(&v).unwrap(), 1.0, epsilon = 1e-14);

        let w = sf();
        let swapped = w.swap_remote_and_certifying();
        assert_abs_diff_eq!(chi(&swapped).unwrap(), 1.0 / chi(&w).unwrap(), epsilon = 1e-13);
    }

    #[test]
    fn chi_rejects_singular_subsystem() {
        let mut v = sf();
        v.b = Matrix2::zeros();
        v.e = Matrix2::zeros();
        assert!(chi(&v).is_err());
    }

    #[test]
    fn classification_table() {
        let p = |rb, bc| Purities { mu_b: 0.3, mu_rb: rb, mu_bc: bc };
        assert_eq!(classify(&p(0.5, 0.4)), ProtocolClass::Certifiable);
        assert_eq!(classify(&p(0.5, 0.2)), ProtocolClass::NotCertifiable);
        assert_eq!(classify(&p(0.4, 0.5)), ProtocolClass::WrongSwapping);
        assert_eq!(classify(&p(0.2, 0.5)), ProtocolClass::WrongSwapping);
        assert_eq!(classify(&p(0.2, 0.1)), ProtocolClass::NoSwapping);
        // Boundaries never certify.
        assert_eq!(classify(&p(0.5, 0.3)), ProtocolClass::NotCertifiable);
        assert_eq!(classify(&p(0.5, 0.5)), ProtocolClass::WrongSwapping);
        assert_eq!(classify(&p(0.5, 0.3 * (1.0 + 1e-12))), ProtocolClass::NotCertifiable);
    }

    #[test]
    fn class_tokens_round_trip() {
        for c in ProtocolClass::ALL {
            assert_eq!(c.as_str().parse::<ProtocolClass>().unwrap(), c);
        }
    }

    #[test]
    fn product_state_does_not_swap() {
        // Remote thermal, Bell and certifying modes uncorrelated.
        let v = TripartiteCm::from_standard_form(&StandardFormParams { r: 1.5, b: 0.8, c: 0.5, ..Default::default() });
        let p = purities_triplet(&v).unwrap();
        assert_abs_diff_eq!(p.mu_rb, p.mu_b / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.mu_bc, p.mu_b, epsilon = 1e-14);
        assert_eq!(classify(&p), ProtocolClass::NoSwapping);
    }

    #[test]
    fn bound_values() {
        assert_abs_diff_eq!(inseparability_bound(1.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inseparability_bound(0.5, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(inseparability_bound(0.0, 0.5).is_err());
        assert!(inseparability_bound(0.5, 1.5).is_err());
    }
}
