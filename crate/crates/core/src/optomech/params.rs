use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Bell,
    Certifying,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Bell, Branch::Certifying];

    pub fn index(self) -> usize {
        match self {
            Branch::Bell => 0,
            Branch::Certifying => 1,
        }
    }
}

/// Drive and filter settings of one cavity mode, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchParams {
    /// Drive wavelength (m).
    pub wavelength: f64,
    /// Input power (W).
    pub power: f64,
    /// Cavity decay rate (rad/s).
    pub kappa: f64,
    /// Effective detuning (rad/s).
    pub detuning: f64,
    /// Filter center relative to the drive (rad/s).
    pub filter_center: f64,
    /// Filter time; the bandwidth is its inverse (s).
    pub filter_time: f64,
}

impl BranchParams {
    /// Angular frequency of the drive laser (rad/s).
    pub fn laser_frequency(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }
}

/// Physical parameters of one site, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechParams {
    /// Cavity length (m).
    pub length: f64,
    /// Effective mass (kg).
    pub mass: f64,
    /// Mechanical angular frequency (rad/s).
    pub omega_m: f64,
    /// Mechanical quality factor; the damping rate is `omega_m / q_m`.
    pub q_m: f64,
    /// Bath temperature (K).
    pub temperature: f64,
    pub bell: BranchParams,
    pub certifying: BranchParams,
}

impl Default for OptomechParams {
    /// A 10 MHz, 10 ng resonator in a 1 mm cavity at 0.4 K, with a
    /// Stokes-filtered Bell drive and an anti-Stokes-filtered certifying drive.
    fn default() -> Self {
        let omega_m = 2.0 * PI * 10e6;
        let tau_b = 8.0 / omega_m;
        OptomechParams {
            length: 1e-3,
            mass: 10e-12,
            omega_m,
            q_m: 1e5,
            temperature: 0.4,
            bell: BranchParams {
                wavelength: 810.045e-9,
                power: 4e-3,
                kappa: 0.6 * omega_m,
                detuning: -omega_m,
                filter_center: -omega_m,
                filter_time: tau_b,
            },
            certifying: BranchParams {
                wavelength: 810.373e-9,
                power: 4.5e-3,
                kappa: 0.6 * omega_m,
                detuning: omega_m,
                filter_center: omega_m,
                filter_time: tau_b / 6.0,
            },
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be non-negative and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")))
    }
}

impl OptomechParams {
    pub fn branch(&self, branch: Branch) -> &BranchParams {
        match branch {
            Branch::Bell => &self.bell,
            Branch::Certifying => &self.certifying,
        }
    }

    pub fn branch_mut(&mut self, branch: Branch) -> &mut BranchParams {
        match branch {
            Branch::Bell => &mut self.bell,
            Branch::Certifying => &mut self.certifying,
        }
    }

    /// Mechanical damping rate `omega_m / q_m` (rad/s).
    pub fn gamma_m(&self) -> f64 {
        self.omega_m / self.q_m
    }

    /// `hbar omega_m / (k_B T)`; infinite at zero temperature.
    pub fn theta(&self) -> f64 {
        if self.temperature == 0.0 {
            f64::INFINITY
        } else {
            HBAR * self.omega_m / (BOLTZMANN * self.temperature)
        }
    }

    /// Thermal occupation of the mechanical mode.
    pub fn thermal_occupation(&self) -> f64 {
        1.0 / self.theta().exp_m1()
    }

    pub fn validate(&self) -> Result<()> {
        positive("length", self.length)?;
        positive("mass", self.mass)?;
        positive("omega_m", self.omega_m)?;
        finite("q_m", self.q_m)?;
        if self.q_m <= 1.0 {
            return Err(Error::InvalidArgument(format!("q_m must exceed 1, got {}", self.q_m)));
        }
        non_negative("temperature", self.temperature)?;
        for (tag, b) in [("bell", &self.bell), ("certifying", &self.certifying)] {
            positive(&format!("{tag}.wavelength"), b.wavelength)?;
            non_negative(&format!("{tag}.power"), b.power)?;
            positive(&format!("{tag}.kappa"), b.kappa)?;
            finite(&format!("{tag}.detuning"), b.detuning)?;
            finite(&format!("{tag}.filter_center"), b.filter_center)?;
            positive(&format!("{tag}.filter_time"), b.filter_time)?;
        }
        Ok(())
    }
}

/// `G_0 = (omega_L / L) sqrt(hbar / (m omega_m))` (rad/s).
pub fn single_photon_coupling(params: &OptomechParams, branch: Branch) -> f64 {
    let b = params.branch(branch);
    b.laser_frequency() / params.length * (HBAR / (params.mass * params.omega_m)).sqrt()
}

/// `|E| = sqrt(2 kappa P / (hbar omega_L))` (rad/s).
pub fn drive_rate(params: &OptomechParams, branch: Branch) -> f64 {
    let b = params.branch(branch);
    (2.0 * b.kappa * b.power / (HBAR * b.laser_frequency())).sqrt()
}
