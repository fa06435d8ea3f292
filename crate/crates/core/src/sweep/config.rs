use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::optomech::{BranchParams, OptomechParams};

/// A number, or a string `"<x> omega_m"` / `"<x> / omega_m"` resolved
/// against the mechanical frequency.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Value(f64),
    Expr(String),
}

impl Quantity {
    pub fn resolve(&self, omega_m: f64) -> std::result::Result<f64, String> {
        let s = match self {
            Quantity::Value(v) => return Ok(*v),
            Quantity::Expr(s) => s.trim(),
        };
        let bad = || format!("cannot read {s:?}; expected a number, \"<x> omega_m\" or \"<x> / omega_m\"");
        let (head, divide) = if let Some(h) = s.strip_suffix("omega_m") {
            let h = h.trim_end();
            match h.strip_suffix('/') {
                Some(h) => (h, true),
                None => (h.strip_suffix('*').unwrap_or(h), false),
            }
        } else {
            return s.parse::<f64>().map_err(|_| bad());
        };
        let x: f64 = head.trim().parse().map_err(|_| bad())?;
        Ok(if divide { x / omega_m } else { x * omega_m })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchConfig {
    wavelength: f64,
    power: f64,
    kappa: Quantity,
    detuning: Quantity,
    filter_center: Quantity,
    filter_time: Quantity,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteConfig {
    length: f64,
    mass: f64,
    omega_m: f64,
    q_m: f64,
    temperature: f64,
    bell: BranchConfig,
    certifying: BranchConfig,
}

pub(crate) fn toml_error(text: &str, err: toml::de::Error) -> Error {
    let line = err.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1)).unwrap_or(0);
    Error::Config { line, message: err.message().to_string() }
}

fn resolve(q: &Quantity, omega_m: f64, key: &str) -> Result<f64> {
    q.resolve(omega_m).map_err(|m| Error::Config { line: 0, message: format!("{key}: {m}") })
}

fn branch(c: &BranchConfig, omega_m: f64, tag: &str) -> Result<BranchParams> {
    Ok(BranchParams {
        wavelength: c.wavelength,
        power: c.power,
        kappa: resolve(&c.kappa, omega_m, &format!("{tag}.kappa"))?,
        detuning: resolve(&c.detuning, omega_m, &format!("{tag}.detuning"))?,
        filter_center: resolve(&c.filter_center, omega_m, &format!("{tag}.filter_center"))?,
        filter_time: resolve(&c.filter_time, omega_m, &format!("{tag}.filter_time"))?,
    })
}

/// Parses a site description: top-level mechanical keys plus `[bell]` and
/// `[certifying]` sections, SI units throughout.
pub fn parse_params(text: &str) -> Result<OptomechParams> {
    let c: SiteConfig = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let p = OptomechParams {
        length: c.length,
        mass: c.mass,
        omega_m: c.omega_m,
        q_m: c.q_m,
        temperature: c.temperature,
        bell: branch(&c.bell, c.omega_m, "bell")?,
        certifying: branch(&c.certifying, c.omega_m, "certifying")?,
    };
    p.validate().map_err(|e| Error::Config { line: 0, message: e.to_string() })?;
    Ok(p)
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_params(path: &Path) -> Result<OptomechParams> {
    parse_params(&read_text(path)?)
}
