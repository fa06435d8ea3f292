use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use super::config::{read_text, toml_error, Quantity};
use crate::error::{Error, Result};
use crate::optomech::OptomechParams;

/// Parameters a sweep axis can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
pub enum AxisParam {
    /// Bell-cavity decay rate (rad/s).
    #[serde(rename = "kappa")]
    Kappa,
    /// Bell filter time (s).
    #[serde(rename = "tau_b")]
    TauB,
    /// Bell drive power (W).
    #[serde(rename = "P_b")]
    PowerB,
}

impl AxisParam {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisParam::Kappa => "kappa",
            AxisParam::TauB => "tau_b",
            AxisParam::PowerB => "P_b",
        }
    }

    /// Column label with the unit used in sweep output.
    pub fn column(self) -> &'static str {
        match self {
            AxisParam::Kappa => "kappa_over_omega_m",
            AxisParam::TauB => "tau_b_times_omega_m",
            AxisParam::PowerB => "P_b_watt",
        }
    }

    /// Converts an SI value to the output unit.
    pub fn display_value(self, si: f64, omega_m: f64) -> f64 {
        match self {
            AxisParam::Kappa => si / omega_m,
            AxisParam::TauB => si * omega_m,
            AxisParam::PowerB => si,
        }
    }

    pub fn apply(self, params: &mut OptomechParams, value: f64) {
        match self {
            AxisParam::Kappa => params.bell.kappa = value,
            AxisParam::TauB => params.bell.filter_time = value,
            AxisParam::PowerB => params.bell.power = value,
        }
    }
}

impl fmt::Display for AxisParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa" => Ok(AxisParam::Kappa),
            "tau_b" => Ok(AxisParam::TauB),
            "P_b" => Ok(AxisParam::PowerB),
            _ => Err(Error::InvalidArgument(format!("unknown axis {s:?}; expected kappa, tau_b or P_b"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn new(param: AxisParam, min: f64, max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let axis = Axis { param, min, max, points, spacing };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        let name = self.param;
        if self.points < 2 {
            return Err(Error::InvalidArgument(format!("axis {name}: need at least 2 points, got {}", self.points)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidArgument(format!("axis {name}: need finite min < max, got [{}, {}]", self.min, self.max)));
        }
        let floor_ok = match name {
            AxisParam::PowerB => self.min >= 0.0,
            _ => self.min > 0.0,
        };
        if !floor_ok || (self.spacing == Spacing::Log && self.min <= 0.0) {
            return Err(Error::InvalidArgument(format!("axis {name}: range must be positive, got min {}", self.min)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    return self.max;
                }
                let s = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + s * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(s),
                }
            })
            .collect()
    }
}

/// Rules tying the certifying branch to the swept Bell branch.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Links {
    /// `kappa_c = kappa_b`.
    pub equal_kappa: bool,
    /// `tau_c = tau_b / ratio`.
    pub tau_ratio: Option<f64>,
    /// `P_c = P_b + offset` (W).
    pub power_offset: Option<f64>,
}

impl Links {
    pub fn apply(&self, p: &mut OptomechParams) {
        if self.equal_kappa {
            p.certifying.kappa = p.bell.kappa;
        }
        if let Some(r) = self.tau_ratio {
            p.certifying.filter_time = p.bell.filter_time / r;
        }
        if let Some(off) = self.power_offset {
            p.certifying.power = p.bell.power + off;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: OptomechParams,
    pub axes: [Axis; 2],
    pub links: Links,
}

impl SweepSpec {
    pub fn new(base: OptomechParams, axes: [Axis; 2], links: Links) -> Result<Self> {
        if axes[0].param == axes[1].param {
            return Err(Error::InvalidArgument(format!("both axes sweep {}", axes[0].param)));
        }
        if let Some(r) = links.tau_ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidArgument(format!("tau_ratio must be positive, got {r}")));
            }
        }
        if let Some(o) = links.power_offset {
            if !o.is_finite() {
                return Err(Error::InvalidArgument(format!("power_offset must be finite, got {o}")));
            }
        }
        Ok(SweepSpec { base, axes, links })
    }

    /// Grid values of both axes (SI).
    pub fn grid(&self) -> [Vec<f64>; 2] {
        [self.axes[0].values(), self.axes[1].values()]
    }

    /// Parameters at grid point `(i, j)`.
    pub fn params_at(&self, grid: &[Vec<f64>; 2], i: usize, j: usize) -> OptomechParams {
        let mut p = self.base;
        self.axes[0].param.apply(&mut p, grid[0][i]);
        self.axes[1].param.apply(&mut p, grid[1][j]);
        self.links.apply(&mut p);
        p
    }

    pub fn len(&self) -> usize {
        self.axes[0].points * self.axes[1].points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisConfig {
    name: AxisParam,
    min: Quantity,
    max: Quantity,
    points: usize,
    #[serde(default)]
    spacing: Spacing,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinksConfig {
    #[serde(default)]
    equal_kappa: bool,
    tau_ratio: Option<f64>,
    power_offset: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecConfig {
    axis1: AxisConfig,
    axis2: AxisConfig,
    #[serde(default)]
    links: LinksConfig,
    #[serde(default)]
    fixed: BTreeMap<AxisParam, Quantity>,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => Error::Config { line: 0, message: other.to_string() },
    }
}

/// Parses `[axis1]`, `[axis2]` and optional `[links]` and `[fixed]`
/// sections; `[fixed]` overrides base values of the axis parameters.
pub fn parse_spec(text: &str, base: OptomechParams) -> Result<SweepSpec> {
    let c: SpecConfig = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let w = base.omega_m;
    let mut base = base;
    for (param, q) in &c.fixed {
        let v = q.resolve(w).map_err(|m| Error::Config { line: 0, message: format!("fixed.{param}: {m}") })?;
        param.apply(&mut base, v);
    }
    let axis = |a: &AxisConfig, key: &str| -> Result<Axis> {
        let get = |q: &Quantity, k: &str| {
            q.resolve(w).map_err(|m| Error::Config { line: 0, message: format!("{key}.{k}: {m}") })
        };
        Axis::new(a.name, get(&a.min, "min")?, get(&a.max, "max")?, a.points, a.spacing).map_err(config_err)
    };
    let links = Links {
        equal_kappa: c.links.equal_kappa,
        tau_ratio: c.links.tau_ratio,
        power_offset: c.links.power_offset,
    };
    SweepSpec::new(base, [axis(&c.axis1, "axis1")?, axis(&c.axis2, "axis2")?], links).map_err(config_err)
}

pub fn load_spec(path: &Path, base: OptomechParams) -> Result<SweepSpec> {
    parse_spec(&read_text(path)?, base)
}
