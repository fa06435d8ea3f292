//! Single-point evaluation and two-axis parameter sweeps of the full
//! pipeline: site parameters, tripartite source state, classification and
//! the swap of two identical sites.

mod config;
mod point;
mod run;
mod spec;

pub use config::{load_params, parse_params, Quantity};
pub use point::{dump_state, evaluate_state, run_point, run_point_with, PointRecord, PointState, PointStatus};
pub use run::{run_sweep, run_sweep_with, SweepRecord, SweepResult};
pub use spec::{load_spec, parse_spec, Axis, AxisParam, Links, Spacing, SweepSpec};
