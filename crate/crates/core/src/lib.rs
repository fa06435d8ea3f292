//! Continuous-variable entanglement swapping with local certification.
//!
//! * [`gaussian`]: covariance-matrix algebra, entanglement measures, beam
//!   splitters and homodyne conditioning.
//! * [`swap`]: the swapping calculus on pairs of tripartite states (gains,
//!   output covariance matrices, certification invariants, classification).
//! * [`optomech`]: the linearized cavity-optomechanics source producing the
//!   tripartite mechanical/Bell/certifying state.
//! * [`sweep`]: single-point evaluation and deterministic parameter sweeps.

pub mod error;
pub mod gaussian;
pub mod optomech;
pub mod swap;
pub mod sweep;

pub use error::{Error, Result};
