//! Configuration-driven experiment runner: wires the excitation sampler, the
//! integrators, the stability chart, and the analytic density together, and
//! writes CSV/JSON/SVG artifacts.

pub mod config;
pub mod error;
pub mod modes;
pub mod svg;

pub use error::CliError;
