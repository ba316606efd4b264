//! Stochastic Mathieu equation toolkit.
//!
//! The library covers the full pipeline for studying a damped oscillator whose
//! stiffness is modulated by a correlated Gaussian process at twice the natural
//! frequency:
//!
//! * [`gp`] — exact sampling of the stationary excitation process by circulant
//!   embedding, plus its autocorrelation function.
//! * [`sde`] — Euler–Maruyama integration of the full second-order equation and
//!   of the averaged slow-envelope system, with coordinate reconstruction.
//! * [`stability`] — Ince–Strutt stability classification of the deterministic
//!   equation via a truncated Hill determinant.
//! * [`analytic`] — closed-form decomposition of the stationary response into a
//!   Gaussian background and a rare-event tail, synthesized into the total
//!   heavy-tailed density.
//! * [`stats`] — histogram densities, level-crossing statistics, and density
//!   comparison metrics that serve as the Monte-Carlo cross-check.
//! * [`ensemble`] — deterministic seed scheme and parallel realization runner.

pub mod analytic;
pub mod ensemble;
pub mod error;
pub mod gp;
pub mod numerics;
pub mod sde;
pub mod stability;
pub mod stats;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
