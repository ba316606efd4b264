//! Shared numerical primitives: normal distribution functions and adaptive
//! Gauss–Kronrod quadrature.

pub mod normal;
pub mod quad;
