//! Standard normal density, distribution, and tail helpers.
//!
//! The survival-side quantities are routed through the scaled complementary
//! error function so that ratios like `pdf(x) / sf(x)` stay finite far into
//! the tail, where both factors underflow individually.

use std::f64::consts::PI;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal probability density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal cumulative distribution.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal survival function `1 - cdf(x)`, accurate in the upper tail.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Scaled complementary error function `exp(x^2) * erfc(x)` for `x >= 0`.
///
/// Below the switch point the direct product is exact to full precision; past
/// it both factors would over/underflow, so the asymptotic continued series
/// takes over.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 25.0 {
        libm::erfc(x) * (x * x).exp()
    } else {
        // erfcx(x) ~ 1/(x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..8u32 {
            term *= -(2.0 * f64::from(k) - 1.0) * inv2x2;
            sum += term;
        }
        sum / (x * PI.sqrt())
    }
}

/// Inverse Mills ratio (hazard rate) `pdf(x) / sf(x)`, stable for large `x`.
#[inline]
pub fn hazard(x: f64) -> f64 {
    if x >= 0.0 {
        // pdf(x)/sf(x) = sqrt(2/pi) / erfcx(x/sqrt(2))
        (2.0 / PI).sqrt() / erfcx(x / SQRT_2)
    } else {
        pdf(x) / sf(x)
    }
}
