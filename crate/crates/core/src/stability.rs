//! Ince–Strutt stability classification of the damped deterministic Mathieu
//! equation
//!
//! ```text
//! x''(t) + 2 zeta w0 x'(t) + w0^2 (1 + alpha sin(Omega t)) x(t) = 0,
//! delta = w0^2 / Omega^2.
//! ```
//!
//! Rescaling time to `s = Omega t / 2` and removing damping with
//! `x = exp(-zeta sqrt(delta) * Omega t) u` leaves the Hill problem
//! `u'' + (theta0 + 4 Q sin 2s) u = 0` with `theta0 = 4 delta (1 - zeta^2)`
//! and `Q = delta alpha`. Its characteristic exponents `nu` solve
//!
//! ```text
//! sin^2(pi nu / 2) = P,    P = Delta(0) sin^2(pi sqrt(theta0) / 2),
//! ```
//!
//! where `Delta` is Hill's infinite determinant, truncated here to
//! `2 trunc + 1` harmonics. `Delta(nu)` differs from `Delta(0)` only by
//! `-sin^2(pi nu / 2) / sin^2(pi sqrt(theta0) / 2)`, so `P` can be assembled
//! from the determinant at any reference exponent; the reference is chosen
//! per point to stay clear of the determinant's poles. The original equation
//! is unstable when the exponent's growth outruns the damping,
//! i.e. `|Im nu| / pi > zeta sqrt(delta)` in the scaled time.

use crate::{Error, Result};

/// Stability classification of one `(delta, alpha)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Stable,
    Unstable,
    /// Classification flipped when the truncation was doubled.
    Undetermined,
}

/// Boundary polyline of one resonance tongue, as `(delta, alpha)` pairs.
#[derive(Debug, Clone)]
pub struct TongueBoundary {
    pub tongue: u32,
    pub points: Vec<(f64, f64)>,
}

/// Dense classification over a `(delta, alpha)` grid plus extracted
/// lowest-alpha boundary curves.
#[derive(Debug, Clone)]
pub struct StabilityDiagram {
    pub delta_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    /// `classification[i][j]` is the class at `(delta_grid[i], alpha_grid[j])`.
    pub classification: Vec<Vec<PointClass>>,
    pub boundaries: Vec<TongueBoundary>,
}

/// Smallest excitation amplitude on the leading-order first-tongue boundary
/// at the given frequency ratio: `sqrt((2 delta - 1/2)^2 + 4 zeta^2 delta) / delta`.
/// At `delta = 1/4` this reduces to `4 zeta`.
pub fn leading_order_alpha_crit(delta: f64, zeta: f64) -> f64 {
    let detuning = 2.0 * delta - 0.5;
    (detuning * detuning + 4.0 * zeta * zeta * delta).sqrt() / delta
}

/// Truncated Hill determinant at reference exponent `nu0`.
///
/// The matrix is tridiagonal: row `n` couples only to `n +- 1` through the
/// single sideband of `sin 2s`, and the paired off-diagonal products are
/// `4 Q^2 / (d_n d_{n-1})` with `d_n = theta0 - (nu0 + 2n)^2`.
fn hill_determinant(theta0: f64, q: f64, nu0: f64, trunc: usize) -> f64 {
    let n = trunc as i64;
    let d = |k: i64| theta0 - (nu0 + 2.0 * k as f64).powi(2);
    let mut det_prev = 1.0f64; // empty determinant
    let mut det = 1.0f64; // first row alone
    let mut d_prev = d(-n);
    for k in (-n + 1)..=n {
        let d_k = d(k);
        let coupling = 4.0 * q * q / (d_k * d_prev);
        let next = det - coupling * det_prev;
        det_prev = det;
        det = next;
        d_prev = d_k;
    }
    det
}

/// Characteristic product `P = Delta(0) sin^2(pi sqrt(theta0)/2)`, evaluated
/// at the reference exponent farthest from the determinant's poles.
///
/// `Delta(nu) - 1` is a rational function of `sin^2(pi nu/2)` with a single
/// simple-pole pair, which pins the whole `nu` dependence:
/// `(Delta(nu) - 1)(sin^2(pi nu / 2) - S)` is independent of `nu`, with
/// `S = sin^2(pi sqrt(theta0) / 2)`. Evaluating at a shifted reference and
/// mapping back to `P = S - (Delta(nu0) - 1)(sin^2(pi nu0/2) - S)` avoids the
/// determinant's poles at `theta0 = (nu0 + 2n)^2`.
fn characteristic_product(theta0: f64, q: f64, trunc: usize) -> f64 {
    const CANDIDATES: [f64; 5] = [0.0, 1.0, 0.5, 1.5, 0.25];
    let n = trunc as i64;
    let mut best = CANDIDATES[0];
    let mut best_score = f64::MIN;
    for &nu0 in &CANDIDATES {
        let mut score = f64::MAX;
        for k in -n..=n {
            score = score.min((theta0 - (nu0 + 2.0 * k as f64).powi(2)).abs());
        }
        if score > best_score {
            best_score = score;
            best = nu0;
        }
    }
    let s = (0.5 * std::f64::consts::PI * theta0.sqrt()).sin().powi(2);
    let half_nu0 = (0.5 * std::f64::consts::PI * best).sin().powi(2);
    let det = hill_determinant(theta0, q, best, trunc);
    s - (det - 1.0) * (half_nu0 - s)
}

/// Growth rate of the undamped Hill solution in the scaled time `tau = Omega t`,
/// i.e. `|Im nu| / pi` where `sin^2(pi nu / 2) = P`.
fn hill_growth(p: f64) -> f64 {
    if p > 1.0 {
        p.sqrt().acosh() / std::f64::consts::PI
    } else if p < 0.0 {
        (-p).sqrt().asinh() / std::f64::consts::PI
    } else {
        0.0
    }
}

fn validate_point(delta: f64, zeta: f64, trunc: usize) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "delta must be finite and > 0, got {delta}"
        )));
    }
    if !zeta.is_finite() || zeta < 0.0 {
        return Err(Error::InvalidParams(format!(
            "zeta must be finite and >= 0, got {zeta}"
        )));
    }
    if trunc < 3 {
        return Err(Error::InvalidParams(format!(
            "trunc must be >= 3, got {trunc}"
        )));
    }
    Ok(())
}

/// Stability margin at one point: positive means the parametric growth beats
/// the damping and the response is unstable.
pub fn hill_margin(delta: f64, alpha: f64, zeta: f64, trunc: usize) -> Result<f64> {
    validate_point(delta, zeta, trunc)?;
    let theta0 = 4.0 * delta * (1.0 - zeta * zeta);
    if theta0 <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "overdamped case zeta = {zeta} >= 1 is outside the Hill reduction"
        )));
    }
    let q = delta * alpha.abs();
    let p = characteristic_product(theta0, q, trunc);
    Ok(hill_growth(p) - zeta * delta.sqrt())
}

/// Classify one point, doubling the truncation as a convergence check.
pub fn hill_unstable(delta: f64, alpha: f64, zeta: f64, trunc: usize) -> Result<bool> {
    let coarse = hill_margin(delta, alpha, zeta, trunc)? > 0.0;
    let fine = hill_margin(delta, alpha, zeta, 2 * trunc)? > 0.0;
    if coarse != fine {
        return Err(Error::NotConverged {
            delta,
            alpha,
            trunc,
        });
    }
    Ok(fine)
}

/// Lowest unstable amplitude at fixed `delta`, or `None` if the whole range
/// `[alpha_lo, alpha_hi]` is stable. Coarse scan followed by bisection to
/// `tol` in alpha.
pub fn boundary_alpha(
    delta: f64,
    zeta: f64,
    alpha_lo: f64,
    alpha_hi: f64,
    trunc: usize,
    tol: f64,
) -> Result<Option<f64>> {
    validate_point(delta, zeta, trunc)?;
    const SCAN: usize = 150;
    let step = (alpha_hi - alpha_lo) / SCAN as f64;
    let mut lo = alpha_lo;
    let mut hi = None;
    for i in 0..=SCAN {
        let a = alpha_lo + step * i as f64;
        if hill_margin(delta, a, zeta, trunc)? > 0.0 {
            hi = Some(a);
            break;
        }
        lo = a;
    }
    let Some(mut hi) = hi else {
        return Ok(None);
    };
    if hi == alpha_lo {
        return Ok(Some(alpha_lo));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if hill_margin(delta, mid, zeta, trunc)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Default truncation (harmonics on each side of the carrier).
pub const DEFAULT_TRUNC: usize = 10;
/// Bisection tolerance for boundary extraction, in units of alpha.
pub const BOUNDARY_TOL: f64 = 1e-4;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Sweep a grid, classify every point, and extract the lowest boundary curve
/// per tongue. Points whose classification does not converge are marked
/// [`PointClass::Undetermined`] rather than dropped.
pub fn build_diagram(
    delta_range: (f64, f64),
    alpha_range: (f64, f64),
    zeta: f64,
    resolution: (usize, usize),
    trunc: usize,
) -> Result<StabilityDiagram> {
    let (d_lo, d_hi) = delta_range;
    let (a_lo, a_hi) = alpha_range;
    if !d_lo.is_finite() || !d_hi.is_finite() || d_lo >= d_hi || d_lo <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "invalid delta range [{d_lo}, {d_hi}]"
        )));
    }
    if !a_lo.is_finite() || !a_hi.is_finite() || a_lo >= a_hi || a_lo < 0.0 {
        return Err(Error::InvalidParams(format!(
            "invalid alpha range [{a_lo}, {a_hi}]"
        )));
    }
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidParams("resolution must be at least 2x2".into()));
    }
    validate_point(d_lo, zeta, trunc)?;

    let delta_grid = linspace(d_lo, d_hi, resolution.0);
    let alpha_grid = linspace(a_lo, a_hi, resolution.1);

    let mut classification = Vec::with_capacity(delta_grid.len());
    for &delta in &delta_grid {
        let mut row = Vec::with_capacity(alpha_grid.len());
        for &alpha in &alpha_grid {
            let class = match hill_unstable(delta, alpha, zeta, trunc) {
                Ok(true) => PointClass::Unstable,
                Ok(false) => PointClass::Stable,
                Err(Error::NotConverged { .. }) => PointClass::Undetermined,
                Err(e) => return Err(e),
            };
            row.push(class);
        }
        classification.push(row);
    }

    // boundary curves: lowest unstable alpha per delta, split into tongues by
    // the midpoint (in sqrt(delta)) between the n=1 and n=2 transition ratios
    let tongue_split = 0.5625;
    let mut tongues: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for &delta in &delta_grid {
        if let Some(alpha) = boundary_alpha(delta, zeta, a_lo, a_hi, trunc, BOUNDARY_TOL)? {
            let idx = usize::from(delta >= tongue_split);
            tongues[idx].push((delta, alpha));
        }
    }
    let boundaries = tongues
        .into_iter()
        .zip([1u32, 2u32])
        .filter(|(points, _)| !points.is_empty())
        .map(|(points, tongue)| TongueBoundary { tongue, points })
        .collect();

    Ok(StabilityDiagram {
        delta_grid,
        alpha_grid,
        classification,
        boundaries,
    })
}
