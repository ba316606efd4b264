//! Closed-form decomposition of the stationary response into a Gaussian
//! background and a rare-event tail, and their synthesis into the total
//! heavy-tailed density.
//!
//! The slow envelope obeys `chi' = -gamma(t) chi + sigma_F W'` with
//! `gamma = zeta w0 - w0 alpha(t)/4`, a Gaussian process with mean `zeta w0`
//! and standard deviation `sigma_alpha w0 / 4`. Writing
//! `eta = 4 zeta / sigma_alpha` for the mean-over-std ratio of `gamma`:
//!
//! * Background regime (`gamma > 0`): an OU process with the conditional mean
//!   drift `gamma_pos = zeta w0 + (sigma_alpha w0 / 4) phi(eta)/Phi(eta)`,
//!   whose stationary density is a zero-mean Gaussian with variance
//!   `sigma_F^2 / (2 gamma_pos)`.
//! * Rare regime (`gamma < 0`): the envelope grows as `xi0 exp(Lambda T)`
//!   with `Lambda = -gamma | gamma < 0` (truncated Gaussian) and `T` the
//!   time below zero, Rayleigh with mean `T_bar` from the crossing rate of
//!   `gamma`. The initial envelope `xi0` follows a Rayleigh shifted above the
//!   rare-event threshold `rho`, one background standard deviation.
//! * Synthesis: total probability with weight
//!   `P_r = (1 + upsilon)(1 - Phi(eta))`, where `upsilon` is the decay-to-
//!   growth duration ratio of a representative burst.
//!
//! All tail-side ratios are evaluated through the scaled complementary error
//! function, so the model degenerates cleanly to the OU Gaussian as
//! `sigma_alpha -> 0` (`P_r` underflows to zero, which is accepted).

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::numerics::normal;
use crate::numerics::quad::{integrate, QuadConfig};
use crate::sde::SystemParams;
use crate::{Error, Result};

/// Quadrature controls for the rare-event integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadSettings {
    /// Relative tolerance of the outer (envelope) integral.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Integrand support is truncated where suppressed by `exp(-exp_cutoff)`.
    pub exp_cutoff: f64,
    /// Interval budget per adaptive integration.
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-300,
            exp_cutoff: 69.077_552_789_821_37, // ln(1e30)
            max_intervals: 4000,
        }
    }
}

/// Precomputed decomposition quantities for one parameter set.
#[derive(Debug, Clone)]
pub struct AnalyticModel {
    params: SystemParams,
    quad: QuadSettings,
    eta: f64,
    gamma_pos: f64,
    gamma_neg: f64,
    t_bar: f64,
    upsilon: f64,
    p_r: f64,
    rho: f64,
    sigma_f2: f64,
    /// `phi(eta) / (1 - Phi(eta))`, kept for stable tail ratios
    hazard_neg: f64,
}

/// Build the analytic model. Fails with `InvalidRegime` when the
/// decomposition assumptions are void: vanishing excitation or forcing, or
/// rare events too frequent (`P_r >= 0.5`) for burst independence.
pub fn build_model(params: &SystemParams, quad: QuadSettings) -> Result<AnalyticModel> {
    let w0 = params.omega0();
    let zeta = params.zeta();
    let sigma_alpha = params.acf().sigma_alpha();
    let sigma_f2 = params.sigma_f2();

    if sigma_alpha <= 0.0 {
        return Err(Error::InvalidRegime(
            "sigma_alpha must be positive; the decomposition needs a stochastic excitation".into(),
        ));
    }
    if sigma_f2 <= 0.0 {
        return Err(Error::InvalidRegime(
            "additive forcing must have positive intensity".into(),
        ));
    }

    let eta = 4.0 * zeta / sigma_alpha;
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidRegime(format!(
            "instability index eta = {eta} must be positive"
        )));
    }

    let s = sigma_alpha * w0 / 4.0; // std of gamma
    let hazard_pos = normal::pdf(eta) / normal::cdf(eta);
    let hazard_neg = normal::hazard(eta);
    let tail_prob = normal::sf(eta);

    let gamma_pos = zeta * w0 + s * hazard_pos;
    let gamma_neg = zeta * w0 - s * hazard_neg; // conditional mean below zero
    let upsilon = -gamma_neg / gamma_pos;

    // mean time below zero: survival mass over the Rice downcrossing rate,
    // which needs the normalized autocorrelation curvature for units of
    // 1/time. Written through erfcx so large eta stays finite.
    let t_bar = PI * normal::erfcx(eta / std::f64::consts::SQRT_2)
        / params.acf().curvature_at_zero().sqrt();

    let p_r = (1.0 + upsilon) * tail_prob;
    if p_r >= 0.5 {
        return Err(Error::InvalidRegime(format!(
            "rare events must be rare: P_r = {p_r:.4} >= 0.5"
        )));
    }

    let rho = (sigma_f2 / (2.0 * gamma_pos)).sqrt();

    debug_assert!(gamma_pos >= zeta * w0);
    debug_assert!(upsilon > -1.0);
    debug_assert!(t_bar > 0.0);
    debug_assert!(rho > 0.0);

    Ok(AnalyticModel {
        params: *params,
        quad,
        eta,
        gamma_pos,
        gamma_neg,
        t_bar,
        upsilon,
        p_r,
        rho,
        sigma_f2,
        hazard_neg,
    })
}

impl AnalyticModel {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn quad_settings(&self) -> &QuadSettings {
        &self.quad
    }

    /// Instability index `4 zeta / sigma_alpha`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Conditional mean damping in the stable regime (1/time).
    pub fn gamma_pos(&self) -> f64 {
        self.gamma_pos
    }

    /// Conditional mean of the drift below zero (negative, 1/time).
    pub fn gamma_neg(&self) -> f64 {
        self.gamma_neg
    }

    /// Mean duration of an instability burst.
    pub fn t_bar(&self) -> f64 {
        self.t_bar
    }

    /// Decay-to-growth duration ratio of a representative burst.
    pub fn upsilon(&self) -> f64 {
        self.upsilon
    }

    /// Fraction of time spent in rare-event responses.
    pub fn p_r(&self) -> f64 {
        self.p_r
    }

    /// Rare-event amplitude threshold (one background standard deviation).
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Variance of the background Gaussian, `sigma_F^2 / (2 gamma_pos)`.
    pub fn background_variance(&self) -> f64 {
        self.sigma_f2 / (2.0 * self.gamma_pos)
    }

    /// Stationary density of the background regime:
    /// `sqrt(gamma_pos / (pi sigma_F^2)) exp(-gamma_pos x^2 / sigma_F^2)`.
    pub fn background_pdf(&self, x: f64) -> f64 {
        (self.gamma_pos / (PI * self.sigma_f2)).sqrt()
            * (-self.gamma_pos * x * x / self.sigma_f2).exp()
    }

    /// Density of the burst growth rate `Lambda = -gamma | gamma < 0`,
    /// supported on positive rates.
    pub fn lyapunov_pdf(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        let s = self.params.acf().sigma_alpha() * self.params.omega0() / 4.0;
        // phi(eta + lambda/s) / (1 - Phi(eta)) = hazard_neg * exp(eta^2/2 - z^2/2)
        let t = lambda / s;
        let exponent = -t * (self.eta + 0.5 * t);
        self.hazard_neg / s * exponent.exp()
    }

    /// Density of the burst duration: Rayleigh-type with mean exactly
    /// `t_bar`, the rare-crossing asymptotic.
    pub fn duration_pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let tb2 = self.t_bar * self.t_bar;
        PI * t / (2.0 * tb2) * (-PI * t * t / (4.0 * tb2)).exp()
    }

    /// Density of the envelope at the end of a burst that started from
    /// envelope `xi0`, marginalized over growth rate and duration:
    ///
    /// ```text
    /// pdf(xi | xi0) = (1/xi) Int_0^inf (1/y) pdf_Lambda(y) pdf_T(ln(xi/xi0)/y) dy
    /// ```
    ///
    /// Zero for `xi <= xi0`.
    pub fn rare_pdf_given_xi0(&self, xi: f64, xi0: f64) -> Result<f64> {
        if !xi0.is_finite() || xi0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "xi0 must be positive, got {xi0}"
            )));
        }
        if xi <= xi0 {
            return Ok(0.0);
        }
        let log_ratio = (xi / xi0).ln();
        let inner = self.growth_kernel(log_ratio)?;
        let w0 = self.params.omega0();
        let sigma_alpha = self.params.acf().sigma_alpha();
        let pre = 2.0 * PI * log_ratio * self.hazard_neg
            / (sigma_alpha * w0 * self.t_bar * self.t_bar * xi);
        Ok(pre * inner)
    }

    /// Inner integral over growth rates for a given log amplification:
    /// `Int y^-2 [phi(z(y))/phi(eta)] exp(-pi L^2 / (4 T_bar^2 y^2)) dy`
    /// with `z = eta + 4y/(sigma_alpha w0)`, evaluated in log space. The
    /// integrand is truncated where either exponential falls below
    /// `exp(-exp_cutoff)`.
    fn growth_kernel(&self, log_ratio: f64) -> Result<f64> {
        let cutoff = self.quad.exp_cutoff;
        let s = self.params.acf().sigma_alpha() * self.params.omega0() / 4.0;
        let eta = self.eta;
        let tb = self.t_bar;

        // lower truncation from the duration factor, upper from the rate tail
        let y_min = 0.5 * log_ratio / tb * (PI / cutoff).sqrt();
        let t_max = -eta + (eta * eta + 2.0 * cutoff).sqrt();
        let y_max = s * t_max;
        if y_min >= y_max {
            return Ok(0.0);
        }

        let duration_scale = PI * log_ratio * log_ratio / (4.0 * tb * tb);
        let integrand = |w: f64| {
            let y = w.exp();
            let t = y / s;
            let rate_exp = -t * (eta + 0.5 * t);
            let dur_exp = -duration_scale / (y * y);
            // y^-2 dy = y^-1 dw
            (rate_exp + dur_exp - w).exp()
        };
        let cfg = QuadConfig {
            abs_tol: self.quad.abs_tol,
            rel_tol: 0.1 * self.quad.rel_tol,
            max_intervals: self.quad.max_intervals,
        };
        let q = integrate(integrand, y_min.ln(), y_max.ln(), &cfg)?;
        Ok(q.value)
    }

    /// Density of the pre-burst envelope, a Rayleigh of scale `rho` shifted
    /// above the rare-event threshold `rho`.
    pub fn envelope_prior_pdf(&self, xi0: f64) -> f64 {
        if xi0 <= self.rho {
            return 0.0;
        }
        let k = self.gamma_pos / self.sigma_f2; // 1 / (2 rho^2)
        let d = xi0 - self.rho;
        2.0 * k * d * (-k * d * d).exp()
    }

    /// Conditional density of the signed response during rare events:
    /// half the envelope density marginalized over the pre-burst envelope,
    /// supported on `|x| > rho` and symmetric in `x`.
    pub fn rare_pdf(&self, x: f64) -> Result<f64> {
        let a = x.abs();
        if a <= self.rho {
            return Ok(0.0);
        }
        let cfg = QuadConfig {
            abs_tol: self.quad.abs_tol,
            rel_tol: self.quad.rel_tol,
            max_intervals: self.quad.max_intervals,
        };
        // the integrand cannot return Result; park the first inner failure
        // and surface it after the outer integration
        let inner_error = std::cell::RefCell::new(None);
        let q = integrate(
            |xi0| match self.rare_pdf_given_xi0(a, xi0) {
                Ok(conditional) => conditional * self.envelope_prior_pdf(xi0),
                Err(e) => {
                    inner_error.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            self.rho,
            a,
            &cfg,
        )?;
        if let Some(e) = inner_error.into_inner() {
            return Err(e);
        }
        Ok(0.5 * q.value)
    }

    /// Total stationary density: the background and rare components mixed by
    /// the rare-event probability.
    pub fn total_pdf(&self, x: f64) -> Result<f64> {
        let background = (1.0 - self.p_r) * self.background_pdf(x);
        if self.p_r == 0.0 {
            return Ok(background);
        }
        Ok(background + self.p_r * self.rare_pdf(x)?)
    }

    /// Weighted components at one point: `(total, background part, rare part)`.
    pub fn densities_at(&self, x: f64) -> Result<(f64, f64, f64)> {
        let bg = (1.0 - self.p_r) * self.background_pdf(x);
        let rare = if self.p_r == 0.0 {
            0.0
        } else {
            self.p_r * self.rare_pdf(x)?
        };
        Ok((bg + rare, bg, rare))
    }

    /// Upper end of the plotting range: doubling search for the point where
    /// the total density drops below `1e-12`.
    pub fn x_max(&self) -> Result<f64> {
        let sigma_b = self.background_variance().sqrt();
        let mut x = (6.0 * sigma_b).max(2.0 * self.rho);
        for _ in 0..60 {
            if self.total_pdf(x)? < 1e-12 {
                return Ok(x);
            }
            x *= 1.5;
        }
        Err(Error::QuadratureFailure(format!(
            "total density has not decayed below 1e-12 by x = {x:.3e}"
        )))
    }

    /// Positive half of the evaluation grid: a linear core through the
    /// background bulk plus a log-spaced extension into the rare-event tail.
    pub fn curve_grid(&self) -> Result<Vec<f64>> {
        let sigma_b = self.background_variance().sqrt();
        let x_max = self.x_max()?;
        let mut grid: Vec<f64> = (0..=48)
            .map(|i| 4.0 * sigma_b * i as f64 / 48.0)
            .collect();
        let lo = self.rho / 10.0;
        let n_log = 120;
        let ratio = x_max / lo;
        grid.extend((0..=n_log).map(|k| lo * ratio.powf(k as f64 / n_log as f64)));
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        Ok(grid)
    }

    /// Evaluate `(x, total, weighted background, weighted rare)` at each grid
    /// point, in parallel.
    pub fn curve(&self, xs: &[f64]) -> Result<Vec<(f64, f64, f64, f64)>> {
        xs.par_iter()
            .map(|&x| {
                let (total, bg, rare) = self.densities_at(x)?;
                Ok((x, total, bg, rare))
            })
            .collect()
    }
}
