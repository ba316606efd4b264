//! Euler–Maruyama time stepping of the stochastically driven Mathieu
//! oscillator and of its averaged slow-envelope system.
//!
//! Full system:
//!
//! ```text
//! x''(t) + 2 zeta w0 x'(t) + w0^2 (1 + alpha(t) sin(2 w0 t)) x(t) = F(t)
//! ```
//!
//! Averaged slow variables (independent unit white noises W1, W2):
//!
//! ```text
//! chi1'(t) = -(zeta - alpha(t)/4) w0 chi1(t) + sigma_F W1'(t)
//! chi2'(t) = -(zeta + alpha(t)/4) w0 chi2(t) + sigma_F W2'(t)
//! ```
//!
//! with `x(t) = chi1 cos(w0 t) + chi2 sin(w0 t)`. The averaged pair cannot be
//! matched pathwise to the full system (its two noises are independent of the
//! scalar forcing), so comparisons are statistical only.

use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::{stream_rng, Stream};
use crate::gp::{AcfSpec, ProcessRealization, CH_ALPHA};
use crate::{Error, Result};

pub const CH_X: &str = "x";
pub const CH_XDOT: &str = "xdot";
pub const CH_CHI1: &str = "chi1";
pub const CH_CHI2: &str = "chi2";

/// Additive broadband forcing of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Forcing {
    /// White noise `F(t) = nu W'(t)` of intensity `nu`.
    WhiteNoise { nu: f64 },
    /// Broadband forcing specified by its spectral density at the natural
    /// frequency, `S_F(w0)`.
    Broadband { spectral_density: f64 },
}

impl Forcing {
    /// Slow-scale noise variance: `sigma_F^2 = nu^2 / (2 w0^2)` for white
    /// noise and `pi S_F(w0) / w0^2` for broadband forcing.
    pub fn sigma_f2(&self, omega0: f64) -> f64 {
        match *self {
            Forcing::WhiteNoise { nu } => nu * nu / (2.0 * omega0 * omega0),
            Forcing::Broadband { spectral_density } => {
                std::f64::consts::PI * spectral_density / (omega0 * omega0)
            }
        }
    }

    /// Intensity of the white noise with the same spectral level at `w0`,
    /// used to drive the full system.
    pub fn white_noise_intensity(&self, omega0: f64) -> f64 {
        (2.0 * omega0 * omega0 * self.sigma_f2(omega0)).sqrt()
    }
}

/// Physical and stochastic parameters of the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega0: f64,
    zeta: f64,
    acf: AcfSpec,
    forcing: Forcing,
}

impl SystemParams {
    pub fn new(omega0: f64, zeta: f64, acf: AcfSpec, forcing: Forcing) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega0 must be finite and > 0, got {omega0}"
            )));
        }
        if !zeta.is_finite() || zeta <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "zeta must be finite and > 0, got {zeta}"
            )));
        }
        let s2 = forcing.sigma_f2(omega0);
        if !s2.is_finite() || s2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "forcing must give finite sigma_F^2 >= 0, got {s2}"
            )));
        }
        Ok(Self {
            omega0,
            zeta,
            acf,
            forcing,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn acf(&self) -> &AcfSpec {
        &self.acf
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn sigma_f2(&self) -> f64 {
        self.forcing.sigma_f2(self.omega0)
    }

    pub fn sigma_f(&self) -> f64 {
        self.sigma_f2().sqrt()
    }
}

/// Integration horizon and ensemble bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub burn_in: f64,
    pub n_realizations: usize,
    pub master_seed: u64,
    /// Trajectories whose |x| exceeds this guard abort with an error.
    pub blowup_guard: f64,
}

impl SimConfig {
    pub fn new(dt: f64, t_end: f64, burn_in: f64, n_realizations: usize, master_seed: u64) -> Result<Self> {
        let cfg = Self {
            dt,
            t_end,
            burn_in,
            n_realizations,
            master_seed,
            blowup_guard: 1e6,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "dt must be finite and > 0, got {}",
                self.dt
            )));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "t_end must be finite and > 0, got {}",
                self.t_end
            )));
        }
        if !(0.0..self.t_end).contains(&self.burn_in) {
            return Err(Error::InvalidParams(format!(
                "burn_in must satisfy 0 <= burn_in < t_end, got {}",
                self.burn_in
            )));
        }
        if self.n_realizations == 0 {
            return Err(Error::InvalidParams("n_realizations must be >= 1".into()));
        }
        if !self.blowup_guard.is_finite() || self.blowup_guard <= 0.0 {
            return Err(Error::InvalidParams("blowup_guard must be > 0".into()));
        }
        Ok(())
    }

    /// Number of integration steps; the grid has `steps() + 1` points.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Index of the first grid point at or after the burn-in time.
    pub fn burn_in_index(&self) -> usize {
        ((self.burn_in / self.dt).ceil() as usize).min(self.steps())
    }
}

fn check_alpha_grid(cfg: &SimConfig, alpha_path: &ProcessRealization) -> Result<()> {
    if (alpha_path.dt() - cfg.dt).abs() > 1e-12 * cfg.dt {
        return Err(Error::InvalidParams(format!(
            "alpha path dt {} does not match integrator dt {}",
            alpha_path.dt(),
            cfg.dt
        )));
    }
    let needed = cfg.steps() + 1;
    if alpha_path.len() < needed {
        return Err(Error::InvalidParams(format!(
            "alpha path has {} samples, integration needs {needed}",
            alpha_path.len()
        )));
    }
    Ok(())
}

/// Integrate the full second-order system for one realization.
///
/// The additive white noise enters the velocity update as `nu sqrt(dt) N(0,1)`
/// per step. Noise draws come from the `(master_seed, realization)` stream, so
/// repeated calls are bit-identical. The returned realization carries channels
/// `x`, `xdot`, `alpha`.
pub fn simulate_full(
    params: &SystemParams,
    cfg: &SimConfig,
    alpha_path: &ProcessRealization,
    realization: u64,
    ic: [f64; 2],
) -> Result<ProcessRealization> {
    cfg.validate()?;
    check_alpha_grid(cfg, alpha_path)?;
    let alpha = alpha_path
        .channel(CH_ALPHA)
        .ok_or(Error::EmptyInput("alpha channel"))?;

    let steps = cfg.steps();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let w0 = params.omega0;
    let zeta = params.zeta;
    let nu = params.forcing.white_noise_intensity(w0);
    let mut rng = stream_rng(cfg.master_seed, realization, Stream::ForcingFull);

    let mut x = ic[0];
    let mut v = ic[1];
    let mut xs = Vec::with_capacity(steps + 1);
    let mut vs = Vec::with_capacity(steps + 1);
    xs.push(x);
    vs.push(v);

    for (k, &a) in alpha[..steps].iter().enumerate() {
        let t = dt * k as f64;
        let stiffness = w0 * w0 * (1.0 + a * (2.0 * w0 * t).sin());
        let acc = -2.0 * zeta * w0 * v - stiffness * x;
        let dw: f64 = StandardNormal.sample(&mut rng);
        let x_next = x + v * dt;
        let v_next = v + acc * dt + nu * sqrt_dt * dw;
        if !x_next.is_finite() || x_next.abs() > cfg.blowup_guard {
            return Err(Error::Overflow {
                channel: CH_X,
                value: x_next,
                guard: cfg.blowup_guard,
                t: dt * (k + 1) as f64,
            });
        }
        x = x_next;
        v = v_next;
        xs.push(x);
        vs.push(v);
    }

    let mut out = ProcessRealization::new(0.0, dt)?;
    out.push_channel(CH_X, xs)?;
    out.push_channel(CH_XDOT, vs)?;
    out.push_channel(CH_ALPHA, alpha[..=steps].to_vec())?;
    Ok(out)
}

/// Integrate the averaged slow-variable pair for one realization.
///
/// The two envelope channels are driven by independent noises drawn
/// interleaved from one stream. Channels `chi1`, `chi2`.
pub fn simulate_averaged(
    params: &SystemParams,
    cfg: &SimConfig,
    alpha_path: &ProcessRealization,
    realization: u64,
    ic: [f64; 2],
) -> Result<ProcessRealization> {
    cfg.validate()?;
    check_alpha_grid(cfg, alpha_path)?;
    let alpha = alpha_path
        .channel(CH_ALPHA)
        .ok_or(Error::EmptyInput("alpha channel"))?;

    let steps = cfg.steps();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let w0 = params.omega0;
    let zeta = params.zeta;
    let sigma_f = params.sigma_f();
    let mut rng = stream_rng(cfg.master_seed, realization, Stream::ForcingAveraged);

    let mut c1 = ic[0];
    let mut c2 = ic[1];
    let mut c1s = Vec::with_capacity(steps + 1);
    let mut c2s = Vec::with_capacity(steps + 1);
    c1s.push(c1);
    c2s.push(c2);

    for (k, &a) in alpha[..steps].iter().enumerate() {
        let dw1: f64 = StandardNormal.sample(&mut rng);
        let dw2: f64 = StandardNormal.sample(&mut rng);
        let c1_next = c1 - (zeta - a / 4.0) * w0 * c1 * dt + sigma_f * sqrt_dt * dw1;
        let c2_next = c2 - (zeta + a / 4.0) * w0 * c2 * dt + sigma_f * sqrt_dt * dw2;
        let amp = c1_next.abs().max(c2_next.abs());
        if !amp.is_finite() || amp > cfg.blowup_guard {
            return Err(Error::Overflow {
                channel: CH_CHI1,
                value: amp,
                guard: cfg.blowup_guard,
                t: dt * (k + 1) as f64,
            });
        }
        c1 = c1_next;
        c2 = c2_next;
        c1s.push(c1);
        c2s.push(c2);
    }

    let mut out = ProcessRealization::new(0.0, dt)?;
    out.push_channel(CH_CHI1, c1s)?;
    out.push_channel(CH_CHI2, c2s)?;
    Ok(out)
}

/// Rebuild the fast variables from a slow-envelope path:
/// `x = chi1 cos(w0 t) + chi2 sin(w0 t)` and its exact time derivative under
/// the slowly-varying assumption.
pub fn reconstruct_fast(chi_path: &ProcessRealization, omega0: f64) -> Result<ProcessRealization> {
    let c1 = chi_path
        .channel(CH_CHI1)
        .ok_or(Error::EmptyInput("chi1 channel"))?;
    let c2 = chi_path
        .channel(CH_CHI2)
        .ok_or(Error::EmptyInput("chi2 channel"))?;
    let n = c1.len();
    let mut xs = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for i in 0..n {
        let t = chi_path.time(i);
        let (s, c) = (omega0 * t).sin_cos();
        xs.push(c1[i] * c + c2[i] * s);
        vs.push(omega0 * (-c1[i] * s + c2[i] * c));
    }
    let mut out = ProcessRealization::new(chi_path.t0(), chi_path.dt())?;
    out.push_channel(CH_X, xs)?;
    out.push_channel(CH_XDOT, vs)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::sample_gp;

    fn quiet_params(zeta: f64, nu: f64) -> SystemParams {
        SystemParams::new(
            1.0,
            zeta,
            AcfSpec::new(0.0, 1.0).unwrap(),
            Forcing::WhiteNoise { nu },
        )
        .unwrap()
    }

    fn zero_alpha(cfg: &SimConfig) -> ProcessRealization {
        ProcessRealization::new(0.0, cfg.dt)
            .unwrap()
            .with_channel(CH_ALPHA, vec![0.0; cfg.steps() + 1])
            .unwrap()
    }

    fn const_alpha(cfg: &SimConfig, a: f64) -> ProcessRealization {
        ProcessRealization::new(0.0, cfg.dt)
            .unwrap()
            .with_channel(CH_ALPHA, vec![a; cfg.steps() + 1])
            .unwrap()
    }

    /// Fitted exponential rate of the energy envelope over the whole path.
    fn envelope_rate(path: &ProcessRealization, omega0: f64) -> f64 {
        let x = path.channel(CH_X).unwrap();
        let v = path.channel(CH_XDOT).unwrap();
        let n = x.len();
        // regression of log(envelope) on t
        let mut st = 0.0;
        let mut se = 0.0;
        let mut stt = 0.0;
        let mut ste = 0.0;
        let mut count = 0.0;
        for i in 0..n {
            let env = (x[i] * x[i] + (v[i] / omega0) * (v[i] / omega0)).sqrt();
            if env <= 0.0 {
                continue;
            }
            let t = path.time(i);
            let e = env.ln();
            st += t;
            se += e;
            stt += t * t;
            ste += t * e;
            count += 1.0;
        }
        (count * ste - st * se) / (count * stt - st * st)
    }

    #[test]
    fn damped_oscillator_decays_at_zeta_omega0() {
        let params = quiet_params(0.1, 0.0);
        let cfg = SimConfig::new(0.0005, 20.0, 0.0, 1, 0).unwrap();
        let path = simulate_full(&params, &cfg, &zero_alpha(&cfg), 0, [1.0, 0.0]).unwrap();
        let rate = envelope_rate(&path, 1.0);
        assert!(
            (rate + 0.1).abs() < 0.002,
            "envelope rate {rate}, expected -0.1 within 2%"
        );
    }

    #[test]
    fn constant_alpha_above_threshold_grows() {
        // alpha = 0.6 > 4 zeta = 0.4; slow-flow predicts growth near
        // omega0 (alpha/4 - zeta) = 0.05
        let params = quiet_params(0.1, 0.0);
        let cfg = SimConfig::new(0.001, 120.0, 0.0, 1, 0).unwrap();
        let path = simulate_full(&params, &cfg, &const_alpha(&cfg, 0.6), 0, [1e-3, 0.0]).unwrap();
        let rate = envelope_rate(&path, 1.0);
        assert!(rate > 0.0, "expected growth, rate {rate}");
        assert!((rate - 0.05).abs() < 0.02, "rate {rate} vs 0.05");
    }

    #[test]
    fn stationary_variance_of_forced_oscillator() {
        // Var(x) = nu^2 / (4 zeta omega0^3)
        let nu = 0.002;
        let params = quiet_params(0.1, nu);
        let cfg = SimConfig::new(0.005, 40_000.0, 200.0, 1, 11).unwrap();
        let path = simulate_full(&params, &cfg, &zero_alpha(&cfg), 0, [0.0, 0.0]).unwrap();
        let x = path.channel(CH_X).unwrap();
        let from = cfg.burn_in_index();
        let m = x[from..].iter().sum::<f64>() / (x.len() - from) as f64;
        let var = x[from..].iter().map(|v| (v - m) * (v - m)).sum::<f64>()
            / (x.len() - from) as f64;
        let target = nu * nu / (4.0 * 0.1);
        assert!(
            (var / target - 1.0).abs() < 0.10,
            "variance {var} vs {target}"
        );
    }

    #[test]
    fn averaged_is_ou_with_known_variance() {
        let nu = 0.002;
        let params = quiet_params(0.1, nu);
        let cfg = SimConfig::new(0.005, 100_000.0, 500.0, 1, 3).unwrap();
        let path = simulate_averaged(&params, &cfg, &zero_alpha(&cfg), 0, [0.0, 0.0]).unwrap();
        let target = params.sigma_f2() / (2.0 * 0.1);
        for ch in [CH_CHI1, CH_CHI2] {
            let c = path.channel(ch).unwrap();
            let from = cfg.burn_in_index();
            let m = c[from..].iter().sum::<f64>() / (c.len() - from) as f64;
            let var = c[from..].iter().map(|v| (v - m) * (v - m)).sum::<f64>()
                / (c.len() - from) as f64;
            assert!(
                (var / target - 1.0).abs() < 0.05,
                "{ch} variance {var} vs {target}"
            );
        }
    }

    #[test]
    fn averaged_grows_where_alpha_exceeds_threshold() {
        // alpha ramps to a plateau above 4 zeta on a known window
        let params = quiet_params(0.1, 0.0);
        let cfg = SimConfig::new(0.001, 300.0, 0.0, 1, 0).unwrap();
        let plateau = 0.8;
        let n = cfg.steps() + 1;
        let alpha: Vec<f64> = (0..n)
            .map(|i| {
                let t = cfg.dt * i as f64;
                if (100.0..200.0).contains(&t) {
                    plateau
                } else {
                    0.0
                }
            })
            .collect();
        let path = ProcessRealization::new(0.0, cfg.dt)
            .unwrap()
            .with_channel(CH_ALPHA, alpha)
            .unwrap();
        let chi = simulate_averaged(&params, &cfg, &path, 0, [1e-6, 1e-6]).unwrap();
        let c1 = chi.channel(CH_CHI1).unwrap();
        let at = |t: f64| c1[(t / cfg.dt) as usize].abs();
        // decay before the window, growth at omega0 (alpha/4 - zeta) = 0.1 inside
        assert!(at(100.0) < at(0.0));
        let local = (at(190.0) / at(110.0)).ln() / 80.0;
        assert!((local - 0.1).abs() < 0.01, "local exponent {local}");
        // chi2 sees alpha with the opposite sign and must keep decaying
        let c2 = chi.channel(CH_CHI2).unwrap();
        assert!(c2[(200.0 / cfg.dt) as usize].abs() < 1e-6);
    }

    #[test]
    fn deterministic_decay_matches_exponential() {
        let params = quiet_params(0.1, 0.0);
        let cfg = SimConfig::new(0.005, 20.0, 0.0, 1, 0).unwrap();
        let path = simulate_averaged(&params, &cfg, &zero_alpha(&cfg), 0, [1.0, 1.0]).unwrap();
        let c1 = path.channel(CH_CHI1).unwrap();
        let end = *c1.last().unwrap();
        let exact = (-0.1f64 * 20.0).exp();
        assert!(
            ((end - exact) / exact).abs() < 1e-3,
            "chi(20) = {end} vs {exact}"
        );
    }

    #[test]
    fn reconstruct_identities() {
        let mut chi = ProcessRealization::new(0.0, 0.01).unwrap();
        let n = 1000;
        chi.push_channel(CH_CHI1, vec![1.0; n]).unwrap();
        chi.push_channel(CH_CHI2, vec![0.0; n]).unwrap();
        let fast = reconstruct_fast(&chi, 2.0).unwrap();
        let x = fast.channel(CH_X).unwrap();
        for i in (0..n).step_by(97) {
            let t = fast.time(i);
            assert!((x[i] - (2.0 * t).cos()).abs() < 1e-12);
        }

        let mut chi = ProcessRealization::new(0.0, 0.01).unwrap();
        chi.push_channel(CH_CHI1, vec![3.0; n]).unwrap();
        chi.push_channel(CH_CHI2, vec![4.0; n]).unwrap();
        let fast = reconstruct_fast(&chi, 1.0).unwrap();
        let x = fast.channel(CH_X).unwrap();
        let v = fast.channel(CH_XDOT).unwrap();
        for i in (0..n).step_by(53) {
            let env = (x[i] * x[i] + v[i] * v[i]).sqrt();
            assert!((env - 5.0).abs() < 1e-12, "envelope {env}");
        }

        let mut chi = ProcessRealization::new(0.0, 0.01).unwrap();
        chi.push_channel(CH_CHI1, vec![0.0; 8]).unwrap();
        chi.push_channel(CH_CHI2, vec![0.0; 8]).unwrap();
        let fast = reconstruct_fast(&chi, 1.0).unwrap();
        assert!(fast.channel(CH_X).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn first_order_convergence_in_dt() {
        // deterministic sub-problem: halving dt roughly halves the end error
        let params = quiet_params(0.1, 0.0);
        let reference = {
            let cfg = SimConfig::new(0.0005 / 16.0, 10.0, 0.0, 1, 0).unwrap();
            let p = simulate_full(&params, &cfg, &const_alpha(&cfg, 0.3), 0, [1.0, 0.0]).unwrap();
            *p.channel(CH_X).unwrap().last().unwrap()
        };
        let end_error = |dt: f64| {
            let cfg = SimConfig::new(dt, 10.0, 0.0, 1, 0).unwrap();
            let p = simulate_full(&params, &cfg, &const_alpha(&cfg, 0.3), 0, [1.0, 0.0]).unwrap();
            (*p.channel(CH_X).unwrap().last().unwrap() - reference).abs()
        };
        let e1 = end_error(0.002);
        let e2 = end_error(0.001);
        let ratio = e1 / e2;
        assert!(
            (1.5..=2.6).contains(&ratio),
            "error ratio {ratio} not first order (e1={e1}, e2={e2})"
        );
    }

    #[test]
    fn energy_decreases_without_forcing() {
        let params = quiet_params(0.1, 0.0);
        let cfg = SimConfig::new(0.005, 50.0, 0.0, 1, 0).unwrap();
        let path = simulate_full(&params, &cfg, &zero_alpha(&cfg), 0, [1.0, 0.0]).unwrap();
        let x = path.channel(CH_X).unwrap();
        let v = path.channel(CH_XDOT).unwrap();
        let energy = |i: usize| 0.5 * v[i] * v[i] + 0.5 * x[i] * x[i];
        let slack = 1.0 + 10.0 * cfg.dt * cfg.dt;
        for i in 1..x.len() {
            assert!(
                energy(i) <= energy(i - 1) * slack,
                "energy rose beyond integrator tolerance at step {i}"
            );
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let params = quiet_params(0.01, 0.0);
        let mut cfg = SimConfig::new(0.001, 2000.0, 0.0, 1, 0).unwrap();
        cfg.blowup_guard = 1e3;
        let res = simulate_full(&params, &cfg, &const_alpha(&cfg, 1.2), 0, [1.0, 0.0]);
        match res {
            Err(Error::Overflow { value, .. }) => assert!(value.abs() > 1e3),
            other => panic!("expected Overflow, got {other:?}"),
        }
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let params = quiet_params(0.1, 0.001);
        let cfg = SimConfig::new(0.005, 10.0, 0.0, 1, 0).unwrap();
        let bad = ProcessRealization::new(0.0, 0.01)
            .unwrap()
            .with_channel(CH_ALPHA, vec![0.0; 3000])
            .unwrap();
        assert!(simulate_full(&params, &cfg, &bad, 0, [0.0, 0.0]).is_err());
        let short = ProcessRealization::new(0.0, 0.005)
            .unwrap()
            .with_channel(CH_ALPHA, vec![0.0; 100])
            .unwrap();
        assert!(simulate_full(&params, &cfg, &short, 0, [0.0, 0.0]).is_err());
    }

    #[test]
    fn broadband_forcing_matches_equivalent_white_noise() {
        // S_F(w0) with pi S / w0^2 = nu^2 / (2 w0^2) drives identical paths
        let nu = 0.002f64;
        let spectral_density = nu * nu / (2.0 * std::f64::consts::PI);
        let spec = AcfSpec::new(0.2, 5.0).unwrap();
        let white =
            SystemParams::new(1.0, 0.1, spec, Forcing::WhiteNoise { nu }).unwrap();
        let broad =
            SystemParams::new(1.0, 0.1, spec, Forcing::Broadband { spectral_density }).unwrap();
        assert!((white.sigma_f2() - broad.sigma_f2()).abs() < 1e-21);

        let cfg = SimConfig::new(0.005, 30.0, 0.0, 1, 77).unwrap();
        let alpha = sample_gp(&spec, cfg.steps() + 1, cfg.dt, 3).unwrap();
        let a = simulate_full(&white, &cfg, &alpha, 0, [0.0, 0.0]).unwrap();
        let b = simulate_full(&broad, &cfg, &alpha, 0, [0.0, 0.0]).unwrap();
        let (xa, xb) = (a.channel(CH_X).unwrap(), b.channel(CH_X).unwrap());
        for (va, vb) in xa.iter().zip(xb) {
            assert!((va - vb).abs() <= 1e-15 * va.abs().max(1e-6));
        }
    }

    #[test]
    fn same_seed_same_trajectory() {
        let spec = AcfSpec::new(0.2, 5.0).unwrap();
        let params =
            SystemParams::new(1.0, 0.1, spec, Forcing::WhiteNoise { nu: 0.002 }).unwrap();
        let cfg = SimConfig::new(0.005, 50.0, 0.0, 1, 99).unwrap();
        let alpha = sample_gp(&spec, cfg.steps() + 1, cfg.dt, 7).unwrap();
        let a = simulate_full(&params, &cfg, &alpha, 4, [0.0, 0.0]).unwrap();
        let b = simulate_full(&params, &cfg, &alpha, 4, [0.0, 0.0]).unwrap();
        assert_eq!(a.channel(CH_X).unwrap(), b.channel(CH_X).unwrap());
        let c = simulate_full(&params, &cfg, &alpha, 5, [0.0, 0.0]).unwrap();
        assert_ne!(a.channel(CH_X).unwrap(), c.channel(CH_X).unwrap());
    }
}
