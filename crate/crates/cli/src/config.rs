//! Experiment configuration: a single JSON document with strict keys,
//! overridable from the command line through dotted paths.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use stochastic_mathieu::analytic::QuadSettings;
use stochastic_mathieu::gp::AcfSpec;
use stochastic_mathieu::sde::{Forcing, SimConfig, SystemParams};

use crate::error::CliError;

/// Experiment modes; the CLI subcommand must agree with the configured mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    SimulateFull,
    SimulateAveraged,
    AnalyticPdf,
    StabilityDiagram,
    GpSample,
    Compare,
    ReproduceFig3,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::SimulateFull => "simulate-full",
            Mode::SimulateAveraged => "simulate-averaged",
            Mode::AnalyticPdf => "analytic-pdf",
            Mode::StabilityDiagram => "stability-diagram",
            Mode::GpSample => "gp-sample",
            Mode::Compare => "compare",
            Mode::ReproduceFig3 => "reproduce-fig3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingKind {
    WhiteNoise,
    Broadband,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    #[serde(rename = "type", default = "default_forcing_kind")]
    pub kind: ForcingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_density: Option<f64>,
}

fn default_forcing_kind() -> ForcingKind {
    ForcingKind::WhiteNoise
}

impl Default for ForcingConfig {
    fn default() -> Self {
        Self {
            kind: ForcingKind::WhiteNoise,
            nu: Some(0.002),
            spectral_density: None,
        }
    }
}

impl ForcingConfig {
    pub fn to_forcing(&self) -> Result<Forcing, CliError> {
        match self.kind {
            ForcingKind::WhiteNoise => {
                if self.spectral_density.is_some() {
                    return Err(CliError::Config(
                        "white-noise forcing takes 'nu', not 'spectral_density'".into(),
                    ));
                }
                Ok(Forcing::WhiteNoise {
                    nu: self.nu.unwrap_or(0.002),
                })
            }
            ForcingKind::Broadband => {
                if self.nu.is_some() {
                    return Err(CliError::Config(
                        "broadband forcing takes 'spectral_density', not 'nu'".into(),
                    ));
                }
                let s = self.spectral_density.ok_or_else(|| {
                    CliError::Config("broadband forcing requires 'spectral_density'".into())
                })?;
                Ok(Forcing::Broadband {
                    spectral_density: s,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub omega0: f64,
    pub zeta: f64,
    pub sigma_alpha: f64,
    pub ell_alpha: f64,
    pub forcing: ForcingConfig,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            zeta: 0.1,
            sigma_alpha: 0.229,
            ell_alpha: 10.0,
            forcing: ForcingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub dt: f64,
    pub t_end: f64,
    pub burn_in: f64,
    pub n_realizations: usize,
    pub master_seed: u64,
    pub blowup_guard: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            dt: 5e-3,
            t_end: 5500.0,
            burn_in: 500.0,
            n_realizations: 3000,
            master_seed: 42,
            blowup_guard: 1e6,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyticSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub exp_cutoff: f64,
    pub max_intervals: usize,
}

impl Default for AnalyticSection {
    fn default() -> Self {
        let q = QuadSettings::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            exp_cutoff: q.exp_cutoff,
            max_intervals: q.max_intervals,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilitySection {
    pub delta_min: f64,
    pub delta_max: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub n_delta: usize,
    pub n_alpha: usize,
    pub trunc: usize,
}

impl Default for StabilitySection {
    fn default() -> Self {
        Self {
            delta_min: 0.05,
            delta_max: 1.2,
            alpha_min: 0.0,
            alpha_max: 1.5,
            n_delta: 116,
            n_alpha: 76,
            trunc: 10,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct HistogramSection {
    pub n_core_bins: usize,
    pub n_tail_bins: usize,
    /// Time between retained histogram samples; decorrelates the tail-bin
    /// shot-noise floor.
    pub sample_stride_time: f64,
}

impl Default for HistogramSection {
    fn default() -> Self {
        Self {
            n_core_bins: 48,
            n_tail_bins: 10,
            sample_stride_time: 0.5,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputsSection {
    pub dir: String,
    pub svg: bool,
}

impl Default for OutputsSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            svg: false,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub mode: Option<Mode>,
    pub params: ParamsConfig,
    pub sim: SimSection,
    pub analytic: AnalyticSection,
    pub stability: StabilitySection,
    pub histogram: HistogramSection,
    pub outputs: OutputsSection,
}

impl ExperimentConfig {
    pub fn system_params(&self) -> Result<SystemParams, CliError> {
        let acf = AcfSpec::new(self.params.sigma_alpha, self.params.ell_alpha)?;
        let forcing = self.params.forcing.to_forcing()?;
        Ok(SystemParams::new(
            self.params.omega0,
            self.params.zeta,
            acf,
            forcing,
        )?)
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let mut cfg = SimConfig::new(
            self.sim.dt,
            self.sim.t_end,
            self.sim.burn_in,
            self.sim.n_realizations,
            self.sim.master_seed,
        )?;
        cfg.blowup_guard = self.sim.blowup_guard;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn quad_settings(&self) -> QuadSettings {
        QuadSettings {
            rel_tol: self.analytic.rel_tol,
            abs_tol: self.analytic.abs_tol,
            exp_cutoff: self.analytic.exp_cutoff,
            max_intervals: self.analytic.max_intervals,
        }
    }
}

/// Set a dotted path inside a JSON object, creating intermediate objects.
/// The value text is parsed as JSON when possible, else taken as a string.
pub fn set_dotted(root: &mut Value, path: &str, raw: &str) -> Result<(), CliError> {
    if path.is_empty() {
        return Err(CliError::Config("empty override path".into()));
    }
    let leaf: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cursor = root;
    let parts: Vec<&str> = path.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        if !cursor.is_object() {
            return Err(CliError::Config(format!(
                "override path '{path}' crosses a non-object value"
            )));
        }
        cursor = cursor
            .as_object_mut()
            .expect("checked object")
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = cursor.as_object_mut().ok_or_else(|| {
        CliError::Config(format!("override path '{path}' crosses a non-object value"))
    })?;
    obj.insert(parts[parts.len() - 1].to_string(), leaf);
    Ok(())
}

/// Load a config: file contents (or `{}`), then overrides applied in order.
/// Unknown keys anywhere are an error.
pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<ExperimentConfig, CliError> {
    let mut value: Value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Default::default()),
    };
    if !value.is_object() {
        return Err(CliError::Config("config root must be a JSON object".into()));
    }
    for (key, raw) in overrides {
        set_dotted(&mut value, key, raw)?;
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}
