use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use stochastic_mathieu_cli::config::{self, ExperimentConfig, Mode};
use stochastic_mathieu_cli::error::{CliError, ErrorRecord};
use stochastic_mathieu_cli::modes;

#[derive(Parser)]
#[command(
    name = "mathieu",
    version,
    about = "Stochastic Mathieu equation experiments: simulation, stability charts, rare-event densities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render SVG plots.
    #[arg(long)]
    svg: bool,
    /// Desk-scale preset: 300 realizations to t = 2500.
    #[arg(long)]
    desk_scale: bool,
    /// Dotted-path config overrides, e.g. --set params.sigma_alpha=0.178
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate trajectories of the full or averaged system.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Integrate the averaged slow-envelope system instead of the full one.
        #[arg(long)]
        averaged: bool,
    },
    /// Evaluate the analytic stationary density.
    Analytic {
        #[command(flatten)]
        common: Common,
    },
    /// Classify the parametric stability chart.
    Stability {
        #[command(flatten)]
        common: Common,
    },
    /// Sample the correlated excitation process.
    Gp {
        #[command(flatten)]
        common: Common,
    },
    /// Compare ensemble statistics against the analytic density.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild the nine-panel comparison grid.
    Reproduce {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate { common, .. }
            | Command::Analytic { common }
            | Command::Stability { common }
            | Command::Gp { common }
            | Command::Compare { common }
            | Command::Reproduce { common } => common,
        }
    }
}

fn resolve_mode(command: &Command, cfg: &ExperimentConfig) -> Result<Mode, CliError> {
    let configured = cfg.mode;
    let mode = match command {
        Command::Simulate { averaged, .. } => {
            if *averaged {
                Mode::SimulateAveraged
            } else {
                match configured {
                    Some(Mode::SimulateAveraged) => Mode::SimulateAveraged,
                    _ => Mode::SimulateFull,
                }
            }
        }
        Command::Analytic { .. } => Mode::AnalyticPdf,
        Command::Stability { .. } => Mode::StabilityDiagram,
        Command::Gp { .. } => Mode::GpSample,
        Command::Compare { .. } => Mode::Compare,
        Command::Reproduce { .. } => Mode::ReproduceFig3,
    };
    if let Some(configured) = configured {
        let families_match = match mode {
            Mode::SimulateFull | Mode::SimulateAveraged => matches!(
                configured,
                Mode::SimulateFull | Mode::SimulateAveraged
            ),
            m => configured == m,
        };
        if !families_match {
            return Err(CliError::Config(format!(
                "config mode '{}' conflicts with the '{}' subcommand",
                configured.as_str(),
                mode.as_str()
            )));
        }
    }
    Ok(mode)
}

fn build_config(command: &Command) -> Result<ExperimentConfig, CliError> {
    let common = command.common();
    let mut overrides: Vec<(String, String)> = Vec::new();
    if common.desk_scale {
        overrides.push(("sim.n_realizations".into(), "300".into()));
        overrides.push(("sim.t_end".into(), "2500".into()));
    }
    for pair in &common.set {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--set expects KEY=VALUE, got '{pair}'"))
        })?;
        overrides.push((key.to_string(), value.to_string()));
    }
    let mut cfg = config::load(common.config.as_deref(), &overrides)?;
    if let Some(seed) = common.seed {
        cfg.sim.master_seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.outputs.dir = out.display().to_string();
    }
    if common.svg {
        cfg.outputs.svg = true;
    }
    Ok(cfg)
}

fn run(command: &Command) -> Result<(), CliError> {
    let cfg = build_config(command)?;
    let mode = resolve_mode(command, &cfg)?;
    let started = Instant::now();
    let summary = modes::run(mode, &cfg)?;
    let elapsed = started.elapsed().as_secs_f64();

    println!("mode: {}", summary.mode);
    println!("seed: {}", summary.master_seed);
    if let Some(a) = &summary.analytic {
        println!(
            "P_r = {:.6}  eta = {:.4}  T_bar = {:.4}  gamma_pos = {:.6}  rho = {:.6e}",
            a.p_r, a.eta, a.t_bar, a.gamma_pos, a.rho
        );
    }
    if let Some(m) = &summary.metrics {
        println!(
            "l1_core = {:.4}  max |log10 ratio| = {}  valid bins = {}  decades = {:.2}",
            m.l1_core,
            m.max_abs_log10_ratio
                .map_or("n/a".to_string(), |v| format!("{v:.3}")),
            m.n_valid_bins,
            m.decades_span
        );
    }
    if let Some(panels) = &summary.panels {
        for p in panels {
            println!(
                "panel ell={:<4} sigma={:<5}  P_r = {:.4}  max |log10 ratio| = {}  decades = {:.2}",
                p.ell_alpha,
                p.sigma_alpha,
                p.analytic.p_r,
                p.metrics
                    .max_abs_log10_ratio
                    .map_or("n/a".to_string(), |v| format!("{v:.3}")),
                p.metrics.decades_span
            );
        }
    }
    println!("outputs: {} file(s) under {}", summary.outputs.len(), cfg.outputs.dir);
    println!("wall time: {elapsed:.2}s");
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli.command) {
        let record = ErrorRecord {
            kind: e.kind(),
            message: e.to_string(),
            context: None,
        };
        eprintln!(
            "{}",
            serde_json::to_string(&serde_json::json!({ "error": record }))
                .unwrap_or_else(|_| format!("{{\"error\":{{\"message\":\"{e}\"}}}}"))
        );
        std::process::exit(1);
    }
}
