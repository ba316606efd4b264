//! Experiment modes: each produces CSV artifacts, an optional SVG, and a
//! `summary.json`. Numbers in the summary are the same in-memory values that
//! were written to the CSVs, and the `timings` block holds deterministic work
//! counters so outputs stay bit-identical across reruns (wall-clock time goes
//! to stdout only).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use stochastic_mathieu::analytic::{build_model, AnalyticModel, QuadSettings};
use stochastic_mathieu::ensemble::{fold_realizations, stream_rng, Stream};
use stochastic_mathieu::gp::{CirculantEmbedding, ProcessRealization, CH_ALPHA};
use stochastic_mathieu::sde::{
    reconstruct_fast, simulate_averaged, simulate_full, SimConfig, SystemParams, CH_CHI1, CH_CHI2,
    CH_X, CH_XDOT,
};
use stochastic_mathieu::stability::{build_diagram, PointClass, StabilityDiagram};
use stochastic_mathieu::stats::{
    compare_densities, log_tail_edges, ComparisonReport, DensityAccumulator, EmpiricalDensity,
    StreamingMoments,
};

use crate::config::{ExperimentConfig, HistogramSection, Mode};
use crate::error::CliError;
use crate::svg::{Figure, Polygon, Series};

#[derive(Debug, Clone, Serialize)]
pub struct ParamsEcho {
    pub omega0: f64,
    pub zeta: f64,
    pub sigma_alpha: f64,
    pub ell_alpha: f64,
    pub sigma_f: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticSummary {
    pub p_r: f64,
    pub eta: f64,
    pub t_bar: f64,
    pub gamma_pos: f64,
    pub gamma_neg: f64,
    pub upsilon: f64,
    pub rho: f64,
    pub background_std: f64,
}

impl AnalyticSummary {
    fn from_model(model: &AnalyticModel) -> Self {
        Self {
            p_r: model.p_r(),
            eta: model.eta(),
            t_bar: model.t_bar(),
            gamma_pos: model.gamma_pos(),
            gamma_neg: model.gamma_neg(),
            upsilon: model.upsilon(),
            rho: model.rho(),
            background_std: model.background_variance().sqrt(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricsSummary {
    pub l1_core: f64,
    pub log_ratio_tail: Option<f64>,
    pub max_abs_log10_ratio: Option<f64>,
    pub robust_sigma: f64,
    pub n_valid_bins: usize,
    pub mass_floor: f64,
    pub decades_span: f64,
    pub sample_variance: f64,
    pub n_histogram_samples: u64,
    pub out_of_range: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PanelSummary {
    pub sigma_alpha: f64,
    pub ell_alpha: f64,
    pub dir: String,
    pub analytic: AnalyticSummary,
    pub metrics: MetricsSummary,
}

/// Deterministic work counters (not wall-clock times, which would break
/// bit-identical reruns).
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub realizations: u64,
    pub integration_steps: u64,
    pub histogram_samples: u64,
    pub curve_points: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub mode: &'static str,
    pub master_seed: u64,
    pub params: ParamsEcho,
    pub analytic: Option<AnalyticSummary>,
    pub metrics: Option<MetricsSummary>,
    pub panels: Option<Vec<PanelSummary>>,
    pub outputs: Vec<String>,
    pub timings: Timings,
}

/// Run one mode end to end, writing artifacts under the configured output
/// directory, `summary.json` last.
pub fn run(mode: Mode, cfg: &ExperimentConfig) -> Result<Summary, CliError> {
    let out = PathBuf::from(&cfg.outputs.dir);
    fs::create_dir_all(&out)?;
    let mut summary = match mode {
        Mode::GpSample => gp_sample(cfg, &out)?,
        Mode::SimulateFull => simulate(cfg, &out, false)?,
        Mode::SimulateAveraged => simulate(cfg, &out, true)?,
        Mode::AnalyticPdf => analytic_pdf(cfg, &out)?,
        Mode::StabilityDiagram => stability_diagram(cfg, &out)?,
        Mode::Compare => compare(cfg, &out)?,
        Mode::ReproduceFig3 => reproduce_fig3(cfg, &out)?,
    };
    summary.outputs.push("summary.json".into());
    let json = serde_json::to_string_pretty(&summary)?;
    fs::write(out.join("summary.json"), json + "\n")?;
    Ok(summary)
}

fn params_echo(params: &SystemParams) -> ParamsEcho {
    ParamsEcho {
        omega0: params.omega0(),
        zeta: params.zeta(),
        sigma_alpha: params.acf().sigma_alpha(),
        ell_alpha: params.acf().ell_alpha(),
        sigma_f: params.sigma_f(),
    }
}

fn try_analytic_summary(cfg: &ExperimentConfig, params: &SystemParams) -> Option<AnalyticSummary> {
    build_model(params, cfg.quad_settings())
        .ok()
        .map(|m| AnalyticSummary::from_model(&m))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)?;
    Ok(())
}

/// Excitation path for one realization index of this configuration.
fn excitation_path(
    sim: &SimConfig,
    embedding: &CirculantEmbedding,
    realization: u64,
) -> Result<ProcessRealization, CliError> {
    let mut rng = stream_rng(sim.master_seed, realization, Stream::Excitation);
    let values = embedding.sample(&mut rng);
    Ok(ProcessRealization::new(0.0, sim.dt)?.with_channel(CH_ALPHA, values)?)
}

fn downsampled(points: impl ExactSizeIterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let stride = (points.len() / 4000).max(1);
    points.step_by(stride).collect()
}

fn gp_sample(cfg: &ExperimentConfig, out: &Path) -> Result<Summary, CliError> {
    let params = cfg.system_params()?;
    let sim = cfg.sim_config()?;
    let n = sim.steps() + 1;
    let embedding = CirculantEmbedding::new(params.acf(), n, sim.dt)?;
    let path = excitation_path(&sim, &embedding, 0)?;
    let alpha = path.channel(CH_ALPHA).expect("alpha channel");

    let mut csv = String::with_capacity(alpha.len() * 24);
    csv.push_str("t,alpha\n");
    for (i, a) in alpha.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", path.time(i), a);
    }
    write_text(&out.join("gp_sample.csv"), &csv)?;
    let mut outputs = vec!["gp_sample.csv".to_string()];

    if cfg.outputs.svg {
        let mut fig = Figure::new("excitation sample", "t", "alpha", false);
        fig.series.push(Series {
            label: "alpha(t)".into(),
            color: "#1f77b4".into(),
            dash: None,
            points: downsampled(
                alpha
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (path.time(i), *a))
                    .collect::<Vec<_>>()
                    .into_iter(),
            ),
        });
        write_text(&out.join("gp_sample.svg"), &fig.render()?)?;
        outputs.push("gp_sample.svg".into());
    }

    Ok(Summary {
        mode: Mode::GpSample.as_str(),
        master_seed: sim.master_seed,
        params: params_echo(&params),
        analytic: try_analytic_summary(cfg, &params),
        metrics: None,
        panels: None,
        outputs,
        timings: Timings {
            realizations: 1,
            integration_steps: 0,
            histogram_samples: 0,
            curve_points: 0,
        },
    })
}

fn simulate(cfg: &ExperimentConfig, out: &Path, averaged: bool) -> Result<Summary, CliError> {
    let params = cfg.system_params()?;
    let sim = cfg.sim_config()?;
    let n = sim.steps() + 1;
    let embedding = CirculantEmbedding::new(params.acf(), n, sim.dt)?;
    let alpha_path = excitation_path(&sim, &embedding, 0)?;

    let (csv_name, svg_label, trajectory) = if averaged {
        let chi = simulate_averaged(&params, &sim, &alpha_path, 0, [0.0, 0.0])?;
        let c1 = chi.channel(CH_CHI1).expect("chi1");
        let c2 = chi.channel(CH_CHI2).expect("chi2");
        let mut csv = String::with_capacity(n * 40);
        csv.push_str("t,chi1,chi2\n");
        for i in 0..n {
            let _ = writeln!(csv, "{},{},{}", chi.time(i), c1[i], c2[i]);
        }
        ("trajectory.csv", "chi1(t)", (csv, chi, CH_CHI1))
    } else {
        let full = simulate_full(&params, &sim, &alpha_path, 0, [0.0, 0.0])?;
        let x = full.channel(CH_X).expect("x");
        let v = full.channel(CH_XDOT).expect("xdot");
        let a = full.channel(CH_ALPHA).expect("alpha");
        let mut csv = String::with_capacity(n * 56);
        csv.push_str("t,x,xdot,alpha\n");
        for i in 0..n {
            let _ = writeln!(csv, "{},{},{},{}", full.time(i), x[i], v[i], a[i]);
        }
        ("trajectory.csv", "x(t)", (csv, full, CH_X))
    };
    let (csv, path, plot_channel) = trajectory;
    write_text(&out.join(csv_name), &csv)?;
    let mut outputs = vec![csv_name.to_string()];

    if cfg.outputs.svg {
        let vals = path.channel(plot_channel).expect("plot channel");
        let mut fig = Figure::new(
            if averaged {
                "averaged slow-envelope trajectory"
            } else {
                "full-system trajectory"
            },
            "t",
            plot_channel,
            false,
        );
        fig.series.push(Series {
            label: svg_label.into(),
            color: "#1f77b4".into(),
            dash: None,
            points: downsampled(
                vals.iter()
                    .enumerate()
                    .map(|(i, v)| (path.time(i), *v))
                    .collect::<Vec<_>>()
                    .into_iter(),
            ),
        });
        write_text(&out.join("trajectory.svg"), &fig.render()?)?;
        outputs.push("trajectory.svg".into());
    }

    Ok(Summary {
        mode: if averaged {
            Mode::SimulateAveraged.as_str()
        } else {
            Mode::SimulateFull.as_str()
        },
        master_seed: sim.master_seed,
        params: params_echo(&params),
        analytic: try_analytic_summary(cfg, &params),
        metrics: None,
        panels: None,
        outputs,
        timings: Timings {
            realizations: 1,
            integration_steps: sim.steps() as u64,
            histogram_samples: 0,
            curve_points: 0,
        },
    })
}

/// Symmetric analytic curve: negative mirror followed by the positive grid.
fn symmetric_curve(model: &AnalyticModel) -> Result<Vec<(f64, f64, f64, f64)>, CliError> {
    let grid = model.curve_grid()?;
    let half = model.curve(&grid)?;
    let mut rows = Vec::with_capacity(half.len() * 2 - 1);
    for &(x, total, bg, rare) in half.iter().skip(1).rev() {
        rows.push((-x, total, bg, rare));
    }
    rows.extend(half.iter().copied());
    Ok(rows)
}

fn curve_csv(rows: &[(f64, f64, f64, f64)]) -> String {
    let mut csv = String::with_capacity(rows.len() * 64);
    csv.push_str("x,pdf_total,pdf_background_weighted,pdf_rare_weighted\n");
    for (x, total, bg, rare) in rows {
        let _ = writeln!(csv, "{x},{total},{bg},{rare}");
    }
    csv
}

fn pdf_overlay_figure(title: &str, rows: &[(f64, f64, f64, f64)]) -> Figure {
    let mut fig = Figure::new(title, "x", "pdf", true);
    fig.series.push(Series {
        label: "total".into(),
        color: "#1f77b4".into(),
        dash: None,
        points: rows.iter().map(|r| (r.0, r.1)).collect(),
    });
    fig.series.push(Series {
        label: "background (weighted)".into(),
        color: "#2ca02c".into(),
        dash: Some("6 3".into()),
        points: rows.iter().map(|r| (r.0, r.2)).collect(),
    });
    fig.series.push(Series {
        label: "rare events (weighted)".into(),
        color: "#d62728".into(),
        dash: Some("2 3".into()),
        points: rows.iter().map(|r| (r.0, r.3)).collect(),
    });
    fig
}

fn analytic_pdf(cfg: &ExperimentConfig, out: &Path) -> Result<Summary, CliError> {
    let params = cfg.system_params()?;
    let model = build_model(&params, cfg.quad_settings())?;
    let rows = symmetric_curve(&model)?;
    write_text(&out.join("analytic_curve.csv"), &curve_csv(&rows))?;
    let mut outputs = vec!["analytic_curve.csv".to_string()];

    if cfg.outputs.svg {
        let fig = pdf_overlay_figure("stationary response density", &rows);
        write_text(&out.join("analytic_pdf.svg"), &fig.render()?)?;
        outputs.push("analytic_pdf.svg".into());
    }

    Ok(Summary {
        mode: Mode::AnalyticPdf.as_str(),
        master_seed: cfg.sim.master_seed,
        params: params_echo(&params),
        analytic: Some(AnalyticSummary::from_model(&model)),
        metrics: None,
        panels: None,
        outputs,
        timings: Timings {
            realizations: 0,
            integration_steps: 0,
            histogram_samples: 0,
            curve_points: rows.len() as u64,
        },
    })
}

fn stability_svg(diagram: &StabilityDiagram) -> Figure {
    let mut fig = Figure::new(
        "parametric stability chart",
        "delta = omega0^2 / Omega^2",
        "alpha",
        false,
    );
    let d = &diagram.delta_grid;
    let a = &diagram.alpha_grid;
    // pin the axes to the swept grid even where everything is stable
    fig.polygons.push(Polygon {
        points: vec![
            (d[0], a[0]),
            (*d.last().expect("grid"), a[0]),
            (*d.last().expect("grid"), *a.last().expect("grid")),
            (d[0], *a.last().expect("grid")),
        ],
        fill: "none".into(),
        opacity: 0.0,
    });
    // contiguous unstable runs per delta column become shaded strips
    for (i, row) in diagram.classification.iter().enumerate() {
        let half_d = if d.len() > 1 { 0.5 * (d[1] - d[0]) } else { 0.05 };
        let half_a = if a.len() > 1 { 0.5 * (a[1] - a[0]) } else { 0.05 };
        let mut j = 0;
        while j < row.len() {
            if row[j] == PointClass::Unstable {
                let j0 = j;
                while j < row.len() && row[j] == PointClass::Unstable {
                    j += 1;
                }
                let (x0, x1) = (d[i] - half_d, d[i] + half_d);
                let (y0, y1) = (a[j0] - half_a, a[j - 1] + half_a);
                fig.polygons.push(Polygon {
                    points: vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)],
                    fill: "#d62728".into(),
                    opacity: 0.35,
                });
            } else {
                j += 1;
            }
        }
    }
    for boundary in &diagram.boundaries {
        fig.series.push(Series {
            label: format!("tongue {} boundary", boundary.tongue),
            color: "#1f1f1f".into(),
            dash: None,
            points: boundary.points.clone(),
        });
    }
    fig
}

fn stability_diagram(cfg: &ExperimentConfig, out: &Path) -> Result<Summary, CliError> {
    let params = cfg.system_params()?;
    let st = &cfg.stability;
    let diagram = build_diagram(
        (st.delta_min, st.delta_max),
        (st.alpha_min, st.alpha_max),
        params.zeta(),
        (st.n_delta, st.n_alpha),
        st.trunc,
    )?;

    let mut csv = String::new();
    csv.push_str("delta,alpha,unstable\n");
    for (i, &delta) in diagram.delta_grid.iter().enumerate() {
        for (j, &alpha) in diagram.alpha_grid.iter().enumerate() {
            let class = match diagram.classification[i][j] {
                PointClass::Stable => "false",
                PointClass::Unstable => "true",
                PointClass::Undetermined => "undetermined",
            };
            let _ = writeln!(csv, "{delta},{alpha},{class}");
        }
    }
    write_text(&out.join("diagram.csv"), &csv)?;

    let mut csv = String::new();
    csv.push_str("tongue,delta,alpha\n");
    for boundary in &diagram.boundaries {
        for &(delta, alpha) in &boundary.points {
            let _ = writeln!(csv, "{},{delta},{alpha}", boundary.tongue);
        }
    }
    write_text(&out.join("boundary.csv"), &csv)?;
    let mut outputs = vec!["diagram.csv".to_string(), "boundary.csv".to_string()];

    if cfg.outputs.svg {
        let fig = stability_svg(&diagram);
        write_text(&out.join("ince_strutt.svg"), &fig.render()?)?;
        outputs.push("ince_strutt.svg".into());
    }

    let n_points = (diagram.delta_grid.len() * diagram.alpha_grid.len()) as u64;
    Ok(Summary {
        mode: Mode::StabilityDiagram.as_str(),
        master_seed: cfg.sim.master_seed,
        params: params_echo(&params),
        analytic: try_analytic_summary(cfg, &params),
        metrics: None,
        panels: None,
        outputs,
        timings: Timings {
            realizations: 0,
            integration_steps: 0,
            histogram_samples: 0,
            curve_points: n_points,
        },
    })
}

/// One full simulation-versus-analytic comparison.
pub struct Panel {
    pub model: AnalyticModel,
    pub density: EmpiricalDensity,
    /// Bin-averaged analytic `(center, total, background, rare)` per bin.
    pub curve_at_bins: Vec<(f64, f64, f64, f64)>,
    pub report: ComparisonReport,
    pub moments: StreamingMoments,
    pub out_of_range: u64,
    pub integration_steps: u64,
}

impl Panel {
    pub fn metrics_summary(&self) -> MetricsSummary {
        MetricsSummary {
            l1_core: self.report.l1_core,
            log_ratio_tail: self.report.log_ratio_tail,
            max_abs_log10_ratio: self.report.max_abs_log10_ratio,
            robust_sigma: self.report.robust_sigma,
            n_valid_bins: self.report.n_valid_bins,
            mass_floor: self.report.mass_floor,
            decades_span: self.report.decades_span,
            sample_variance: self.moments.variance(),
            n_histogram_samples: self.density.total_samples(),
            out_of_range: self.out_of_range,
        }
    }
}

/// Simulate an ensemble of the averaged system, accumulate the response
/// histogram past burn-in, and evaluate the analytic density on its bins.
pub fn run_panel(
    params: &SystemParams,
    sim: &SimConfig,
    quad: QuadSettings,
    hist: &HistogramSection,
) -> Result<Panel, CliError> {
    let model = build_model(params, quad)?;
    let sigma_b = model.background_variance().sqrt();
    let x_top = model.x_max()?.max(8.0 * sigma_b) * 1.3;
    let edges = log_tail_edges(4.0 * sigma_b, x_top, hist.n_core_bins, hist.n_tail_bins);

    let n_grid = sim.steps() + 1;
    let embedding = CirculantEmbedding::new(params.acf(), n_grid, sim.dt)?;
    let stride = ((hist.sample_stride_time / sim.dt).round() as usize).max(1);
    let from = sim.burn_in_index();

    let base_acc = DensityAccumulator::new(edges)?;
    let (acc, moments) = fold_realizations(
        sim.n_realizations,
        32,
        (base_acc.clone(), StreamingMoments::default()),
        |r| {
            let mut rng = stream_rng(sim.master_seed, r, Stream::Excitation);
            let alpha = ProcessRealization::new(0.0, sim.dt)?
                .with_channel(CH_ALPHA, embedding.sample(&mut rng))?;
            let chi = simulate_averaged(params, sim, &alpha, r, [0.0, 0.0])?;
            let fast = reconstruct_fast(&chi, params.omega0())?;
            let x = fast.channel(CH_X).expect("x channel");
            let mut acc = base_acc.clone();
            let mut moments = StreamingMoments::default();
            for i in (from..x.len()).step_by(stride) {
                acc.accumulate([x[i]]);
                moments.push(x[i]);
            }
            Ok((acc, moments))
        },
        |(mut acc, mut moments), (a, m)| {
            acc.merge(&a).expect("edges are shared");
            moments.merge(&m);
            (acc, moments)
        },
    )?;

    let out_of_range = acc.out_of_range();
    let density = acc.into_density()?;

    // bin-averaged analytic density by Simpson over each bin; tail bins are
    // wide on a log scale, so the pointwise center value would be biased
    let centers: Vec<f64> = (0..density.n_bins()).map(|i| density.bin_center(i)).collect();
    let edge_vals = model.curve(density.edges())?;
    let center_vals = model.curve(&centers)?;
    let mut curve_at_bins = Vec::with_capacity(density.n_bins());
    for i in 0..density.n_bins() {
        let avg = |l: f64, c: f64, r: f64| (l + 4.0 * c + r) / 6.0;
        curve_at_bins.push((
            centers[i],
            avg(edge_vals[i].1, center_vals[i].1, edge_vals[i + 1].1),
            avg(edge_vals[i].2, center_vals[i].2, edge_vals[i + 1].2),
            avg(edge_vals[i].3, center_vals[i].3, edge_vals[i + 1].3),
        ));
    }
    let totals: Vec<f64> = curve_at_bins.iter().map(|r| r.1).collect();
    let report = compare_densities(&density, &totals)?;

    Ok(Panel {
        model,
        density,
        curve_at_bins,
        report,
        moments,
        out_of_range,
        integration_steps: (sim.n_realizations * sim.steps()) as u64,
    })
}

fn histogram_csv(density: &EmpiricalDensity) -> String {
    let mut csv = String::with_capacity(density.n_bins() * 48);
    csv.push_str("bin_left,bin_right,density,count\n");
    for i in 0..density.n_bins() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            density.edges()[i],
            density.edges()[i + 1],
            density.density()[i],
            density.counts()[i]
        );
    }
    csv
}

fn write_panel_artifacts(
    panel: &Panel,
    dir: &Path,
    svg: bool,
    outputs: &mut Vec<String>,
    prefix: &str,
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    write_text(&dir.join("histogram.csv"), &histogram_csv(&panel.density))?;
    outputs.push(format!("{prefix}histogram.csv"));
    write_text(
        &dir.join("analytic_at_bins.csv"),
        &curve_csv(&panel.curve_at_bins),
    )?;
    outputs.push(format!("{prefix}analytic_at_bins.csv"));

    if svg {
        let mut fig = pdf_overlay_figure("response density: simulation vs analytic", &{
            let model = &panel.model;
            symmetric_curve(model)?
        });
        // histogram staircase of occupied bins
        let mut steps = Vec::new();
        for i in 0..panel.density.n_bins() {
            if panel.density.counts()[i] > 0 {
                let d = panel.density.density()[i];
                steps.push((panel.density.edges()[i], d));
                steps.push((panel.density.edges()[i + 1], d));
            }
        }
        fig.series.insert(
            0,
            Series {
                label: "simulation (averaged system)".into(),
                color: "#7f7f7f".into(),
                dash: None,
                points: steps,
            },
        );
        // variance-matched Gaussian reference
        let var = panel.moments.variance();
        if var > 0.0 {
            let std = var.sqrt();
            let pts: Vec<(f64, f64)> = (-240..=240)
                .map(|i| {
                    let x = 6.0 * std * f64::from(i) / 240.0;
                    (
                        x,
                        (-x * x / (2.0 * var)).exp() / (std * (2.0 * std::f64::consts::PI).sqrt()),
                    )
                })
                .collect();
            fig.series.push(Series {
                label: "gaussian (variance matched)".into(),
                color: "#9467bd".into(),
                dash: Some("1 3".into()),
                points: pts,
            });
        }
        write_text(&dir.join("compare.svg"), &fig.render()?)?;
        outputs.push(format!("{prefix}compare.svg"));
    }
    Ok(())
}

fn compare(cfg: &ExperimentConfig, out: &Path) -> Result<Summary, CliError> {
    let params = cfg.system_params()?;
    let sim = cfg.sim_config()?;
    let panel = run_panel(&params, &sim, cfg.quad_settings(), &cfg.histogram)?;

    let mut outputs = Vec::new();
    write_panel_artifacts(&panel, out, cfg.outputs.svg, &mut outputs, "")?;

    Ok(Summary {
        mode: Mode::Compare.as_str(),
        master_seed: sim.master_seed,
        params: params_echo(&params),
        analytic: Some(AnalyticSummary::from_model(&panel.model)),
        metrics: Some(panel.metrics_summary()),
        panels: None,
        outputs,
        timings: Timings {
            realizations: sim.n_realizations as u64,
            integration_steps: panel.integration_steps,
            histogram_samples: panel.density.total_samples() + panel.out_of_range,
            curve_points: panel.curve_at_bins.len() as u64,
        },
    })
}

/// Correlation scales (columns) and excitation levels (rows) of the
/// nine-panel comparison grid.
pub const PANEL_ELLS: [f64; 3] = [2.5, 5.0, 10.0];
pub const PANEL_SIGMAS: [f64; 3] = [0.178, 0.229, 0.267];

fn reproduce_fig3(cfg: &ExperimentConfig, out: &Path) -> Result<Summary, CliError> {
    let sim = cfg.sim_config()?;
    let mut outputs = Vec::new();
    let mut panels = Vec::new();
    let mut timings = Timings {
        realizations: 0,
        integration_steps: 0,
        histogram_samples: 0,
        curve_points: 0,
    };

    for &sigma_alpha in &PANEL_SIGMAS {
        for &ell_alpha in &PANEL_ELLS {
            let mut panel_cfg = cfg.clone();
            panel_cfg.params.sigma_alpha = sigma_alpha;
            panel_cfg.params.ell_alpha = ell_alpha;
            let params = panel_cfg.system_params()?;
            let panel = run_panel(&params, &sim, cfg.quad_settings(), &cfg.histogram)?;

            let dir_name = format!("panel_ell{ell_alpha}_sigma{sigma_alpha}");
            let dir = out.join(&dir_name);
            write_panel_artifacts(
                &panel,
                &dir,
                cfg.outputs.svg,
                &mut outputs,
                &format!("{dir_name}/"),
            )?;

            timings.realizations += sim.n_realizations as u64;
            timings.integration_steps += panel.integration_steps;
            timings.histogram_samples += panel.density.total_samples() + panel.out_of_range;
            timings.curve_points += panel.curve_at_bins.len() as u64;
            panels.push(PanelSummary {
                sigma_alpha,
                ell_alpha,
                dir: dir_name,
                analytic: AnalyticSummary::from_model(&panel.model),
                metrics: panel.metrics_summary(),
            });
        }
    }

    let params = cfg.system_params()?;
    Ok(Summary {
        mode: Mode::ReproduceFig3.as_str(),
        master_seed: sim.master_seed,
        params: params_echo(&params),
        analytic: None,
        metrics: None,
        panels: Some(panels),
        outputs,
        timings,
    })
}
