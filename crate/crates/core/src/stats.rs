//! Empirical densities, level-crossing statistics, and comparison metrics.
//!
//! Histograms can be accumulated per realization and merged; counts are
//! integers, so merging is exact and order independent. The log-tail binning
//! keeps linear bins in the core of the distribution and log-spaced bins in
//! the tails, matching how heavy-tailed densities are usually displayed.

use crate::gp::ProcessRealization;
use crate::{Error, Result};

/// Binning strategy for [`estimate_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinScheme {
    /// Equal-width bins spanning the sample range.
    Linear,
    /// Symmetric around zero: linear core within four sample standard
    /// deviations, log-spaced bins beyond.
    LogTail,
}

/// Normalized histogram density.
#[derive(Debug, Clone)]
pub struct EmpiricalDensity {
    edges: Vec<f64>,
    counts: Vec<u64>,
    density: Vec<f64>,
    total_samples: u64,
}

impl EmpiricalDensity {
    fn from_counts(edges: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyInput("histogram holds no samples"));
        }
        let density = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, w)| c as f64 / (total as f64 * (w[1] - w[0])))
            .collect();
        Ok(Self {
            edges,
            counts,
            density,
            total_samples: total,
        })
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn total_samples(&self) -> u64 {
        self.total_samples
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }

    pub fn bin_width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Mass fraction of bin `i`.
    pub fn bin_mass(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.total_samples as f64
    }

    /// Quantile of the binned distribution by linear interpolation inside the
    /// containing bin.
    pub fn quantile(&self, q: f64) -> f64 {
        let target = q.clamp(0.0, 1.0) * self.total_samples as f64;
        let mut cum = 0.0;
        for i in 0..self.counts.len() {
            let next = cum + self.counts[i] as f64;
            if next >= target && self.counts[i] > 0 {
                let frac = (target - cum) / self.counts[i] as f64;
                return self.edges[i] + frac * self.bin_width(i);
            }
            cum = next;
        }
        *self.edges.last().expect("edges are non-empty")
    }
}

fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::InvalidParams("need at least two bin edges".into()));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) || edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidParams(
            "bin edges must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Symmetric log-tail edges: `n_core` equal bins on `[-core, core]` and
/// `n_tail` log-spaced bins per side out to `x_max` (omitted when `x_max`
/// does not exceed the core). `n_core` is rounded up to even so zero is an
/// edge and bins mirror exactly.
pub fn log_tail_edges(core_halfwidth: f64, x_max: f64, n_core: usize, n_tail: usize) -> Vec<f64> {
    let n_core = n_core.max(2).div_ceil(2) * 2;
    let c = core_halfwidth.abs();
    let mut positive: Vec<f64> = (0..=n_core / 2)
        .map(|i| c * (i as f64) / (n_core / 2) as f64)
        .collect();
    if x_max > c && n_tail > 0 {
        let ratio = x_max / c;
        positive.extend((1..=n_tail).map(|k| c * ratio.powf(k as f64 / n_tail as f64)));
    }
    let mut edges: Vec<f64> = positive.iter().skip(1).rev().map(|&e| -e).collect();
    edges.extend(&positive);
    edges
}

/// Streaming histogram with fixed edges; counts merge exactly.
#[derive(Debug, Clone)]
pub struct DensityAccumulator {
    edges: Vec<f64>,
    counts: Vec<u64>,
    below: u64,
    above: u64,
    /// center index when the edges mirror around a zero edge
    symmetric_mid: Option<usize>,
}

impl DensityAccumulator {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        validate_edges(&edges)?;
        let n = edges.len() - 1;
        let mid = n / 2;
        let mirrored = n.is_multiple_of(2)
            && edges[mid] == 0.0
            && (0..edges.len()).all(|i| edges[i] == -edges[edges.len() - 1 - i]);
        Ok(Self {
            counts: vec![0; n],
            symmetric_mid: mirrored.then_some(mid),
            edges,
            below: 0,
            above: 0,
        })
    }

    fn bin_index(&self, x: f64) -> Option<usize> {
        if !x.is_finite() {
            return None;
        }
        if let Some(mid) = self.symmetric_mid {
            // bin by magnitude and sign so that x and -x always mirror
            let half = &self.edges[mid..];
            let a = x.abs();
            if a >= *half.last().expect("non-empty edges") {
                return None;
            }
            let j = half.partition_point(|&e| e <= a) - 1;
            Some(if x < 0.0 { mid - 1 - j } else { mid + j })
        } else {
            if x < self.edges[0] || x >= *self.edges.last().expect("non-empty edges") {
                return None;
            }
            Some(self.edges.partition_point(|&e| e <= x) - 1)
        }
    }

    pub fn accumulate(&mut self, values: impl IntoIterator<Item = f64>) {
        for x in values {
            match self.bin_index(x) {
                Some(i) => self.counts[i] += 1,
                None => {
                    if x < self.edges[0] {
                        self.below += 1;
                    } else {
                        self.above += 1;
                    }
                }
            }
        }
    }

    /// Samples that fell outside the edge span (or were non-finite) and were
    /// excluded.
    pub fn out_of_range(&self) -> u64 {
        self.below + self.above
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::InvalidParams(
                "cannot merge histograms with different edges".into(),
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.below += other.below;
        self.above += other.above;
        Ok(())
    }

    pub fn into_density(self) -> Result<EmpiricalDensity> {
        EmpiricalDensity::from_counts(self.edges, self.counts)
    }
}

/// Streaming mean/variance accumulator; merged field-wise in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct StreamingMoments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl StreamingMoments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn extend(&mut self, values: impl IntoIterator<Item = f64>) {
        for v in values {
            self.push(v);
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        (self.sum_sq / self.n as f64 - m * m).max(0.0)
    }
}

/// Histogram density estimate from raw samples.
pub fn estimate_density(samples: &[f64], scheme: BinScheme, n_bins: usize) -> Result<EmpiricalDensity> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("samples"));
    }
    if n_bins < 1 {
        return Err(Error::InvalidParams("n_bins must be >= 1".into()));
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "samples contain non-finite value {bad}"
        )));
    }

    let edges = match scheme {
        BinScheme::Linear => {
            let mut lo = samples.iter().cloned().fold(f64::MAX, f64::min);
            let mut hi = samples.iter().cloned().fold(f64::MIN, f64::max);
            if lo == hi {
                lo -= 0.5;
                hi += 0.5;
            }
            // open the top edge so the maximum lands inside the last bin
            hi += (hi - lo) * 1e-9 + f64::MIN_POSITIVE;
            let n = n_bins.max(1);
            (0..=n)
                .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                .collect::<Vec<f64>>()
        }
        BinScheme::LogTail => {
            let n = samples.len() as f64;
            let mean = samples.iter().sum::<f64>() / n;
            let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let std = var.sqrt();
            let abs_max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if std == 0.0 || abs_max == 0.0 {
                // degenerate spread: fall back to plain linear bins
                return estimate_density(samples, BinScheme::Linear, n_bins);
            }
            let core = 4.0 * std;
            let top = abs_max * (1.0 + 1e-9);
            log_tail_edges(core.min(top), top, n_bins, (n_bins / 2).max(4))
        }
    };

    let mut acc = DensityAccumulator::new(edges)?;
    acc.accumulate(samples.iter().copied());
    debug_assert_eq!(acc.out_of_range(), 0);
    acc.into_density()
}

/// Level-crossing summary of one channel of a realization.
#[derive(Debug, Clone)]
pub struct CrossingStats {
    pub level: f64,
    /// Downcrossings (above to at-or-below) per unit time.
    pub down_rate: f64,
    /// Mean duration of completed below-level excursions.
    pub mean_excursion: f64,
    /// Durations of completed excursions, in path order.
    pub excursion_durations: Vec<f64>,
    pub n_down: u64,
    /// Observed path span used for the rate.
    pub span: f64,
}

/// Detect downcrossings of `level` and the durations of the below-level
/// excursions they open. Crossing instants are linearly interpolated between
/// samples; excursions clipped by either end of the path are discarded.
pub fn crossing_stats(path: &ProcessRealization, channel: &str, level: f64) -> Result<CrossingStats> {
    let v = path
        .channel(channel)
        .ok_or(Error::EmptyInput("requested channel"))?;
    if v.len() < 2 {
        return Err(Error::EmptyInput("need at least two samples"));
    }
    let dt = path.dt();
    let cross_time = |i: usize| -> f64 {
        let a = v[i] - level;
        let b = v[i + 1] - level;
        path.time(i) + dt * a / (a - b)
    };

    let mut n_down = 0u64;
    let mut open: Option<f64> = None;
    let mut durations = Vec::new();
    for i in 0..v.len() - 1 {
        let above = v[i] > level;
        let next_above = v[i + 1] > level;
        if above && !next_above {
            n_down += 1;
            open = Some(cross_time(i));
        } else if !above && next_above {
            if let Some(t_down) = open.take() {
                durations.push(cross_time(i) - t_down);
            }
        }
    }

    let span = path.duration();
    let mean_excursion = if durations.is_empty() {
        0.0
    } else {
        durations.iter().sum::<f64>() / durations.len() as f64
    };
    Ok(CrossingStats {
        level,
        down_rate: n_down as f64 / span,
        mean_excursion,
        excursion_durations: durations,
        n_down,
        span,
    })
}

/// Agreement metrics between an empirical density and an analytic curve
/// sampled on the same bins.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// L1 distance over the core bins (centers within three robust standard
    /// deviations).
    pub l1_core: f64,
    /// Largest |log10 ratio| over valid tail bins, if any.
    pub log_ratio_tail: Option<f64>,
    /// Largest |log10 ratio| over all valid bins.
    pub max_abs_log10_ratio: Option<f64>,
    /// Interquartile-range based scale of the empirical density.
    pub robust_sigma: f64,
    /// Bins whose mass clears the shot-noise floor.
    pub n_valid_bins: usize,
    /// Mass threshold `10 / total_samples` used for validity.
    pub mass_floor: f64,
    /// log10 spread of the empirical density across valid bins.
    pub decades_span: f64,
}

/// Compare an empirical density against analytic values at its bin centers.
/// Bins with empirical mass at or below `10 / total_samples` are excluded
/// from ratio metrics as shot-noise dominated.
pub fn compare_densities(a: &EmpiricalDensity, analytic: &[f64]) -> Result<ComparisonReport> {
    if analytic.len() != a.n_bins() {
        return Err(Error::InvalidParams(format!(
            "analytic curve has {} values for {} bins",
            analytic.len(),
            a.n_bins()
        )));
    }
    let mass_floor = 10.0 / a.total_samples() as f64;
    let robust_sigma = (a.quantile(0.75) - a.quantile(0.25)) / 1.348_979_500_392_163;
    let core_halfwidth = 3.0 * robust_sigma;

    let mut l1_core = 0.0;
    let mut tail_max: Option<f64> = None;
    let mut all_max: Option<f64> = None;
    let mut n_valid = 0usize;
    let mut dens_min = f64::MAX;
    let mut dens_max = 0.0f64;
    for (i, &ana) in analytic.iter().enumerate() {
        let center = a.bin_center(i);
        let emp = a.density()[i];
        if center.abs() <= core_halfwidth {
            l1_core += (emp - ana).abs() * a.bin_width(i);
        }
        if a.bin_mass(i) > mass_floor {
            n_valid += 1;
            dens_min = dens_min.min(emp);
            dens_max = dens_max.max(emp);
            if emp > 0.0 && ana > 0.0 {
                let r = (emp / ana).log10().abs();
                all_max = Some(all_max.map_or(r, |m: f64| m.max(r)));
                if center.abs() > core_halfwidth {
                    tail_max = Some(tail_max.map_or(r, |m: f64| m.max(r)));
                }
            }
        }
    }
    let decades_span = if n_valid > 0 && dens_min > 0.0 {
        (dens_max / dens_min).log10()
    } else {
        0.0
    };

    Ok(ComparisonReport {
        l1_core,
        log_ratio_tail: tail_max,
        max_abs_log10_ratio: all_max,
        robust_sigma,
        n_valid_bins: n_valid,
        mass_floor,
        decades_span,
    })
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    let mut p = 0.0;
    for k in 1..=100i32 {
        let term = 2.0 * (-1.0f64).powi(k + 1) * (-2.0 * (f64::from(k) * lambda).powi(2)).exp();
        p += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}
