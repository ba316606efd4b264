//! Minimal standalone SVG plotting. Output is byte-deterministic for
//! identical inputs: every coordinate is written with fixed precision and all
//! collections are iterated in insertion order.

use std::fmt::Write as _;

use crate::error::CliError;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub dash: Option<String>,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Polygon {
    pub points: Vec<(f64, f64)>,
    pub fill: String,
    pub opacity: f64,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
    pub polygons: Vec<Polygon>,
}

impl Figure {
    pub fn new(title: &str, x_label: &str, y_label: &str, log_y: bool) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_y,
            series: Vec::new(),
            polygons: Vec::new(),
        }
    }

    fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut x_lo = f64::MAX;
        let mut x_hi = f64::MIN;
        let mut y_lo = f64::MAX;
        let mut y_hi = f64::MIN;
        let mut any = false;
        let mut visit = |x: f64, y: f64| {
            if !x.is_finite() || !y.is_finite() {
                return;
            }
            if self.log_y && y <= 0.0 {
                return;
            }
            any = true;
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        };
        for s in &self.series {
            for &(x, y) in &s.points {
                visit(x, y);
            }
        }
        for p in &self.polygons {
            for &(x, y) in &p.points {
                visit(x, y);
            }
        }
        if !any {
            return None;
        }
        if self.log_y {
            // cap the dynamic range so near-zero bins do not flatten the plot
            y_lo = y_lo.max(y_hi * 1e-16);
        }
        if x_lo == x_hi {
            x_lo -= 0.5;
            x_hi += 0.5;
        }
        if y_lo == y_hi {
            y_lo *= 0.5;
            y_hi *= 2.0;
            if y_lo == y_hi {
                y_lo = -1.0;
                y_hi = 1.0;
            }
        }
        Some((x_lo, x_hi, y_lo, y_hi))
    }

    pub fn render(&self) -> Result<String, CliError> {
        let (x_lo, x_hi, y_lo, y_hi) = self
            .bounds()
            .ok_or_else(|| CliError::EmptyInput("figure has no drawable data".into()))?;
        let (ty_lo, ty_hi) = if self.log_y {
            (y_lo.log10(), y_hi.log10())
        } else {
            (y_lo, y_hi)
        };

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let py = |y: f64| {
            let ty = if self.log_y { y.log10() } else { y };
            MARGIN_TOP + (ty_hi - ty) / (ty_hi - ty_lo) * plot_h
        };

        let mut out = String::with_capacity(16 * 1024);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(
            out,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="24" font-family="monospace" font-size="15" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            escape(&self.title)
        );

        // shaded regions first, under everything else
        for poly in &self.polygons {
            if poly.points.len() < 3 {
                continue;
            }
            let mut d = String::new();
            for (i, &(x, y)) in poly.points.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                let _ = write!(d, "{cmd}{:.2} {:.2} ", px(x), py(y));
            }
            d.push('Z');
            let _ = writeln!(
                out,
                r#"<path d="{d}" fill="{}" fill-opacity="{:.2}" stroke="none"/>"#,
                poly.fill, poly.opacity
            );
        }

        // axes and ticks
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        for (x, label) in linear_ticks(x_lo, x_hi) {
            let sx = px(x);
            let _ = writeln!(
                out,
                r#"<line x1="{sx:.2}" y1="{:.1}" x2="{sx:.2}" y2="{:.1}" stroke="black"/>"#,
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{sx:.2}" y="{:.1}" font-family="monospace" font-size="12" text-anchor="middle">{label}</text>"#,
                MARGIN_TOP + plot_h + 19.0
            );
        }
        let y_ticks = if self.log_y {
            log_ticks(ty_lo, ty_hi)
        } else {
            linear_ticks(ty_lo, ty_hi)
        };
        for (ty, label) in y_ticks {
            let sy = MARGIN_TOP + (ty_hi - ty) / (ty_hi - ty_lo) * plot_h;
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{sy:.2}" x2="{MARGIN_LEFT}" y2="{sy:.2}" stroke="black"/>"#,
                MARGIN_LEFT - 5.0
            );
            let _ = writeln!(
                out,
                r##"<line x1="{MARGIN_LEFT}" y1="{sy:.2}" x2="{:.1}" y2="{sy:.2}" stroke="#dddddd" stroke-width="0.5"/>"##,
                MARGIN_LEFT + plot_w
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{label}</text>"#,
                MARGIN_LEFT - 8.0,
                sy + 4.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="13" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="20" y="{:.1}" font-family="monospace" font-size="13" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        // data
        for s in &self.series {
            let mut d = String::new();
            let mut pen_down = false;
            for &(x, y) in &s.points {
                let drawable = x.is_finite() && y.is_finite() && (!self.log_y || y > 0.0);
                if !drawable {
                    pen_down = false;
                    continue;
                }
                let cmd = if pen_down { 'L' } else { 'M' };
                let y_clamped = if self.log_y { y.max(y_lo) } else { y };
                let _ = write!(d, "{cmd}{:.2} {:.2} ", px(x), py(y_clamped));
                pen_down = true;
            }
            if d.is_empty() {
                continue;
            }
            let dash = s
                .dash
                .as_ref()
                .map(|v| format!(r#" stroke-dasharray="{v}""#))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.6"{dash}/>"#,
                d.trim_end(),
                s.color
            );
        }

        // legend
        let mut ly = MARGIN_TOP + 16.0;
        for s in &self.series {
            if s.label.is_empty() {
                continue;
            }
            let lx = MARGIN_LEFT + plot_w - 220.0;
            let dash = s
                .dash
                .as_ref()
                .map(|v| format!(r#" stroke-dasharray="{v}""#))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="1.6"{dash}/>"#,
                lx + 28.0,
                s.color
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12">{}</text>"#,
                lx + 34.0,
                ly + 4.0,
                escape(&s.label)
            );
            ly += 18.0;
        }

        out.push_str("</svg>\n");
        Ok(out)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Up to ~6 round-valued ticks covering `[lo, hi]`.
fn linear_ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    let range = hi - lo;
    let raw_step = range / 5.0;
    let mag = 10f64.powf(raw_step.log10().floor());
    let norm = raw_step / mag;
    let step = if norm < 1.5 {
        mag
    } else if norm < 3.5 {
        2.0 * mag
    } else if norm < 7.5 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let first = (lo / step).ceil();
    let mut out = Vec::new();
    let mut k = first;
    while k * step <= hi + 1e-9 * range {
        let v = k * step;
        out.push((v, format_tick(v)));
        k += 1.0;
    }
    out
}

/// Decade ticks for a log axis given log10 bounds.
fn log_ticks(tlo: f64, thi: f64) -> Vec<(f64, String)> {
    let lo = tlo.ceil() as i64;
    let hi = thi.floor() as i64;
    let n = (hi - lo).max(0) + 1;
    let step = ((n + 9) / 10).max(1);
    (lo..=hi)
        .step_by(step as usize)
        .map(|e| (e as f64, format!("1e{e}")))
        .collect()
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}
