//! Minimal SVG charts: line charts (optionally log-scaled) and spider charts.

use std::fmt::Write;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Values at or below this are drawn at this level on log axes.
pub const LOG_FLOOR: f64 = 1e-12;

pub fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;

impl LineChart {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn log_y(mut self, log: bool) -> Self {
        self.log_y = log;
        self
    }

    pub fn with_series(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }

    fn transform_y(&self, y: f64) -> f64 {
        if self.log_y {
            y.max(LOG_FLOOR).log10()
        } else {
            y
        }
    }

    /// A standalone SVG document.
    pub fn render(&self) -> String {
        document(WIDTH, HEIGHT, &self.render_group(0.0))
    }

    /// The chart as a `<g>` element shifted down by `offset`.
    pub fn render_group(&self, offset: f64) -> String {
        let finite = |v: f64| v.is_finite();
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .map(|&(x, y)| (x, self.transform_y(y)))
            .filter(|&(x, y)| finite(x) && finite(y))
            .collect();
        let (x0, x1) = padded_range(pts.iter().map(|p| p.0));
        let (y0, y1) = padded_range(pts.iter().map(|p| p.1));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

        let mut g = String::new();
        let _ = writeln!(g, r#"<g transform="translate(0,{offset})">"#);
        let _ = writeln!(
            g,
            r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            g,
            r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
        );

        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                g,
                r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#333"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"##,
                TOP + plot_h,
                TOP + plot_h + 4.0,
                TOP + plot_h + 16.0,
                tick_label(t, false)
            );
        }
        let y_ticks = if self.log_y { log_ticks(y0, y1) } else { ticks(y0, y1) };
        for t in y_ticks {
            let y = sy(t);
            let _ = writeln!(
                g,
                r##"<line x1="{:.1}" y1="{y:.1}" x2="{LEFT}" y2="{y:.1}" stroke="#333"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"##,
                LEFT - 4.0,
                LEFT - 6.0,
                y + 3.0,
                tick_label(t, self.log_y)
            );
        }
        let _ = writeln!(
            g,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let y_label = if self.log_y {
            format!("{} (log scale)", self.y_label)
        } else {
            self.y_label.clone()
        };
        let _ = writeln!(
            g,
            r#"<text x="16" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&y_label)
        );

        for (k, s) in self.series.iter().enumerate() {
            let coords: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| (x, self.transform_y(y)))
                .filter(|&(x, y)| finite(x) && finite(y))
                .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                g,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                color(k),
                coords.join(" ")
            );
            let ly = TOP + 12.0 + 16.0 * k as f64;
            let lx = WIDTH - RIGHT + 10.0;
            let _ = writeln!(
                g,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
                lx + 16.0,
                color(k),
                lx + 20.0,
                ly + 3.0,
                escape(&s.name)
            );
        }
        g.push_str("</g>\n");
        g
    }
}

/// Charts stacked vertically in one document.
pub fn stack(charts: &[LineChart]) -> String {
    let body: String = charts
        .iter()
        .enumerate()
        .map(|(k, c)| c.render_group(k as f64 * HEIGHT))
        .collect();
    document(WIDTH, HEIGHT * charts.len().max(1) as f64, &body)
}

/// One axis per label, one closed polygon per profile. Values are
/// probabilities, so every axis runs from 0 at the center to 1 at the rim.
pub fn spider_chart(title: &str, axes: &[String], profiles: &[(String, Vec<f64>)]) -> String {
    let size = 480.0;
    let (cx, cy, r) = (size / 2.0 - 60.0, size / 2.0 + 10.0, 170.0);
    let n = axes.len().max(1);
    let angle = |k: usize| -std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
    let point = |k: usize, v: f64| (cx + r * v * angle(k).cos(), cy + r * v * angle(k).sin());

    let mut body = String::new();
    let _ = writeln!(
        body,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        size / 2.0,
        escape(title)
    );
    for level in [0.25, 0.5, 0.75, 1.0] {
        let ring: Vec<String> = (0..n)
            .map(|k| {
                let (x, y) = point(k, level);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            body,
            r##"<polygon points="{}" fill="none" stroke="#ccc"/>"##,
            ring.join(" ")
        );
    }
    for (k, name) in axes.iter().enumerate() {
        let (x, y) = point(k, 1.0);
        let (lx, ly) = point(k, 1.12);
        let _ = writeln!(
            body,
            r##"<line x1="{cx:.1}" y1="{cy:.1}" x2="{x:.2}" y2="{y:.2}" stroke="#999"/><text x="{lx:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"##,
            ly + 4.0,
            escape(name)
        );
    }
    for (p, (name, values)) in profiles.iter().enumerate() {
        let poly: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let (x, y) = point(k, v.clamp(0.0, 1.0));
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            body,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.15" stroke="{}" stroke-width="2"/>"#,
            poly.join(" "),
            color(p),
            color(p)
        );
        let ly = 50.0 + 16.0 * p as f64;
        let _ = writeln!(
            body,
            r#"<rect x="{:.1}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            size - 110.0,
            ly - 10.0,
            color(p),
            size - 92.0,
            ly,
            escape(name)
        );
    }
    document(size, size + 20.0, &body)
}

fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        let pad = 0.5 * hi.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Roughly five round tick positions in `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi && out.len() < 20 {
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

/// Integer decades in `[lo, hi]` (values are already log10).
fn log_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let first = lo.ceil() as i64;
    let last = hi.floor() as i64;
    let stride = ((last - first) / 6).max(1);
    (first..=last).step_by(stride as usize).map(|d| d as f64).collect()
}

fn tick_label(t: f64, log: bool) -> String {
    if log {
        format!("1e{}", t.round() as i64)
    } else if t != 0.0 && (t.abs() >= 1e5 || t.abs() < 1e-3) {
        format!("{t:.0e}")
    } else {
        let s = format!("{t:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(ticks(0.0, 10.0), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(log_ticks(-3.2, 0.5), vec![-3.0, -2.0, -1.0, 0.0]);
        assert_eq!(tick_label(2.5, false), "2.5");
        assert_eq!(tick_label(-4.0, true), "1e-4");
    }

    #[test]
    fn degenerate_ranges_are_padded() {
        let (lo, hi) = padded_range([3.0, 3.0].into_iter());
        assert!(lo < 3.0 && hi > 3.0);
        assert_eq!(padded_range(std::iter::empty()), (0.0, 1.0));
    }

    #[test]
    fn log_axis_clamps_zeros() {
        let chart = LineChart::new("t", "x", "y")
            .log_y(true)
            .with_series(Series::new("s", vec![(0.0, 1.0), (1.0, 0.0)]));
        let svg = chart.render();
        assert!(svg.contains("1e-12"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
