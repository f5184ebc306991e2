//! Minimal self-contained SVG 1.1 plots: no external assets, no scripts.

use std::fmt::Write as _;

pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
    /// draw markers instead of a connected line
    pub scatter: bool,
    pub marker_radius: f64,
}

impl Series {
    pub fn line(name: impl Into<String>, points: Vec<(f64, f64)>, color: &str) -> Self {
        Self { name: name.into(), points, color: color.to_string(), scatter: false, marker_radius: 0.0 }
    }

    pub fn scatter(name: impl Into<String>, points: Vec<(f64, f64)>, color: &str, r: f64) -> Self {
        Self { name: name.into(), points, color: color.to_string(), scatter: true, marker_radius: r }
    }
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
    /// closed outlines drawn behind the data (data coordinates)
    pub polygons: Vec<(Vec<(f64, f64)>, String)>,
}

impl Plot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x: false,
            series: Vec::new(),
            polygons: Vec::new(),
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 48.0;

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let span = hi - lo;
    let step = 10f64.powf(span.log10().floor());
    let step = if span / step >= 5.0 {
        step
    } else if span / step >= 2.0 {
        step / 2.0
    } else {
        step / 5.0
    };
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        out.push(t);
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Render one panel; a single figure with multiple panels concatenates the
/// output of several render calls via [`render_row`].
pub fn render(plot: &Plot, comment: &str) -> String {
    render_sized(plot, comment, WIDTH, HEIGHT, true)
}

fn render_sized(plot: &Plot, comment: &str, width: f64, height: f64, standalone: bool) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in &plot.series {
        for &(x, y) in &s.points {
            xs.push(x);
            ys.push(y);
        }
    }
    for (poly, _) in &plot.polygons {
        for &(x, y) in poly {
            xs.push(x);
            ys.push(y);
        }
    }
    let (mut x_lo, mut x_hi) = (
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let (mut y_lo, mut y_hi) = (
        ys.iter().copied().fold(f64::INFINITY, f64::min),
        ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if !y_lo.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if plot.log_x {
        x_lo = x_lo.max(1e-12).log10();
        x_hi = x_hi.max(1e-12).log10();
    }
    if x_hi - x_lo < 1e-12 {
        x_hi = x_lo + 1.0;
    }
    if y_hi - y_lo < 1e-12 {
        y_hi = y_lo + 1.0;
    }
    let pad_y = 0.05 * (y_hi - y_lo);
    y_lo -= pad_y;
    y_hi += pad_y;

    let plot_w = width - MARGIN_L - MARGIN_R;
    let plot_h = height - MARGIN_T - MARGIN_B;
    let px = |x: f64| -> f64 {
        let v = if plot.log_x { x.max(1e-12).log10() } else { x };
        MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w
    };
    let py = |y: f64| -> f64 { MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h };

    let mut svg = String::new();
    if standalone {
        let _ = write!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
        );
        let _ = write!(svg, "<!-- {comment} -->\n");
    }
    let _ = write!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    );
    let _ = write!(
        svg,
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n"
    );
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        width / 2.0,
        plot.title
    );

    // x ticks
    if plot.log_x {
        let d_lo = x_lo.floor() as i64;
        let d_hi = x_hi.ceil() as i64;
        for d in d_lo..=d_hi {
            let x = MARGIN_L + (d as f64 - x_lo) / (x_hi - x_lo) * plot_w;
            if x < MARGIN_L - 1.0 || x > MARGIN_L + plot_w + 1.0 {
                continue;
            }
            let _ = write!(
                svg,
                "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n",
                MARGIN_T,
                MARGIN_T + plot_h
            );
            let _ = write!(
                svg,
                "<text x=\"{x}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e{d}</text>\n",
                MARGIN_T + plot_h + 16.0
            );
        }
    } else {
        for t in nice_ticks(x_lo, x_hi) {
            let x = MARGIN_L + (t - x_lo) / (x_hi - x_lo) * plot_w;
            let _ = write!(
                svg,
                "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n",
                MARGIN_T,
                MARGIN_T + plot_h
            );
            let _ = write!(
                svg,
                "<text x=\"{x}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                MARGIN_T + plot_h + 16.0,
                fmt_tick(t)
            );
        }
    }
    // y ticks
    for t in nice_ticks(y_lo, y_hi) {
        let y = py(t);
        let _ = write!(
            svg,
            "<line x1=\"{MARGIN_L}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n",
            MARGIN_L + plot_w
        );
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    // axis labels
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        height - 10.0,
        plot.x_label
    );
    let _ = write!(
        svg,
        "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        plot.y_label
    );

    for (poly, color) in &plot.polygons {
        let pts: Vec<String> = poly.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = write!(
            svg,
            "<polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n",
            pts.join(" ")
        );
    }

    for s in &plot.series {
        if s.scatter {
            for &(x, y) in &s.points {
                let _ = write!(
                    svg,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.6\"/>\n",
                    px(x),
                    py(y),
                    s.marker_radius,
                    s.color
                );
            }
        } else if !s.points.is_empty() {
            let pts: Vec<String> =
                s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = write!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                pts.join(" "),
                s.color
            );
        }
    }

    // legend
    let mut ly = MARGIN_T + 14.0;
    for s in plot.series.iter().filter(|s| !s.name.is_empty()) {
        let _ = write!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            MARGIN_L + plot_w - 150.0,
            ly - 4.0,
            MARGIN_L + plot_w - 130.0,
            ly - 4.0,
            s.color
        );
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            MARGIN_L + plot_w - 124.0,
            ly,
            s.name
        );
        ly += 14.0;
    }
    if standalone {
        svg.push_str("</svg>\n");
    }
    svg
}

/// Several panels side by side in one self-contained figure.
pub fn render_row(panels: &[Plot], comment: &str) -> String {
    let total_w = WIDTH * panels.len() as f64;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{total_w}\" height=\"{HEIGHT}\" viewBox=\"0 0 {total_w} {HEIGHT}\">\n<!-- {comment} -->\n"
    );
    for (i, p) in panels.iter().enumerate() {
        let _ = write!(svg, "<g transform=\"translate({},0)\">\n", WIDTH * i as f64);
        svg.push_str(&render_sized(p, comment, WIDTH, HEIGHT, false));
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_self_contained() {
        let mut plot = Plot::new("t", "x", "y");
        plot.series.push(Series::line("a", vec![(1.0, 0.0), (10.0, 1.0)], PALETTE[0]));
        plot.log_x = true;
        let svg = render(&plot, "hash=abc");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<image"));
        assert!(!svg.contains("href"));
        assert!(svg.contains("hash=abc"));
    }
}
