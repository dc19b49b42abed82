//! Hand-rolled SVG 1.1 line charts.
//!
//! Convenience renderings of the CSV series: fixed canvas, fixed palette,
//! no chart-level statistics. Undefined samples break the line into
//! separate segments.

/// One plottable series; `None` values are gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_labels: Vec<String>,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 58.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick label without trailing zeros.
fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() || trimmed == "-" {
        "0".to_owned()
    } else {
        trimmed.to_owned()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(chart: &Chart) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let n = chart.x_labels.len();

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        xml_escape(&chart.title)
    ));

    let finite: Vec<f64> = chart
        .series
        .iter()
        .flat_map(|s| s.values.iter().flatten().copied())
        .filter(|v| v.is_finite())
        .collect();

    if n == 0 || finite.is_empty() {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">no data</text>\n",
            fmt_coord(MARGIN_LEFT + plot_w / 2.0),
            fmt_coord(MARGIN_TOP + plot_h / 2.0)
        ));
        svg.push_str("</svg>\n");
        return svg;
    }

    let mut lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = (hi - lo) * 0.05;
    let (lo, hi) = (lo - pad, hi + pad);
    let range = hi - lo;

    let x_at = |i: usize| {
        if n == 1 {
            MARGIN_LEFT + plot_w / 2.0
        } else {
            MARGIN_LEFT + plot_w * i as f64 / (n - 1) as f64
        }
    };
    let y_at = |v: f64| MARGIN_TOP + plot_h * (1.0 - (v - lo) / range);

    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt_coord(MARGIN_LEFT),
        fmt_coord(MARGIN_TOP),
        fmt_coord(MARGIN_LEFT),
        fmt_coord(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt_coord(MARGIN_LEFT),
        fmt_coord(MARGIN_TOP + plot_h),
        fmt_coord(MARGIN_LEFT + plot_w),
        fmt_coord(MARGIN_TOP + plot_h)
    ));

    // Y ticks with faint grid lines.
    for i in 0..=4 {
        let v = lo + range * i as f64 / 4.0;
        let y = y_at(v);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
            fmt_coord(MARGIN_LEFT),
            fmt_coord(y),
            fmt_coord(MARGIN_LEFT + plot_w),
            fmt_coord(y)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            fmt_coord(MARGIN_LEFT - 6.0),
            fmt_coord(y + 4.0),
            fmt_tick(v)
        ));
    }

    // X ticks, thinned to stay readable.
    let step = n.div_ceil(10).max(1);
    for i in (0..n).step_by(step) {
        let x = x_at(i);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt_coord(x),
            fmt_coord(MARGIN_TOP + plot_h),
            fmt_coord(x),
            fmt_coord(MARGIN_TOP + plot_h + 4.0)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            fmt_coord(x),
            fmt_coord(MARGIN_TOP + plot_h + 18.0),
            xml_escape(&chart.x_labels[i])
        ));
    }

    // Series: polylines over runs of defined values, dots for isolated points.
    for (si, series) in chart.series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut run: Vec<(f64, f64)> = Vec::new();
        let flush = |run: &mut Vec<(f64, f64)>, svg: &mut String| {
            match run.len() {
                0 => {}
                1 => svg.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{color}\"/>\n",
                    fmt_coord(run[0].0),
                    fmt_coord(run[0].1)
                )),
                _ => {
                    let points = run
                        .iter()
                        .map(|(x, y)| format!("{},{}", fmt_coord(*x), fmt_coord(*y)))
                        .collect::<Vec<_>>()
                        .join(" ");
                    svg.push_str(&format!(
                        "  <polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
                    ));
                }
            }
            run.clear();
        };
        for (i, value) in series.values.iter().enumerate() {
            match value {
                Some(v) if v.is_finite() => run.push((x_at(i), y_at(*v))),
                _ => flush(&mut run, &mut svg),
            }
        }
        flush(&mut run, &mut svg);

        // Legend entry.
        let ly = MARGIN_TOP + 14.0 * si as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            fmt_coord(lx),
            fmt_coord(ly),
            fmt_coord(lx + 18.0),
            fmt_coord(ly)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            fmt_coord(lx + 24.0),
            fmt_coord(ly + 4.0),
            xml_escape(&series.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}
