//! Line plots as standalone SVG documents.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 85.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub dash: Option<&'static str>,
}

pub struct Marker {
    pub label: String,
    pub at: (f64, f64),
    pub color: &'static str,
    pub square: bool,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
    /// Embedded verbatim as an XML comment.
    pub comment: String,
}

fn bounds(plot: &Plot) -> (f64, f64, f64, f64) {
    let pts = plot
        .series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .chain(plot.markers.iter().map(|m| m.at))
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (px, py) = (0.03 * (x1 - x0), 0.05 * (y1 - y0));
    (x0 - px, x1 + px, y0 - py, y1 + py)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(plot: &Plot) -> String {
    let (x0, x1, y0, y1) = bounds(plot);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<!--\n{}\n-->", plot.comment.replace("--", "- -"));
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(&plot.title)
    );
    // axes and ticks
    let _ = writeln!(
        s,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        l = LEFT,
        t = TOP,
        b = H - BOTTOM,
        r = W - RIGHT
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b2}" stroke="black"/><text x="{x:.2}" y="{ty}" text-anchor="middle">{xv:.4}</text>"#,
            x = sx(xv),
            b = H - BOTTOM,
            b2 = H - BOTTOM + 5.0,
            ty = H - BOTTOM + 18.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{l2}" y1="{y:.2}" x2="{l}" y2="{y:.2}" stroke="black"/><text x="{tx}" y="{y:.2}" text-anchor="end" dominant-baseline="middle">{yv:.4}</text>"#,
            l = LEFT,
            l2 = LEFT - 5.0,
            y = sy(yv),
            tx = LEFT - 8.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{y}" text-anchor="middle" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(&plot.y_label),
        y = (TOP + H - BOTTOM) / 2.0
    );
    for (i, series) in plot.series.iter().enumerate() {
        let pts: Vec<String> = series
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = series
            .dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"{dash}/>"#,
            pts.join(" "),
            series.color
        );
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{a}" y1="{ly}" x2="{b}" y2="{ly}" stroke="{c}" stroke-width="1.8"{dash}/><text x="{t}" y="{ly}" dominant-baseline="middle">{}</text>"#,
            escape(&series.label),
            a = W - RIGHT - 170.0,
            b = W - RIGHT - 145.0,
            t = W - RIGHT - 140.0,
            c = series.color
        );
    }
    for m in &plot.markers {
        let (x, y) = (sx(m.at.0), sy(m.at.1));
        if m.square {
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="9" height="9" fill="{}"><title>{}</title></rect>"#,
                x - 4.5,
                y - 4.5,
                m.color,
                escape(&m.label)
            );
        } else {
            let _ = writeln!(
                s,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{}"><title>{}</title></circle>"#,
                m.color,
                escape(&m.label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_series_and_markers() {
        let plot = Plot {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![Series {
                label: "line".into(),
                points: vec![(0.0, 0.0), (1.0, 2.0), (f64::NAN, 1.0)],
                color: "blue",
                dash: Some("4 2"),
            }],
            markers: vec![Marker {
                label: "m".into(),
                at: (0.5, 1.0),
                color: "red",
                square: true,
            }],
            comment: "config -- here".into(),
        };
        let svg = render(&plot);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<rect x="));
        assert!(!svg.contains("config -- here"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
