//! Minimal self-contained SVG plots: line charts and the strategy/z orbit.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Points drawn per series at most; longer series are thinned evenly.
pub const MAX_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn around(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for (x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            return Frame {
                x0: 0.0,
                x1: 1.0,
                y0: 0.0,
                y1: 1.0,
            };
        }
        if f.x1 - f.x0 < 1e-12 {
            f.x0 -= 0.5;
            f.x1 += 0.5;
        }
        if f.y1 - f.y0 < 1e-12 {
            f.y0 -= 0.5;
            f.y1 += 0.5;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Every k-th point, plus the last one, so that at most `limit` remain.
pub fn thin<T: Copy>(points: &[T], limit: usize) -> Vec<T> {
    if points.len() <= limit || limit < 2 {
        return points.to_vec();
    }
    let stride = points.len().div_ceil(limit - 1);
    let mut v: Vec<T> = points.iter().step_by(stride).copied().collect();
    if !(points.len() - 1).is_multiple_of(stride) {
        v.push(points[points.len() - 1]);
    }
    v
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        r - l,
        b - t
    );
    for x in ticks(f.x0, f.x1) {
        let px = f.px(x);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            b + 5.0,
            b + 18.0,
            label(x)
        );
    }
    for y in ticks(f.y0, f.y1) {
        let py = f.py(y);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{l}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            l - 5.0,
            l - 8.0,
            py + 4.0,
            label(y)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (l + r) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(y_label)
    );
}

/// A single polyline of `(x, y)` points.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let pts = thin(&pts, MAX_POINTS);
    let f = Frame::around(pts.iter().copied());
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, x_label, y_label);
    let mut d = String::new();
    for (x, y) in &pts {
        let _ = write!(d, "{:.2},{:.2} ", f.px(*x), f.py(*y));
    }
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#1f4e9c" stroke-width="1.2"/>"##,
        d.trim_end()
    );
    out.push_str("</svg>\n");
    out
}

/// Strategies as squares and z-points as dots, over the unit square with
/// dashed guides at 0 and 1 on both axes.
pub fn orbit_plot(title: &str, strategies: &[(f64, f64)], z: &[(f64, f64)]) -> String {
    let strategies = thin(strategies, MAX_POINTS);
    let z = thin(z, MAX_POINTS);
    let corners = [(-0.1, -0.1), (1.1, 1.1)];
    let f = Frame::around(strategies.iter().chain(&z).chain(&corners).copied());
    let mut out = String::new();
    header(&mut out, title);
    axes(
        &mut out,
        &f,
        "player 1, first strategy",
        "player 2, first strategy",
    );
    for v in [0.0, 1.0] {
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{}" x2="{:.2}" y2="{}" stroke="#888" stroke-dasharray="5,4"/>"##,
            f.px(v),
            TOP,
            f.px(v),
            HEIGHT - BOTTOM
        );
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{:.2}" x2="{}" y2="{:.2}" stroke="#888" stroke-dasharray="5,4"/>"##,
            LEFT,
            f.py(v),
            WIDTH - RIGHT,
            f.py(v)
        );
    }
    for (x, y) in &z {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="#c0392b"/>"##,
            f.px(*x),
            f.py(*y)
        );
    }
    for (x, y) in &strategies {
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="5" height="5" fill="none" stroke="#1f4e9c"/>"##,
            f.px(*x) - 2.5,
            f.py(*y) - 2.5
        );
    }
    let lx = WIDTH - RIGHT - 150.0;
    let _ = writeln!(
        out,
        r##"<rect x="{lx}" y="{}" width="5" height="5" fill="none" stroke="#1f4e9c"/><text x="{}" y="{}">strategy x</text>"##,
        TOP + 8.0,
        lx + 12.0,
        TOP + 14.0
    );
    let _ = writeln!(
        out,
        r##"<circle cx="{}" cy="{}" r="2" fill="#c0392b"/><text x="{}" y="{}">payoff vector z</text>"##,
        lx + 2.5,
        TOP + 26.0,
        lx + 12.0,
        TOP + 30.0
    );
    out.push_str("</svg>\n");
    out
}
