//! Minimal self-contained line plots.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub struct Plot {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub xlog: bool,
    pub ylog: bool,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_label(v: f64, log: bool) -> String {
    let x = if log { 10f64.powf(v) } else { v };
    if x != 0.0 && (x.abs() < 1e-2 || x.abs() >= 1e4) {
        format!("{x:.2e}")
    } else {
        format!("{x:.3}")
    }
}

impl Plot {
    pub fn new(title: &str, xlabel: &str, ylabel: &str) -> Self {
        Self {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            xlog: false,
            ylog: false,
            series: Vec::new(),
        }
    }

    pub fn log_x(mut self) -> Self {
        self.xlog = true;
        self
    }

    pub fn log_y(mut self) -> Self {
        self.ylog = true;
        self
    }

    pub fn series(mut self, name: &str, points: Vec<(f64, f64)>) -> Self {
        self.series.push((name.into(), points));
        self
    }

    fn transformed(&self) -> Vec<Vec<(f64, f64)>> {
        let tr = |v: f64, log: bool| {
            if log {
                (v > 0.0).then(|| v.log10())
            } else {
                Some(v)
            }
        };
        self.series
            .iter()
            .map(|(_, pts)| {
                pts.iter()
                    .filter_map(|&(x, y)| Some((tr(x, self.xlog)?, tr(y, self.ylog)?)))
                    .filter(|(x, y)| x.is_finite() && y.is_finite())
                    .collect()
            })
            .collect()
    }

    pub fn render(&self, command_line: &str) -> String {
        let data = self.transformed();
        let all = data.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-12 {
            (x0, x1) = (x0 - 0.5, x1 + 0.5);
        }
        if y1 - y0 < 1e-12 {
            (y0, y1) = (y0 - 0.5, y1 + 0.5);
        }
        let (l, r, t, b) = MARGIN;
        let px = |x: f64| l + (x - x0) / (x1 - x0) * (W - l - r);
        let py = |y: f64| H - b - (y - y0) / (y1 - y0) * (H - t - b);

        let mut s = String::new();
        // XML comments may not contain a double hyphen.
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(s, "<!-- {} -->", command_line.replace("--", "-&#45;"));
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<path d="M{l},{t} V{} H{}" fill="none" stroke="black"/>"#,
            H - b,
            W - r
        );
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let _ = writeln!(
                s,
                r#"<line x1="{0:.1}" y1="{1}" x2="{0:.1}" y2="{2}" stroke="black"/><text x="{0:.1}" y="{3}" text-anchor="middle">{4}</text>"#,
                px(xv),
                H - b,
                H - b + 5.0,
                H - b + 18.0,
                tick_label(xv, self.xlog)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{0}" y1="{1:.1}" x2="{2}" y2="{1:.1}" stroke="black"/><text x="{3}" y="{4:.1}" text-anchor="end">{5}</text>"#,
                l - 5.0,
                py(yv),
                l,
                l - 8.0,
                py(yv) + 4.0,
                tick_label(yv, self.ylog)
            );
        }
        let xl = if self.xlog {
            format!("{} (log)", self.xlabel)
        } else {
            self.xlabel.clone()
        };
        let yl = if self.ylog {
            format!("{} (log)", self.ylabel)
        } else {
            self.ylabel.clone()
        };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (l + W - r) / 2.0,
            H - 10.0,
            escape(&xl)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(14,{}) rotate(-90)" text-anchor="middle">{}</text>"#,
            (t + H - b) / 2.0,
            escape(&yl)
        );
        for (i, ((name, _), pts)) in self.series.iter().zip(&data).enumerate() {
            let color = COLORS[i % COLORS.len()];
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
            if pts.len() <= 64 {
                for &(x, y) in pts {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                        px(x),
                        py(y)
                    );
                }
            }
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                l + 10.0,
                t + 14.0 * (i + 1) as f64,
                escape(name)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write(&self, path: &Path, command_line: &str) -> Result<(), CliError> {
        std::fs::write(path, self.render(command_line)).map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comment_has_no_double_hyphen() {
        let svg = Plot::new("t", "x", "y")
            .series("a", vec![(1.0, 2.0), (2.0, 3.0)])
            .render("quakelab sym --seed 1");
        let comment = svg.lines().nth(1).unwrap();
        assert!(comment.starts_with("<!-- ") && comment.ends_with(" -->"));
        assert!(!comment[4..comment.len() - 3].contains("--"));
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn log_axes_drop_nonpositive_points() {
        let p = Plot::new("t", "x", "y")
            .log_y()
            .series("a", vec![(1.0, 0.0), (2.0, 10.0), (3.0, 100.0)]);
        assert_eq!(p.transformed()[0].len(), 2);
    }
}
