//! Minimal static SVG line/scatter plots, one file per figure panel.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Polyline when false, markers only when true.
    pub scatter: bool,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let raw = (hi - lo) / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    } * mag;
    let first = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut t = first;
    while t <= hi + 1e-9 * step {
        ticks.push(t);
        t += step;
    }
    ticks
}

fn fmt(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if !(1e-3..1e4).contains(&a) {
        format!("{x:.1e}")
    } else {
        let s = format!("{x:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

impl Plot {
    pub fn render(&self) -> String {
        let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for &(x, y) in &s.points {
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
                y_lo = y_lo.min(y);
                y_hi = y_hi.max(y);
            }
        }
        if !x_lo.is_finite() {
            x_lo = 0.0;
            x_hi = 1.0;
            y_lo = 0.0;
            y_hi = 1.0;
        }
        if x_hi == x_lo {
            x_hi = x_lo + 1.0;
        }
        if y_hi == y_lo {
            y_hi = y_lo + 1.0;
        }
        let pad = 0.04 * (y_hi - y_lo);
        y_lo -= pad;
        y_hi += pad;

        let px = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = |y: f64| HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
        ));
        out.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            WIDTH / 2.0,
            xml_escape(&self.title)
        ));

        // Axes frame.
        out.push_str(&format!(
            "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" fill=\"none\" \
             stroke=\"black\"/>\n",
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        ));
        for t in nice_ticks(x_lo, x_hi, 6) {
            let x = px(t);
            out.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{0:.2}\" x2=\"{x:.2}\" y2=\"{1:.2}\" stroke=\"black\"/>\n",
                HEIGHT - MARGIN_B,
                HEIGHT - MARGIN_B + 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
                HEIGHT - MARGIN_B + 20.0,
                fmt(t)
            ));
        }
        for t in nice_ticks(y_lo, y_hi, 6) {
            let y = py(t);
            out.push_str(&format!(
                "<line x1=\"{0:.2}\" y1=\"{y:.2}\" x2=\"{1:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
                MARGIN_L - 5.0,
                MARGIN_L
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\">{}</text>\n",
                MARGIN_L - 9.0,
                y + 4.0,
                fmt(t)
            ));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
            WIDTH / 2.0,
            HEIGHT - 14.0,
            xml_escape(&self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" \
             transform=\"rotate(-90 18 {0})\">{1}</text>\n",
            HEIGHT / 2.0,
            xml_escape(&self.y_label)
        ));

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if s.scatter {
                for &(x, y) in &s.points {
                    out.push_str(&format!(
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.2\" fill=\"{color}\"/>\n",
                        px(x),
                        py(y)
                    ));
                }
            } else if s.points.len() > 1 {
                let pts: Vec<String> = s
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                    .collect();
                out.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>\n",
                    pts.join(" ")
                ));
            }
            // Legend entry.
            let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
            let lx = WIDTH - MARGIN_R - 150.0;
            out.push_str(&format!(
                "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" \
                 stroke-width=\"2.5\"/>\n",
                lx + 22.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
                lx + 28.0,
                ly + 4.0,
                xml_escape(&s.label)
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg() {
        let plot = Plot {
            title: "populations".into(),
            x_label: "t".into(),
            y_label: "intensity".into(),
            series: vec![
                Series {
                    label: "|a0|^2".into(),
                    points: (0..50).map(|k| (k as f64 * 0.1, (k as f64 * 0.1).sin())).collect(),
                    scatter: false,
                },
                Series { label: "pts".into(), points: vec![(0.0, 0.5), (1.0, 0.7)], scatter: true },
            ],
        };
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("circle"));
        assert_eq!(svg.matches("<svg").count(), 1);
    }

    #[test]
    fn tick_generation_covers_range() {
        let ticks = nice_ticks(-15.0, -10.0, 6);
        assert!(ticks.len() >= 4);
        assert!(ticks.iter().all(|t| *t >= -15.0 - 1e-9 && *t <= -10.0 + 1e-9));
    }
}
