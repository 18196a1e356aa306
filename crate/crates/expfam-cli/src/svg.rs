//! Minimal static SVG 1.1 renderer: log/linear line plots with confidence
//! bands, off-scale divergence glyphs, and heat-map panels. Pure functions of
//! the plotted data, so images are byte-reproducible; all numbers come from
//! the same arrays the CSV writer sees.

#![allow(clippy::write_with_newline)]

use std::fmt::Write;
use std::path::Path;

use crate::error::CliError;

pub const BLUE: &str = "#1f77b4";
pub const ORANGE: &str = "#ff7f0e";
pub const GREEN: &str = "#2ca02c";
pub const RED: &str = "#d62728";
pub const GREY: &str = "#666666";

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 46.0;
const MARGIN_B: f64 = 54.0;

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

/// Shaded region between two point rows (confidence band).
pub struct Band {
    pub color: &'static str,
    pub lower: Vec<(f64, f64)>,
    pub upper: Vec<(f64, f64)>,
}

/// Off-scale glyph at the top edge, marking a +∞ value.
pub struct DivergenceGlyph {
    pub x: f64,
    pub color: &'static str,
}

pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
    pub bands: Vec<Band>,
    pub glyphs: Vec<DivergenceGlyph>,
}

struct Axis {
    min: f64,
    max: f64,
    log: bool,
    offset: f64,
    span: f64,
    flip: bool,
}

impl Axis {
    fn place(&self, v: f64) -> f64 {
        let t = if self.log {
            (v.ln() - self.min.ln()) / (self.max.ln() - self.min.ln())
        } else {
            (v - self.min) / (self.max - self.min)
        };
        let t = t.clamp(0.0, 1.0);
        let t = if self.flip { 1.0 - t } else { t };
        self.offset + t * self.span
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            (lo..=hi)
                .map(|e| 10f64.powi(e))
                .filter(|v| *v >= self.min * 0.999 && *v <= self.max * 1.001)
                .collect()
        } else {
            let step = (self.max - self.min) / 5.0;
            (0..=5).map(|i| self.min + step * i as f64).collect()
        }
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10();
    if (1e-3..1e4).contains(&v.abs()) && (exp - exp.round()).abs() > 1e-9 {
        format!("{v:.3}")
    } else if (1e-3..1e4).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("1e{}", exp.round() as i32)
    }
}

impl LinePlot {
    fn finite_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series
            .iter()
            .flat_map(|s| s.points.iter())
            .chain(self.bands.iter().flat_map(|b| b.lower.iter().chain(b.upper.iter())))
            .copied()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
    }

    pub fn render(&self) -> String {
        let keep = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
        let xs: Vec<f64> = self
            .finite_points()
            .map(|(x, _)| x)
            .filter(|x| keep(*x, self.log_x))
            .collect();
        let ys: Vec<f64> = self
            .finite_points()
            .map(|(_, y)| y)
            .filter(|y| keep(*y, self.log_y))
            .collect();
        let (x_min, x_max) = bounds(&xs, self.log_x);
        let (y_min, y_max) = bounds(&ys, self.log_y);
        let x_axis = Axis {
            min: x_min,
            max: x_max,
            log: self.log_x,
            offset: MARGIN_L,
            span: WIDTH - MARGIN_L - MARGIN_R,
            flip: false,
        };
        let y_axis = Axis {
            min: y_min,
            max: y_max,
            log: self.log_y,
            offset: MARGIN_T,
            span: HEIGHT - MARGIN_T - MARGIN_B,
            flip: true,
        };

        let mut out = String::new();
        write!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        )
        .unwrap();
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        write!(
            out,
            "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            WIDTH / 2.0,
            xml_escape(&self.title)
        )
        .unwrap();

        grid_and_axes(&mut out, &x_axis, &y_axis, &self.x_label, &self.y_label);

        for band in &self.bands {
            let mut pts: Vec<(f64, f64)> = band
                .lower
                .iter()
                .filter(|(x, y)| keep(*x, self.log_x) && keep(*y, self.log_y))
                .map(|&(x, y)| (x_axis.place(x), y_axis.place(y)))
                .collect();
            let upper: Vec<(f64, f64)> = band
                .upper
                .iter()
                .filter(|(x, y)| keep(*x, self.log_x) && keep(*y, self.log_y))
                .map(|&(x, y)| (x_axis.place(x), y_axis.place(y)))
                .collect();
            pts.extend(upper.into_iter().rev());
            if pts.len() >= 3 {
                let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                write!(
                    out,
                    "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.18\" stroke=\"none\"/>\n",
                    path.join(" "),
                    band.color
                )
                .unwrap();
            }
        }

        for s in &self.series {
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|(x, y)| keep(*x, self.log_x) && keep(*y, self.log_y))
                .map(|&(x, y)| format!("{:.2},{:.2}", x_axis.place(x), y_axis.place(y)))
                .collect();
            if pts.len() >= 2 {
                write!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{}/>\n",
                    pts.join(" "),
                    s.color,
                    if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" }
                )
                .unwrap();
            } else if pts.len() == 1 {
                let xy: Vec<&str> = pts[0].split(',').collect();
                write!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                    xy[0], xy[1], s.color
                )
                .unwrap();
            }
        }

        for glyph in &self.glyphs {
            let x = x_axis.place(glyph.x);
            let y = MARGIN_T + 8.0;
            write!(
                out,
                "<path d=\"M {} {} l 6 12 l -12 0 z\" fill=\"{}\"/>\n",
                x,
                y - 8.0,
                glyph.color
            )
            .unwrap();
            write!(
                out,
                "<text x=\"{x}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" fill=\"{}\">inf</text>\n",
                y + 18.0,
                glyph.color
            )
            .unwrap();
        }

        legend(&mut out, &self.series);
        out.push_str("</svg>\n");
        out
    }
}

fn bounds(values: &[f64], log: bool) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(*v);
        max = max.max(*v);
    }
    if !min.is_finite() || !max.is_finite() {
        return if log { (0.1, 10.0) } else { (0.0, 1.0) };
    }
    if log {
        (min / 1.3, max * 1.3)
    } else {
        let pad = 0.05 * (max - min).max(1e-12);
        (min - pad, max + pad)
    }
}

fn grid_and_axes(out: &mut String, x: &Axis, y: &Axis, x_label: &str, y_label: &str) {
    let (x0, x1) = (x.offset, x.offset + x.span);
    let (y0, y1) = (y.offset, y.offset + y.span);
    for tick in x.ticks() {
        let px = x.place(tick);
        write!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{y1}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        )
        .unwrap();
        write!(
            out,
            "<text x=\"{px:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            y1 + 16.0,
            tick_label(tick)
        )
        .unwrap();
    }
    for tick in y.ticks() {
        let py = y.place(tick);
        write!(
            out,
            "<line x1=\"{x0}\" y1=\"{py:.2}\" x2=\"{x1}\" y2=\"{py:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        )
        .unwrap();
        write!(
            out,
            "<text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            x0 - 6.0,
            py + 4.0,
            tick_label(tick)
        )
        .unwrap();
    }
    write!(
        out,
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
        x.span, y.span
    )
    .unwrap();
    write!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        x0 + x.span / 2.0,
        HEIGHT - 14.0,
        xml_escape(x_label)
    )
    .unwrap();
    write!(
        out,
        "<text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        y0 + y.span / 2.0,
        y0 + y.span / 2.0,
        xml_escape(y_label)
    )
    .unwrap();
}

fn legend(out: &mut String, series: &[Series]) {
    let x = WIDTH - MARGIN_R - 210.0;
    let mut y = MARGIN_T + 14.0;
    for s in series {
        write!(
            out,
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"{}/>\n",
            y - 4.0,
            x + 26.0,
            y - 4.0,
            s.color,
            if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" }
        )
        .unwrap();
        write!(
            out,
            "<text x=\"{}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            x + 32.0,
            xml_escape(&s.label)
        )
        .unwrap();
        y += 17.0;
    }
}

/// One heat-map panel per entry: cells on log-log axes, a reference curve,
/// and per-column minimum markers.
pub struct HeatPanel {
    pub title: String,
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// values[i][j] at (x_grid[i], y_grid[j]).
    pub values: Vec<Vec<f64>>,
    /// (x, y) polyline drawn on top.
    pub reference: Vec<(f64, f64)>,
    /// per-column minima (x, y).
    pub minima: Vec<(f64, f64)>,
}

pub fn render_heat_panels(title: &str, x_label: &str, y_label: &str, panels: &[HeatPanel]) -> String {
    let panel_w = 340.0;
    let panel_h = 360.0;
    let gap = 30.0;
    let total_w = 70.0 + panels.len() as f64 * (panel_w + gap);
    let total_h = panel_h + 130.0;

    let mut out = String::new();
    write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{total_w}\" height=\"{total_h}\" viewBox=\"0 0 {total_w} {total_h}\">\n"
    )
    .unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    write!(
        out,
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        total_w / 2.0,
        xml_escape(title)
    )
    .unwrap();

    // Shared color scale over the log of the values.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in panels {
        for v in p.values.iter().flatten() {
            if v.is_finite() && *v > 0.0 {
                lo = lo.min(v.ln());
                hi = hi.max(v.ln());
            }
        }
    }
    if !lo.is_finite() || hi <= lo {
        lo = 0.0;
        hi = 1.0;
    }

    for (pi, p) in panels.iter().enumerate() {
        let ox = 60.0 + pi as f64 * (panel_w + gap);
        let oy = 52.0;
        let x_axis = Axis {
            min: p.x_grid[0],
            max: *p.x_grid.last().unwrap(),
            log: true,
            offset: ox,
            span: panel_w,
            flip: false,
        };
        let y_axis = Axis {
            min: p.y_grid[0],
            max: *p.y_grid.last().unwrap(),
            log: true,
            offset: oy,
            span: panel_h,
            flip: true,
        };
        for (i, &gx) in p.x_grid.iter().enumerate() {
            // Cell edges at the geometric midpoints between grid nodes.
            let x_lo = edge(&p.x_grid, i, false);
            let x_hi = edge(&p.x_grid, i, true);
            for (j, &gy) in p.y_grid.iter().enumerate() {
                let _ = (gx, gy);
                let y_lo = edge(&p.y_grid, j, false);
                let y_hi = edge(&p.y_grid, j, true);
                let v = p.values[i][j];
                let t = if v.is_finite() && v > 0.0 {
                    ((v.ln() - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                let (px0, px1) = (x_axis.place(x_lo), x_axis.place(x_hi));
                let (py0, py1) = (y_axis.place(y_hi), y_axis.place(y_lo));
                write!(
                    out,
                    "<rect x=\"{px0:.2}\" y=\"{py0:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
                    px1 - px0,
                    py1 - py0,
                    viridis(t)
                )
                .unwrap();
            }
        }
        let ref_pts: Vec<String> = p
            .reference
            .iter()
            .filter(|(x, y)| *x >= x_axis.min && *x <= x_axis.max && *y >= y_axis.min && *y <= y_axis.max)
            .map(|&(x, y)| format!("{:.2},{:.2}", x_axis.place(x), y_axis.place(y)))
            .collect();
        if ref_pts.len() >= 2 {
            write!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"white\" stroke-width=\"2\" stroke-dasharray=\"5 4\"/>\n",
                ref_pts.join(" ")
            )
            .unwrap();
        }
        for &(x, y) in &p.minima {
            write!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"none\" stroke=\"#ff3333\" stroke-width=\"1.2\"/>\n",
                x_axis.place(x),
                y_axis.place(y)
            )
            .unwrap();
        }
        write!(
            out,
            "<rect x=\"{ox}\" y=\"{oy}\" width=\"{panel_w}\" height=\"{panel_h}\" fill=\"none\" stroke=\"#333333\"/>\n"
        )
        .unwrap();
        write!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            ox + panel_w / 2.0,
            oy - 8.0,
            xml_escape(&p.title)
        )
        .unwrap();
        for tick in x_axis.ticks() {
            let px = x_axis.place(tick);
            write!(
                out,
                "<text x=\"{px:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                oy + panel_h + 14.0,
                tick_label(tick)
            )
            .unwrap();
        }
        if pi == 0 {
            for tick in y_axis.ticks() {
                let py = y_axis.place(tick);
                write!(
                    out,
                    "<text x=\"{}\" y=\"{py:.2}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{}</text>\n",
                    ox - 6.0,
                    tick_label(tick)
                )
                .unwrap();
            }
        }
        write!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            ox + panel_w / 2.0,
            oy + panel_h + 34.0,
            xml_escape(x_label)
        )
        .unwrap();
    }
    write!(
        out,
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        52.0 + panel_h / 2.0,
        52.0 + panel_h / 2.0,
        xml_escape(y_label)
    )
    .unwrap();
    write!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">dashed: reference prior scale; circles: per-column minimum</text>\n",
        60.0,
        total_h - 12.0
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

fn edge(grid: &[f64], i: usize, upper: bool) -> f64 {
    if upper {
        if i + 1 < grid.len() {
            (grid[i] * grid[i + 1]).sqrt()
        } else {
            grid[i] * (grid[i] / (grid[i - 1] * grid[i]).sqrt())
        }
    } else if i > 0 {
        (grid[i - 1] * grid[i]).sqrt()
    } else {
        grid[i] / ((grid[i] * grid[i + 1]).sqrt() / grid[i])
    }
}

const VIRIDIS: [(f64, f64, f64); 9] = [
    (0.267, 0.005, 0.329),
    (0.281, 0.155, 0.469),
    (0.245, 0.288, 0.538),
    (0.191, 0.407, 0.556),
    (0.147, 0.511, 0.557),
    (0.120, 0.618, 0.536),
    (0.208, 0.719, 0.473),
    (0.478, 0.821, 0.32),
    (0.993, 0.906, 0.144),
];

fn viridis(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let i = (t.floor() as usize).min(VIRIDIS.len() - 2);
    let f = t - i as f64;
    let (r0, g0, b0) = VIRIDIS[i];
    let (r1, g1, b1) = VIRIDIS[i + 1];
    let ch = |a: f64, b: f64| ((a + (b - a) * f) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(r0, r1), ch(g0, g1), ch(b0, b1))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn write_svg(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::io(path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}
