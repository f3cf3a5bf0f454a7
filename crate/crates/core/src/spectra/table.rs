use std::fmt::Write as _;

use serde::Serialize;

pub const CSV_HEADER: &str = "eta,level_index,delta_e_over_omega,cutoff,residual,converged";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub eta: f64,
    /// `(E_j − E_0)/ω_ph`, ascending, starting at 0.
    pub differences: Vec<f64>,
    pub cutoff: usize,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub n_levels: usize,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn etas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.eta).collect()
    }

    /// Level `j` across the sweep.
    pub fn level(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.differences[j]).collect()
    }

    /// One line per `(η, j)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            for (j, d) in row.differences.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{j},{},{},{},{}",
                    format_sig(row.eta),
                    format_sig(*d),
                    row.cutoff,
                    format_sig(row.residual),
                    row.converged
                );
            }
        }
        out
    }

    /// Polylines of every level against η, with labelled axes.
    pub fn to_svg(&self) -> String {
        let (width, height, margin) = (640.0, 480.0, 60.0);
        let etas = self.etas();
        let (x_min, x_max) = bounds(etas.iter().copied());
        let (_, y_max) = bounds(self.rows.iter().flat_map(|r| r.differences.iter().copied()));
        let (y_min, y_max) = (0.0, if y_max > 0.0 { y_max } else { 1.0 });
        let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
        let sx = |x: f64| margin + (x - x_min) / x_span * (width - 2.0 * margin);
        let sy = |y: f64| height - margin - (y - y_min) / (y_max - y_min) * (height - 2.0 * margin);

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let (x0, x1, y0, y1) = (sx(x_min), sx(x_min + x_span), sy(y_min), sy(y_max));
        let _ = writeln!(svg, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#);
        let _ = writeln!(svg, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#);
        for (v, x) in [(x_min, x0), (x_min + x_span, x1)] {
            let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#, y0 + 16.0, format_tick(v));
        }
        for (v, y) in [(y_min, y0), (y_max, y1)] {
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#, x0 - 6.0, y + 4.0, format_tick(v));
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">η</text>"#,
            0.5 * (x0 + x1),
            height - 15.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.2})">(E_j − E_0)/ω_ph</text>"#,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1)
        );
        for j in 1..self.n_levels {
            let points: Vec<String> = self
                .rows
                .iter()
                .filter_map(|r| r.differences.get(j).map(|d| format!("{:.2},{:.2}", sx(r.eta), sy(*d))))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                PALETTE[(j - 1) % PALETTE.len()],
                points.join(" ")
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn format_tick(v: f64) -> String {
    format!("{}", (v * 1000.0).round() / 1000.0)
}

/// Twelve significant digits: plain decimals in `[1e-4, 1e12)`, scientific otherwise.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mag = x.abs();
    if !(1e-4..1e12).contains(&mag) {
        return format!("{x:.11e}");
    }
    let exponent = mag.log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new digit, e.g. 9.99…→10.0
    if s.trim_start_matches('-').split('.').next().map_or(0, |d| d.trim_start_matches('0').len()) as i32 > exponent + 1 && decimals > 0 {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}
