//! Minimal self-contained SVG line plots of spectrum columns.
//!
//! No charting dependency: the writer emits a fixed-size SVG 1.1 document
//! with linear axes, tick labels, one polyline per requested column and a
//! legend. Identical inputs produce byte-identical output.

use thiserror::Error;

use crate::spectra::{Spectrum, SpectrumRow};

/// Plottable columns of a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotColumn {
    ChiRe,
    ChiIm,
    Phase,
    Kappa,
    Transmission,
}

impl PlotColumn {
    pub fn label(&self) -> &'static str {
        match self {
            PlotColumn::ChiRe => "chi_re",
            PlotColumn::ChiIm => "chi_im",
            PlotColumn::Phase => "phase",
            PlotColumn::Kappa => "kappa",
            PlotColumn::Transmission => "transmission",
        }
    }

    fn extract(&self, r: &SpectrumRow) -> f64 {
        match self {
            PlotColumn::ChiRe => r.chi_re,
            PlotColumn::ChiIm => r.chi_im,
            PlotColumn::Phase => r.phase,
            PlotColumn::Kappa => r.kappa,
            PlotColumn::Transmission => r.transmission,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum PlotError {
    #[error("cannot plot an empty spectrum")]
    EmptySpectrum,
    #[error("no columns requested")]
    NoColumns,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 48.0;

const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Round-number tick positions covering [min, max], about `target` of them.
fn nice_ticks(min: f64, max: f64, target: usize) -> Vec<f64> {
    let span = max - min;
    if span <= 0.0 || !span.is_finite() {
        return vec![min];
    }
    let raw = span / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let normalized = raw / magnitude;
    let step = magnitude
        * if normalized < 1.5 {
            1.0
        } else if normalized < 3.5 {
            2.0
        } else if normalized < 7.5 {
            5.0
        } else {
            10.0
        };
    let mut ticks = Vec::new();
    let mut k = (min / step).ceil();
    // snap -0 to 0 so labels stay clean
    while k * step <= max + 1e-9 * span {
        let v = k * step;
        ticks.push(if v == 0.0 { 0.0 } else { v });
        k += 1.0;
    }
    ticks
}

fn fmt_tick(v: f64) -> String {
    // shortest round-trip form is already compact for nice-number ticks
    format!("{v}")
}

/// Render the requested columns against detuning. With `normalize_peak` the
/// series are jointly scaled so the maximum plotted ordinate is exactly 1.
pub fn render_spectrum_svg(
    s: &Spectrum,
    columns: &[PlotColumn],
    normalize_peak: bool,
) -> Result<String, PlotError> {
    if s.rows.is_empty() {
        return Err(PlotError::EmptySpectrum);
    }
    if columns.is_empty() {
        return Err(PlotError::NoColumns);
    }

    let mut series: Vec<Vec<f64>> = columns
        .iter()
        .map(|col| s.rows.iter().map(|r| col.extract(r)).collect())
        .collect();
    if normalize_peak {
        let peak = series
            .iter()
            .flatten()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if peak > 0.0 {
            for ys in &mut series {
                for y in ys.iter_mut() {
                    *y /= peak;
                }
            }
        }
    }

    let xs: Vec<f64> = s.rows.iter().map(|r| r.delta_p).collect();
    let x_min = xs[0];
    let x_max = xs[xs.len() - 1];
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for ys in &series {
        for &y in ys {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let y_pad = 0.05 * (y_max - y_min);
    let (y_lo, y_hi) = (y_min - y_pad, y_max + y_pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
            MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h,
        )
    };

    let mut svg = String::with_capacity(1 << 16);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes frame
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));

    for tick in nice_ticks(x_min, x_max, 8) {
        let (px, _) = to_px(tick, y_lo);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 16.0,
            fmt_tick(tick)
        ));
    }
    for tick in nice_ticks(y_lo, y_hi, 6) {
        let (_, py) = to_px(x_min, tick);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 6.0,
            py + 4.0,
            fmt_tick(tick)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">delta_p</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    ));

    for (idx, (col, ys)) in columns.iter().zip(&series).enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let mut points = String::with_capacity(xs.len() * 16);
        for (x, y) in xs.iter().zip(ys) {
            let (px, py) = to_px(*x, *y);
            points.push_str(&format!("{px:.2},{py:.2} "));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
            points.trim_end()
        ));
        let ly = MARGIN_TOP + 16.0 + idx as f64 * 16.0;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            WIDTH - MARGIN_RIGHT - 120.0,
            WIDTH - MARGIN_RIGHT - 96.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            WIDTH - MARGIN_RIGHT - 90.0,
            ly + 4.0,
            col.label()
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
