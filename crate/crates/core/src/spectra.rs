//! Detuning sweeps of the susceptibility/transmission pipeline, peak
//! detection and FWHM extraction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atom::{AtomParams, ParamError};
use crate::cavity::{
    linewidth_ratio, round_trip_absorption, round_trip_phase, transmission, CavityError,
    CavityParams,
};
use crate::susceptibility::{
    chi_analytic, dispersion_slope, transparency_windows, SusceptibilityError, SusceptibilityModel,
    DEFAULT_SLOPE_STEP,
};

/// Half-width of the densified sub-grid added around each transparency window.
pub const WINDOW_REFINE_HALF_WIDTH: f64 = 0.05;
/// Step bound inside the densified sub-grids.
pub const WINDOW_REFINE_STEP: f64 = 2e-4;

/// Detuning grid for sweeps. With `refine_windows` on, each transparency
/// window gets a dense sub-grid (step ≤ 2e-4 within ±0.05) merged into the
/// base grid — the ultranarrow peaks need on the order of ten samples across.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub refine_windows: bool,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            start: -4.0,
            stop: 4.0,
            points: 801,
            refine_windows: true,
        }
    }
}

/// Endpoint-weighted linspace: x_i = (lo·(n−1−i) + hi·i)/(n−1). This form is
/// exactly antisymmetric under (lo, hi) → (−hi, −lo), which the mirrored-
/// spectrum invariant relies on.
fn weighted_point(lo: f64, hi: f64, i: usize, n_minus_1: usize) -> f64 {
    (lo * ((n_minus_1 - i) as f64) + hi * (i as f64)) / (n_minus_1 as f64)
}

impl ScanGrid {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(ParamError {
                field: "start",
                message: "start and stop must be finite".to_string(),
            });
        }
        if self.start >= self.stop {
            return Err(ParamError {
                field: "start",
                message: format!(
                    "must be < stop (got start = {}, stop = {})",
                    self.start, self.stop
                ),
            });
        }
        if self.points < 2 {
            return Err(ParamError {
                field: "points",
                message: format!("must be ≥ 2 (got {})", self.points),
            });
        }
        Ok(())
    }

    /// The merged, strictly increasing, deduplicated abscissae.
    pub fn abscissae(&self, windows: &[f64]) -> Vec<f64> {
        let mut xs = Vec::with_capacity(self.points + windows.len() * 512);
        let n1 = self.points - 1;
        for i in 0..self.points {
            xs.push(weighted_point(self.start, self.stop, i, n1));
        }
        if self.refine_windows {
            for &w in windows {
                let lo = (w - WINDOW_REFINE_HALF_WIDTH).max(self.start);
                let hi = (w + WINDOW_REFINE_HALF_WIDTH).min(self.stop);
                if hi <= lo {
                    continue;
                }
                let m = ((hi - lo) / WINDOW_REFINE_STEP).ceil() as usize;
                for j in 0..=m {
                    xs.push(weighted_point(lo, hi, j, m));
                }
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        xs
    }
}

/// One sampled point of the response pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub delta_p: f64,
    pub chi_re: f64,
    pub chi_im: f64,
    pub phase: f64,
    pub kappa: f64,
    pub transmission: f64,
}

/// Sampled response curves, ordered by strictly increasing detuning.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub rows: Vec<SpectrumRow>,
}

/// A detected transmission (or response) peak. The half-maximum crossings and
/// FWHM are present only when both crossings lie inside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    pub fwhm: Option<f64>,
    pub left_half: Option<f64>,
    pub right_half: Option<f64>,
}

/// Measured and formula linewidth comparison between a single-dark and a
/// double-dark configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinewidthReport {
    pub fwhm_s: f64,
    pub fwhm_d: f64,
    pub measured_ratio: f64,
    pub eq4_ratio: f64,
}

/// Errors from sweeping and peak analysis.
#[derive(Debug, Clone, Error)]
pub enum SpectraError {
    #[error(transparent)]
    NonFinite(#[from] SusceptibilityError),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    /// A peak spans too few samples above half maximum for a reliable FWHM.
    #[error("peak near Δp = {position:.6} spans only {samples} samples above half maximum (need ≥ {required}); refine the grid to step ≤ {suggested_step:.3e}")]
    TooCoarse {
        position: f64,
        samples: usize,
        required: usize,
        suggested_step: f64,
    },
    /// A configuration produced no FWHM-measurable peak.
    #[error("no FWHM-measurable peak found for the {configuration} configuration")]
    MissingPeak { configuration: String },
}

/// Sweep the per-point pipeline χ → phase/absorption → transmission over the
/// grid. Rows come out ordered by detuning, independent of evaluation order.
pub fn sweep(
    grid: &ScanGrid,
    p: &AtomParams,
    m: &SusceptibilityModel,
    c: &CavityParams,
) -> Result<Spectrum, SpectraError> {
    let xs = grid.abscissae(&transparency_windows(p));
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let chi = chi_analytic(x, p, m);
        if !chi.re.is_finite() || !chi.im.is_finite() {
            return Err(SusceptibilityError::NonFinite { delta_p: x }.into());
        }
        let phase = round_trip_phase(x, chi.re, c);
        let kappa = round_trip_absorption(chi.im, c)?;
        let s = transmission(phase, kappa, c);
        rows.push(SpectrumRow {
            delta_p: x,
            chi_re: chi.re,
            chi_im: chi.im,
            phase,
            kappa,
            transmission: s,
        });
    }
    Ok(Spectrum { rows })
}

const MIN_SAMPLES_ABOVE_HALF: usize = 5;

/// Vertex of the parabola through three points; falls back to the middle
/// sample when the points are collinear.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let c2 = (d2 - d1) / (x[2] - x[0]);
    if c2 >= 0.0 {
        return (x[1], y[1]);
    }
    let xv = 0.5 * (x[0] + x[1]) - d1 / (2.0 * c2);
    let yv = y[0] + d1 * (xv - x[0]) + c2 * (xv - x[0]) * (xv - x[1]);
    (xv, yv)
}

fn interpolate_crossing(x0: f64, y0: f64, x1: f64, y1: f64, level: f64) -> f64 {
    x0 + (level - y0) / (y1 - y0) * (x1 - x0)
}

/// Find local maxima of the transmission column above
/// `min_height_fraction`·(global maximum), refine their positions with a
/// three-point parabola, and attach the FWHM from linearly interpolated
/// half-maximum crossings where both crossings lie inside the grid.
///
/// Fails with [`SpectraError::TooCoarse`] when a measurable peak has fewer
/// than 5 samples above its half maximum.
pub fn find_peaks(s: &Spectrum, min_height_fraction: f64) -> Result<Vec<Peak>, SpectraError> {
    assert!(
        min_height_fraction > 0.0 && min_height_fraction < 1.0,
        "min_height_fraction must lie in (0, 1)"
    );
    let t: Vec<f64> = s.rows.iter().map(|r| r.transmission).collect();
    let x: Vec<f64> = s.rows.iter().map(|r| r.delta_p).collect();
    let n = t.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    let global_max = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = min_height_fraction * global_max;
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if !(t[i] > t[i - 1] && t[i] > t[i + 1] && t[i] >= threshold) {
            continue;
        }
        let (position, height) =
            parabola_vertex([x[i - 1], x[i], x[i + 1]], [t[i - 1], t[i], t[i + 1]]);
        let half = 0.5 * height;

        let mut left = None;
        let mut jl = i;
        while jl > 0 {
            jl -= 1;
            if t[jl] <= half {
                left = Some(interpolate_crossing(
                    x[jl],
                    t[jl],
                    x[jl + 1],
                    t[jl + 1],
                    half,
                ));
                break;
            }
        }
        let mut right = None;
        let mut jr = i;
        while jr + 1 < n {
            jr += 1;
            if t[jr] <= half {
                right = Some(interpolate_crossing(
                    x[jr - 1],
                    t[jr - 1],
                    x[jr],
                    t[jr],
                    half,
                ));
                break;
            }
        }

        let (fwhm, left_half, right_half) = match (left, right) {
            (Some(l), Some(r)) => {
                // jl and jr are the first samples at/below half on each side;
                // the run strictly above half is everything between them.
                let samples_above = jr - jl - 1;
                if samples_above < MIN_SAMPLES_ABOVE_HALF {
                    return Err(SpectraError::TooCoarse {
                        position,
                        samples: samples_above,
                        required: MIN_SAMPLES_ABOVE_HALF,
                        suggested_step: (r - l) / MIN_SAMPLES_ABOVE_HALF as f64,
                    });
                }
                (Some(r - l), Some(l), Some(r))
            }
            _ => (None, None, None),
        };
        peaks.push(Peak {
            position,
            height,
            fwhm,
            left_half,
            right_half,
        });
    }
    Ok(peaks)
}

fn measurable_peak_nearest(
    peaks: &[Peak],
    target: f64,
    configuration: &str,
) -> Result<Peak, SpectraError> {
    peaks
        .iter()
        .filter(|p| p.fwhm.is_some())
        .min_by(|a, b| {
            let da = (a.position - target).abs();
            let db = (b.position - target).abs();
            da.partial_cmp(&db).unwrap()
        })
        .copied()
        .ok_or_else(|| SpectraError::MissingPeak {
            configuration: configuration.to_string(),
        })
}

const PEAK_HEIGHT_FRACTION: f64 = 0.1;

/// Measure the cavity linewidth for a single-dark and a double-dark medium
/// and compare the measured ratio with the dispersion-slope formula.
///
/// For each configuration the cavity bias phase is set to −β·(window under
/// study) — i.e. the empty-cavity resonance is tuned onto the transparency
/// window being measured (Δ1 for the single-dark side, Δ2 for the
/// double-dark side; the narrow double-dark peak is the one nearest Δ2). The
/// formula ratio uses dispersion slopes evaluated at those window centers
/// and the cavity's `k_ratio`.
pub fn linewidth_report(
    p_single: &AtomParams,
    p_double: &AtomParams,
    m: &SusceptibilityModel,
    c: &CavityParams,
    grid: &ScanGrid,
) -> Result<LinewidthReport, SpectraError> {
    let w_single = p_single.delta1;
    let w_double = p_double.delta2;

    let tuned_single = CavityParams {
        theta0: -c.beta * w_single,
        ..*c
    };
    let spectrum_s = sweep(grid, p_single, m, &tuned_single)?;
    let peaks_s = find_peaks(&spectrum_s, PEAK_HEIGHT_FRACTION)?;
    let peak_s = measurable_peak_nearest(&peaks_s, w_single, "single-dark")?;

    let tuned_double = CavityParams {
        theta0: -c.beta * w_double,
        ..*c
    };
    let spectrum_d = sweep(grid, p_double, m, &tuned_double)?;
    let peaks_d = find_peaks(&spectrum_d, PEAK_HEIGHT_FRACTION)?;
    let peak_d = measurable_peak_nearest(&peaks_d, w_double, "double-dark")?;

    let slope_s = dispersion_slope(w_single, p_single, m, DEFAULT_SLOPE_STEP)?;
    let slope_d = dispersion_slope(w_double, p_double, m, DEFAULT_SLOPE_STEP)?;
    let eq4_ratio = linewidth_ratio(slope_s, slope_d, c.k_ratio)?;

    let fwhm_s = peak_s.fwhm.expect("selected peak carries a FWHM");
    let fwhm_d = peak_d.fwhm.expect("selected peak carries a FWHM");
    Ok(LinewidthReport {
        fwhm_s,
        fwhm_d,
        measured_ratio: fwhm_d / fwhm_s,
        eq4_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4a_atom() -> AtomParams {
        AtomParams::default()
    }

    fn fig4d_atom() -> AtomParams {
        AtomParams {
            omega2: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            ..AtomParams::default()
        }
    }

    fn model() -> SusceptibilityModel {
        SusceptibilityModel::default()
    }

    fn cavity() -> CavityParams {
        CavityParams::default()
    }

    #[test]
    fn grid_validation() {
        let mut g = ScanGrid::default();
        g.validate().unwrap();
        g.points = 1;
        assert_eq!(g.validate().unwrap_err().field, "points");
        g = ScanGrid {
            start: 2.0,
            stop: -2.0,
            ..ScanGrid::default()
        };
        assert_eq!(g.validate().unwrap_err().field, "start");
    }

    #[test]
    fn abscissae_strictly_increasing_and_refined() {
        let g = ScanGrid::default();
        let xs = g.abscissae(&[-1.0, 1.0]);
        assert!(xs.len() > 801 + 800, "got {}", xs.len());
        for w in xs.windows(2) {
            assert!(w[1] > w[0]);
        }
        // the windows themselves are on the refined grid
        assert!(xs.contains(&1.0));
        assert!(xs.contains(&-1.0));
        // refinement step inside the window zone
        let in_zone: Vec<f64> = xs
            .iter()
            .cloned()
            .filter(|x| (*x - 1.0).abs() < WINDOW_REFINE_HALF_WIDTH - 1e-9)
            .collect();
        for w in in_zone.windows(2) {
            assert!(w[1] - w[0] <= WINDOW_REFINE_STEP * (1.0 + 1e-9));
        }
    }

    #[test]
    fn abscissae_without_refinement_is_plain_linspace() {
        let g = ScanGrid {
            refine_windows: false,
            points: 5,
            start: 0.0,
            stop: 1.0,
        };
        let xs = g.abscissae(&[0.5]);
        assert_eq!(xs.len(), 5);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[4], 1.0);
    }

    #[test]
    fn sweep_rows_ordered_with_window_zeros_on_grid() {
        let s = sweep(&ScanGrid::default(), &fig4a_atom(), &model(), &cavity()).unwrap();
        for w in s.rows.windows(2) {
            assert!(w[1].delta_p > w[0].delta_p);
        }
        let at = |x: f64| {
            s.rows
                .iter()
                .find(|r| r.delta_p == x)
                .unwrap_or_else(|| panic!("{x} not on grid"))
        };
        assert_eq!(at(1.0).chi_re, 0.0);
        assert_eq!(at(1.0).chi_im, 0.0);
        assert_eq!(at(-1.0).chi_re, 0.0);
        assert_eq!(at(-1.0).chi_im, 0.0);
    }

    #[test]
    fn sweep_rows_respect_airy_bounds() {
        let s = sweep(&ScanGrid::default(), &fig4a_atom(), &model(), &cavity()).unwrap();
        let c = cavity();
        for r in &s.rows {
            assert!(r.kappa > 0.0 && r.kappa <= 1.0);
            let rk = c.r * r.kappa;
            let lo = c.t2() / ((1.0 + rk) * (1.0 + rk));
            let hi = c.t2() / ((1.0 - rk) * (1.0 - rk));
            assert!(r.transmission >= lo - 1e-12 && r.transmission <= hi + 1e-9);
        }
    }

    #[test]
    fn sweep_decouples_to_pure_airy_pattern() {
        let p = AtomParams {
            omega1: 0.0,
            omega2: 0.0,
            ..fig4a_atom()
        };
        let c = CavityParams {
            beta: 1.0,
            xi: 0.0,
            eta: 0.0,
            ..cavity()
        };
        let s = sweep(&ScanGrid::default(), &p, &model(), &c).unwrap();
        for r in &s.rows {
            assert_eq!(r.kappa, 1.0);
            let airy = transmission(c.beta * r.delta_p, 1.0, &c);
            assert!((r.transmission - airy).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = sweep(&ScanGrid::default(), &fig4a_atom(), &model(), &cavity()).unwrap();
        let b = sweep(&ScanGrid::default(), &fig4a_atom(), &model(), &cavity()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn double_dark_spectrum_has_two_window_peaks() {
        let s = sweep(&ScanGrid::default(), &fig4a_atom(), &model(), &cavity()).unwrap();
        let peaks = find_peaks(&s, 0.1).unwrap();
        assert_eq!(peaks.len(), 2, "peaks: {peaks:?}");
        assert!((peaks[0].position + 1.0).abs() < 0.01);
        assert!((peaks[1].position - 1.0).abs() < 0.01);
        let (broad, narrow) = (peaks[0], peaks[1]);
        assert!(narrow.fwhm.unwrap() < broad.fwhm.unwrap() / 10.0);
        for p in [broad, narrow] {
            let (l, r) = (p.left_half.unwrap(), p.right_half.unwrap());
            assert!(l < p.position && p.position < r);
            assert!((p.fwhm.unwrap() - (r - l)).abs() < 1e-15);
        }
    }

    #[test]
    fn single_dark_spectrum_has_one_peak_at_zero() {
        let s = sweep(&ScanGrid::default(), &fig4d_atom(), &model(), &cavity()).unwrap();
        let peaks = find_peaks(&s, 0.1).unwrap();
        assert_eq!(peaks.len(), 1, "peaks: {peaks:?}");
        assert!(peaks[0].position.abs() < 0.01);
    }

    #[test]
    fn symmetric_controls_give_mirror_peaks() {
        let p = AtomParams {
            omega2: 2.0,
            ..fig4a_atom()
        };
        let s = sweep(&ScanGrid::default(), &p, &model(), &cavity()).unwrap();
        let peaks = find_peaks(&s, 0.1).unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0].position + peaks[1].position).abs() < WINDOW_REFINE_STEP);
        let h0 = peaks[0].height;
        let h1 = peaks[1].height;
        assert!((h0 - h1).abs() / h0.max(h1) < 0.01);
    }

    #[test]
    fn monotone_spectrum_has_no_peaks() {
        let rows: Vec<SpectrumRow> = (0..100)
            .map(|i| {
                let x = i as f64 * 0.1;
                SpectrumRow {
                    delta_p: x,
                    chi_re: 0.0,
                    chi_im: 0.0,
                    phase: 0.0,
                    kappa: 1.0,
                    transmission: 1.0 + x,
                }
            })
            .collect();
        assert!(find_peaks(&Spectrum { rows }, 0.1).unwrap().is_empty());
    }

    #[test]
    fn coarse_grid_over_narrow_peak_reports_too_coarse() {
        let g = ScanGrid {
            start: 0.9,
            stop: 1.1,
            points: 21,
            refine_windows: false,
        };
        let s = sweep(&g, &fig4a_atom(), &model(), &cavity()).unwrap();
        match find_peaks(&s, 0.1) {
            Err(SpectraError::TooCoarse {
                position, samples, ..
            }) => {
                assert!((position - 1.0).abs() < 0.02);
                assert!(samples < 5);
            }
            other => panic!("expected TooCoarse, got {other:?}"),
        }
    }

    #[test]
    fn fwhm_stable_under_grid_doubling() {
        let g2 = ScanGrid {
            points: 1601,
            ..ScanGrid::default()
        };
        let s1 = sweep(&ScanGrid::default(), &fig4a_atom(), &model(), &cavity()).unwrap();
        let s2 = sweep(&g2, &fig4a_atom(), &model(), &cavity()).unwrap();
        let p1 = find_peaks(&s1, 0.1).unwrap();
        let p2 = find_peaks(&s2, 0.1).unwrap();
        assert_eq!(p1.len(), p2.len());
        for (a, b) in p1.iter().zip(&p2) {
            let (fa, fb) = (a.fwhm.unwrap(), b.fwhm.unwrap());
            assert!(
                (fa - fb).abs() / fb < 0.02,
                "FWHM moved {fa} -> {fb} under refinement"
            );
        }
    }

    #[test]
    fn narrower_control_narrows_the_narrow_peak() {
        let mut last = f64::INFINITY;
        for omega2 in [0.5, 0.3, 0.2] {
            let p = AtomParams {
                omega2,
                ..fig4a_atom()
            };
            let s = sweep(&ScanGrid::default(), &p, &model(), &cavity()).unwrap();
            let peaks = find_peaks(&s, 0.1).unwrap();
            let narrow = peaks
                .iter()
                .filter(|pk| pk.fwhm.is_some())
                .min_by(|a, b| {
                    (a.position - 1.0)
                        .abs()
                        .partial_cmp(&(b.position - 1.0).abs())
                        .unwrap()
                })
                .unwrap();
            let f = narrow.fwhm.unwrap();
            assert!(f < last, "Ω2 = {omega2}: {f} not below {last}");
            last = f;
        }
    }

    #[test]
    fn mirrored_configuration_mirrors_the_spectrum() {
        // All detunings negated, θ0 = 0: the transmission column must be the
        // reverse of the original, row for row.
        let p = fig4a_atom();
        let mirrored = AtomParams {
            delta_p: -p.delta_p,
            delta1: -p.delta1,
            delta2: -p.delta2,
            ..p
        };
        let a = sweep(&ScanGrid::default(), &p, &model(), &cavity()).unwrap();
        let b = sweep(&ScanGrid::default(), &mirrored, &model(), &cavity()).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        let n = a.rows.len();
        for (i, ra) in a.rows.iter().enumerate() {
            let rb = &b.rows[n - 1 - i];
            assert!(
                (ra.transmission - rb.transmission).abs() < 1e-12,
                "row {i}: {} vs {}",
                ra.transmission,
                rb.transmission
            );
        }
    }

    #[test]
    fn report_for_identical_configurations_is_unity() {
        let r = linewidth_report(
            &fig4d_atom(),
            &fig4d_atom(),
            &model(),
            &cavity(),
            &ScanGrid::default(),
        )
        .unwrap();
        assert!((r.measured_ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn report_matches_slope_ratio_without_empty_phase() {
        // β = 0 with ξ > 0: the measured ratio approaches the k→∞ asymptote
        // of the slope formula, 0.25/11.111 = 0.0225.
        let c = CavityParams {
            beta: 0.0,
            k_ratio: f64::INFINITY,
            ..cavity()
        };
        let r = linewidth_report(
            &fig4d_atom(),
            &fig4a_atom(),
            &model(),
            &c,
            &ScanGrid::default(),
        )
        .unwrap();
        assert!((r.eq4_ratio - 0.0225).abs() < 1e-4);
        assert!(
            (r.measured_ratio - 0.0225).abs() / 0.0225 < 0.15,
            "measured {}",
            r.measured_ratio
        );
    }

    #[test]
    fn report_reproduces_linewidth_narrowing() {
        let c = CavityParams {
            beta: 1.0,
            ..cavity()
        };
        let r = linewidth_report(
            &fig4d_atom(),
            &fig4a_atom(),
            &model(),
            &c,
            &ScanGrid::default(),
        )
        .unwrap();
        assert!((r.eq4_ratio - 0.083).abs() < 0.001, "eq4 {}", r.eq4_ratio);
        assert!(
            (r.measured_ratio - r.eq4_ratio).abs() / r.eq4_ratio < 0.15,
            "measured {} vs eq4 {}",
            r.measured_ratio,
            r.eq4_ratio
        );
    }

    #[test]
    fn report_missing_peak_when_medium_opaque() {
        // η enormous: the medium absorbs everywhere off the exact window and
        // the Airy structure collapses below the peak threshold.
        let p = AtomParams {
            omega1: 0.0,
            omega2: 0.0,
            ..fig4a_atom()
        };
        let c = CavityParams {
            eta: 5000.0,
            beta: 0.0,
            xi: 0.0,
            ..cavity()
        };
        match linewidth_report(&p, &p, &model(), &c, &ScanGrid::default()) {
            Err(SpectraError::MissingPeak { configuration }) => {
                assert_eq!(configuration, "single-dark");
            }
            other => panic!("expected MissingPeak, got {other:?}"),
        }
    }
}
