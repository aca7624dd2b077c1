//! Python bindings for the tripod-medium / ring-cavity simulator.
//!
//! Exposes the parameter types and the main operations: susceptibility
//! evaluation, steady-state solves, detuning sweeps, peak extraction and the
//! linewidth comparison.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tripodcav::atom::{
    evolve_to_steady_state, solve_steady_state, solve_weak_probe_coherences, DensityMatrix,
    EvolveOptions,
};
use tripodcav::config::preset as core_preset;
use tripodcav::plot::{render_spectrum_svg, PlotColumn};
use tripodcav::{
    chi_analytic, dispersion_slope, find_peaks, linewidth_ratio, linewidth_report, sweep,
    transparency_windows, AtomParams as CoreAtomParams, CavityParams as CoreCavityParams,
    ScanGrid as CoreScanGrid, Spectrum as CoreSpectrum,
    SusceptibilityModel as CoreSusceptibilityModel,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Tripod-atom rates, Rabi frequencies and detunings, in units of γ01.
#[pyclass(name = "AtomParams", module = "tripodcav_py", skip_from_py_object)]
#[derive(Clone)]
struct PyAtomParams {
    inner: CoreAtomParams,
}

#[pymethods]
impl PyAtomParams {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, pyo3::types::PyDict>>) -> PyResult<Self> {
        let mut p = CoreAtomParams::default();
        if let Some(kwargs) = kwargs {
            for (key, value) in kwargs.iter() {
                let name: String = key.extract()?;
                let v: f64 = value.extract()?;
                match name.as_str() {
                    "gamma01" => p.gamma01 = v,
                    "gamma02" => p.gamma02 = v,
                    "gamma03" => p.gamma03 = v,
                    "gamma21" => p.gamma21 = v,
                    "gamma31" => p.gamma31 = v,
                    "gamma32" => p.gamma32 = v,
                    "gamma12" => p.gamma12 = v,
                    "gamma13" => p.gamma13 = v,
                    "gamma23" => p.gamma23 = v,
                    "g" => p.g = v,
                    "omega1" => p.omega1 = v,
                    "omega2" => p.omega2 = v,
                    "delta_p" => p.delta_p = v,
                    "delta1" => p.delta1 = v,
                    "delta2" => p.delta2 = v,
                    other => {
                        return Err(PyValueError::new_err(format!(
                            "unknown AtomParams field {other:?}"
                        )))
                    }
                }
            }
        }
        p.validate()
            .map_err(|e| PyValueError::new_err(format!("atom.{}: {}", e.field, e.message)))?;
        Ok(PyAtomParams { inner: p })
    }

    #[getter]
    fn omega1(&self) -> f64 {
        self.inner.omega1
    }
    #[getter]
    fn omega2(&self) -> f64 {
        self.inner.omega2
    }
    #[getter]
    fn delta_p(&self) -> f64 {
        self.inner.delta_p
    }
    #[getter]
    fn delta1(&self) -> f64 {
        self.inner.delta1
    }
    #[getter]
    fn delta2(&self) -> f64 {
        self.inner.delta2
    }
    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Prefactor and formula-variant selection for the susceptibility.
#[pyclass(
    name = "SusceptibilityModel",
    module = "tripodcav_py",
    skip_from_py_object
)]
#[derive(Clone)]
struct PySusceptibilityModel {
    inner: CoreSusceptibilityModel,
}

#[pymethods]
impl PySusceptibilityModel {
    #[new]
    #[pyo3(signature = (prefactor = 1.0, variant = "paper-verbatim", include_ground_decay = false))]
    fn new(prefactor: f64, variant: &str, include_ground_decay: bool) -> PyResult<Self> {
        let variant = match variant {
            "paper-verbatim" => tripodcav::FormulaVariant::PaperVerbatim,
            "linear-gamma" => tripodcav::FormulaVariant::LinearGamma,
            other => {
                return Err(PyValueError::new_err(format!(
                    "variant must be 'paper-verbatim' or 'linear-gamma' (got {other:?})"
                )))
            }
        };
        let inner = CoreSusceptibilityModel {
            prefactor,
            variant,
            include_ground_decay,
        };
        inner
            .validate()
            .map_err(|e| PyValueError::new_err(format!("model.{}: {}", e.field, e.message)))?;
        Ok(PySusceptibilityModel { inner })
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Mirror reflectivity and cavity–medium couplings.
#[pyclass(name = "CavityParams", module = "tripodcav_py", skip_from_py_object)]
#[derive(Clone)]
struct PyCavityParams {
    inner: CoreCavityParams,
}

#[pymethods]
impl PyCavityParams {
    #[new]
    #[pyo3(signature = (r = 0.98, beta = 0.0, xi = 1.364, eta = 2.0, theta0 = 0.0, k_ratio = 1.364))]
    fn new(r: f64, beta: f64, xi: f64, eta: f64, theta0: f64, k_ratio: f64) -> PyResult<Self> {
        let inner = CoreCavityParams {
            r,
            beta,
            xi,
            eta,
            theta0,
            k_ratio,
        };
        inner
            .validate()
            .map_err(|e| PyValueError::new_err(format!("cavity.{}: {}", e.field, e.message)))?;
        Ok(PyCavityParams { inner })
    }

    #[getter]
    fn t2(&self) -> f64 {
        self.inner.t2()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Detuning grid for sweeps.
#[pyclass(name = "ScanGrid", module = "tripodcav_py", skip_from_py_object)]
#[derive(Clone)]
struct PyScanGrid {
    inner: CoreScanGrid,
}

#[pymethods]
impl PyScanGrid {
    #[new]
    #[pyo3(signature = (start = -4.0, stop = 4.0, points = 801, refine_windows = true))]
    fn new(start: f64, stop: f64, points: usize, refine_windows: bool) -> PyResult<Self> {
        let inner = CoreScanGrid {
            start,
            stop,
            points,
            refine_windows,
        };
        inner
            .validate()
            .map_err(|e| PyValueError::new_err(format!("scan.{}: {}", e.field, e.message)))?;
        Ok(PyScanGrid { inner })
    }
}

/// A detected transmission peak.
#[pyclass(name = "Peak", module = "tripodcav_py", skip_from_py_object)]
#[derive(Clone)]
struct PyPeak {
    #[pyo3(get)]
    position: f64,
    #[pyo3(get)]
    height: f64,
    #[pyo3(get)]
    fwhm: Option<f64>,
    #[pyo3(get)]
    left_half: Option<f64>,
    #[pyo3(get)]
    right_half: Option<f64>,
}

#[pymethods]
impl PyPeak {
    fn __repr__(&self) -> String {
        format!(
            "Peak(position={}, height={}, fwhm={:?})",
            self.position, self.height, self.fwhm
        )
    }
}

/// Sampled response curves over a detuning grid.
#[pyclass(name = "Spectrum", module = "tripodcav_py")]
struct PySpectrum {
    inner: CoreSpectrum,
}

#[pymethods]
impl PySpectrum {
    /// Rows as (delta_p, chi_re, chi_im, phase, kappa, transmission) tuples.
    fn rows(&self) -> Vec<(f64, f64, f64, f64, f64, f64)> {
        self.inner
            .rows
            .iter()
            .map(|r| {
                (
                    r.delta_p,
                    r.chi_re,
                    r.chi_im,
                    r.phase,
                    r.kappa,
                    r.transmission,
                )
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }

    /// Local maxima of the transmission column above the height fraction,
    /// with FWHM where measurable.
    #[pyo3(signature = (min_height_fraction = 0.1))]
    fn find_peaks(&self, min_height_fraction: f64) -> PyResult<Vec<PyPeak>> {
        let peaks = find_peaks(&self.inner, min_height_fraction).map_err(runtime_err)?;
        Ok(peaks
            .into_iter()
            .map(|p| PyPeak {
                position: p.position,
                height: p.height,
                fwhm: p.fwhm,
                left_half: p.left_half,
                right_half: p.right_half,
            })
            .collect())
    }

    /// Render the named columns ("chi_re", "chi_im", "phase", "kappa",
    /// "transmission") to an SVG string.
    #[pyo3(signature = (columns, normalize_peak = false))]
    fn to_svg(&self, columns: Vec<String>, normalize_peak: bool) -> PyResult<String> {
        let cols: Vec<PlotColumn> = columns
            .iter()
            .map(|c| match c.as_str() {
                "chi_re" => Ok(PlotColumn::ChiRe),
                "chi_im" => Ok(PlotColumn::ChiIm),
                "phase" => Ok(PlotColumn::Phase),
                "kappa" => Ok(PlotColumn::Kappa),
                "transmission" => Ok(PlotColumn::Transmission),
                other => Err(PyValueError::new_err(format!("unknown column {other:?}"))),
            })
            .collect::<PyResult<_>>()?;
        render_spectrum_svg(&self.inner, &cols, normalize_peak).map_err(value_err)
    }
}

/// χ(Δp) as (re, im) = (dispersion, absorption).
#[pyfunction(name = "chi_analytic")]
fn py_chi_analytic(delta_p: f64, atom: &PyAtomParams, model: &PySusceptibilityModel) -> (f64, f64) {
    let chi = chi_analytic(delta_p, &atom.inner, &model.inner);
    (chi.re, chi.im)
}

/// Probe detunings at which the medium is transparent.
#[pyfunction(name = "transparency_windows")]
fn py_transparency_windows(atom: &PyAtomParams) -> Vec<f64> {
    transparency_windows(&atom.inner)
}

/// ∂χ′/∂ωp at `delta_p` by central finite difference.
#[pyfunction(name = "dispersion_slope")]
#[pyo3(signature = (delta_p, atom, model, h = 1e-5))]
fn py_dispersion_slope(
    delta_p: f64,
    atom: &PyAtomParams,
    model: &PySusceptibilityModel,
    h: f64,
) -> PyResult<f64> {
    dispersion_slope(delta_p, &atom.inner, &model.inner, h).map_err(runtime_err)
}

fn density_rows(rho: &DensityMatrix) -> Vec<Vec<(f64, f64)>> {
    (0..4)
        .map(|j| {
            (0..4)
                .map(|k| {
                    let v = rho.element(j, k);
                    (v.re, v.im)
                })
                .collect()
        })
        .collect()
}

/// Steady state as a 4×4 nested list of (re, im) pairs.
#[pyfunction(name = "solve_steady_state")]
fn py_solve_steady_state(atom: &PyAtomParams) -> PyResult<Vec<Vec<(f64, f64)>>> {
    let rho = solve_steady_state(&atom.inner).map_err(runtime_err)?;
    Ok(density_rows(&rho))
}

/// Steady state by RK4 time evolution from all population in |1⟩.
#[pyfunction(name = "evolve_steady_state")]
#[pyo3(signature = (atom, tol = 1e-10, t_max = 50_000.0))]
fn py_evolve_steady_state(
    atom: &PyAtomParams,
    tol: f64,
    t_max: f64,
) -> PyResult<Vec<Vec<(f64, f64)>>> {
    let opts = EvolveOptions {
        tol,
        t_max,
        ..EvolveOptions::suggested(&atom.inner)
    };
    let rho =
        evolve_to_steady_state(&atom.inner, &DensityMatrix::pure(1), &opts).map_err(runtime_err)?;
    Ok(density_rows(&rho))
}

/// Weak-probe coherences (ρ10, ρ12, ρ13) as (re, im) pairs.
#[pyfunction(name = "solve_weak_probe_coherences")]
fn py_solve_weak_probe(atom: &PyAtomParams) -> PyResult<Vec<(f64, f64)>> {
    let wp = solve_weak_probe_coherences(&atom.inner).map_err(runtime_err)?;
    Ok(vec![
        (wp.rho10.re, wp.rho10.im),
        (wp.rho12.re, wp.rho12.im),
        (wp.rho13.re, wp.rho13.im),
    ])
}

/// Sweep the χ → phase/absorption → transmission pipeline over the grid.
#[pyfunction(name = "sweep")]
fn py_sweep(
    grid: &PyScanGrid,
    atom: &PyAtomParams,
    model: &PySusceptibilityModel,
    cavity: &PyCavityParams,
) -> PyResult<PySpectrum> {
    let s = sweep(&grid.inner, &atom.inner, &model.inner, &cavity.inner).map_err(runtime_err)?;
    Ok(PySpectrum { inner: s })
}

/// Linewidth-ratio formula (1 + k·ss)/(1 + k·sd); k = inf gives ss/sd.
#[pyfunction(name = "linewidth_ratio")]
fn py_linewidth_ratio(slope_single: f64, slope_double: f64, k_ratio: f64) -> PyResult<f64> {
    linewidth_ratio(slope_single, slope_double, k_ratio).map_err(runtime_err)
}

/// Measured and formula linewidth comparison; returns a dict with keys
/// fwhm_s, fwhm_d, measured_ratio, eq4_ratio.
#[pyfunction(name = "linewidth_report")]
fn py_linewidth_report<'py>(
    py: Python<'py>,
    atom_single: &PyAtomParams,
    atom_double: &PyAtomParams,
    model: &PySusceptibilityModel,
    cavity: &PyCavityParams,
    grid: &PyScanGrid,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let r = linewidth_report(
        &atom_single.inner,
        &atom_double.inner,
        &model.inner,
        &cavity.inner,
        &grid.inner,
    )
    .map_err(runtime_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("fwhm_s", r.fwhm_s)?;
    dict.set_item("fwhm_d", r.fwhm_d)?;
    dict.set_item("measured_ratio", r.measured_ratio)?;
    dict.set_item("eq4_ratio", r.eq4_ratio)?;
    Ok(dict)
}

/// Built-in parameter preset as (atom, model, cavity, scan).
#[pyfunction(name = "preset")]
fn py_preset(
    name: &str,
) -> PyResult<(
    PyAtomParams,
    PySusceptibilityModel,
    PyCavityParams,
    PyScanGrid,
)> {
    let config = core_preset(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))?;
    Ok((
        PyAtomParams { inner: config.atom },
        PySusceptibilityModel {
            inner: config.model,
        },
        PyCavityParams {
            inner: config.cavity,
        },
        PyScanGrid { inner: config.scan },
    ))
}

#[pymodule]
fn tripodcav_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyAtomParams>()?;
    m.add_class::<PySusceptibilityModel>()?;
    m.add_class::<PyCavityParams>()?;
    m.add_class::<PyScanGrid>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyPeak>()?;
    m.add_function(wrap_pyfunction!(py_chi_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(py_transparency_windows, m)?)?;
    m.add_function(wrap_pyfunction!(py_dispersion_slope, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve_steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(py_evolve_steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve_weak_probe, m)?)?;
    m.add_function(wrap_pyfunction!(py_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(py_linewidth_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(py_linewidth_report, m)?)?;
    m.add_function(wrap_pyfunction!(py_preset, m)?)?;
    Ok(())
}
