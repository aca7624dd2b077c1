//! Simulation of a four-level tripod atomic medium with two interacting dark
//! resonances and of an optical ring cavity containing that medium.
//!
//! The crate is organized around five building blocks:
//!
//! - [`atom`] — density-matrix dynamics of the tripod scheme: the full
//!   steady-state linear solve, the weak-probe 3×3 solve, and a fixed-step
//!   RK4 time integrator that serves as an independent oracle for the solvers.
//! - [`susceptibility`] — the closed-form linear susceptibility of the probe
//!   transition, its transparency windows, and the dispersion slope ∂χ′/∂ωp.
//! - [`cavity`] — ring-cavity round-trip phase/absorption, the Airy
//!   transmission function, and the cavity-linewidth ratio between single-
//!   and double-dark configurations.
//! - [`spectra`] — detuning sweeps, peak finding and FWHM extraction.
//! - [`config`], [`output`], [`plot`], [`cli`] — configuration ingestion,
//!   CSV/JSON serialization, static SVG rendering, and the command-line
//!   front end.
//!
//! All rates, Rabi frequencies and detunings are expressed in units of the
//! spontaneous decay rate γ01 of the probe transition, so γ01 = 1 throughout.

pub mod atom;
pub mod cavity;
pub mod cli;
pub mod config;
mod linalg;
pub mod output;
pub mod plot;
pub mod spectra;
pub mod susceptibility;

pub use atom::{
    assemble_steady_state_system, evolve_to_steady_state, solve_steady_state,
    solve_weak_probe_coherences, AtomError, AtomParams, DensityMatrix, EvolveOptions,
    LinearSteadyStateSystem, WeakProbeCoherences,
};
pub use cavity::{
    empty_cavity_fwhm_phase, linewidth_ratio, round_trip_absorption, round_trip_phase,
    transmission, CavityError, CavityParams,
};
pub use config::{load_config_file, load_config_str, preset, ConfigError, RunConfig};
pub use spectra::{
    find_peaks, linewidth_report, sweep, LinewidthReport, Peak, ScanGrid, SpectraError, Spectrum,
    SpectrumRow,
};
pub use susceptibility::{
    chi_analytic, dispersion_slope, transparency_windows, ComplexResponse, FormulaVariant,
    SusceptibilityError, SusceptibilityModel,
};
