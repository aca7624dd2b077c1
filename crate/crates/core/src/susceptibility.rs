//! Closed-form linear susceptibility of the probe transition.
//!
//! In the weak-probe limit with the population in |1⟩ and no ground-state
//! coherence decay, the susceptibility reduces to a rational function of the
//! two-photon detunings a = Δp − Δ1 and b = Δp − Δ2:
//!
//! ```text
//! χ(Δp) = C · (−X + i γ) / (X² + γ01²),    X = Δp − Ω1²/a − Ω2²/b
//! ```
//!
//! where the prefactor C absorbs the medium density and dipole moment, and γ
//! in the numerator is γ01² ([`FormulaVariant::PaperVerbatim`], the
//! convention this rational form is usually quoted with) or γ01
//! ([`FormulaVariant::LinearGamma`], what a first-principles weak-probe
//! reduction gives); with the γ01 = 1 scaling the two coincide. The
//! discrepancy between the conventions is immaterial in scaled units, which
//! is why both are kept. χ vanishes identically at
//! Δp = Δ1 and Δp = Δ2 when the corresponding control is on — these are the
//! transparency windows. A control that is off drops its term, which removes
//! the 0/0 at its window and leaves the Λ-system formula.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atom::{weak_probe_rho10_unit, AtomParams, ParamError};

/// Numerator damping convention for the rational formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormulaVariant {
    /// Imaginary numerator term γ01², the usual quoting convention.
    #[serde(rename = "paper-verbatim")]
    PaperVerbatim,
    /// Imaginary numerator term γ01, from a first-principles weak-probe
    /// reduction.
    #[serde(rename = "linear-gamma")]
    LinearGamma,
}

/// Prefactor convention and formula selection for the susceptibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SusceptibilityModel {
    /// Positive constant replacing the density/dipole prefactor.
    pub prefactor: f64,
    pub variant: FormulaVariant,
    /// Evaluate χ from the weak-probe 3×3 solve instead of the rational
    /// formula, which supports γ12, γ13 > 0.
    pub include_ground_decay: bool,
}

impl Default for SusceptibilityModel {
    fn default() -> Self {
        SusceptibilityModel {
            prefactor: 1.0,
            variant: FormulaVariant::PaperVerbatim,
            include_ground_decay: false,
        }
    }
}

impl SusceptibilityModel {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !self.prefactor.is_finite() || self.prefactor <= 0.0 {
            return Err(ParamError {
                field: "prefactor",
                message: format!("must be finite and > 0 (got {})", self.prefactor),
            });
        }
        Ok(())
    }
}

/// χ = χ′ + iχ″: dispersion and absorption, in prefactor units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexResponse {
    pub re: f64,
    pub im: f64,
}

impl ComplexResponse {
    pub const ZERO: ComplexResponse = ComplexResponse { re: 0.0, im: 0.0 };

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Errors from the evaluators in this module.
#[derive(Debug, Clone, Error)]
pub enum SusceptibilityError {
    /// A stencil evaluation produced a non-finite value.
    #[error("non-finite susceptibility at Δp = {delta_p}")]
    NonFinite { delta_p: f64 },
}

/// Steady-state linear susceptibility at probe detuning `delta_p`.
///
/// Exact zeros are returned at a transparency window whose control is on;
/// a control that is off contributes nothing (removable 0/0 points reduce to
/// the remaining Λ system, and Ω1 = Ω2 = 0 leaves the bare Lorentzian). The
/// sign convention keeps χ″ ≥ 0 for all nonnegative rates.
pub fn chi_analytic(delta_p: f64, p: &AtomParams, m: &SusceptibilityModel) -> ComplexResponse {
    let c = m.prefactor;
    if m.include_ground_decay {
        let unit = weak_probe_rho10_unit(&AtomParams { delta_p, ..*p });
        return ComplexResponse {
            re: c * unit.re,
            im: c * unit.im,
        };
    }
    let a = delta_p - p.delta1;
    let b = delta_p - p.delta2;
    let om1_on = p.omega1 > 0.0;
    let om2_on = p.omega2 > 0.0;
    if (om1_on && a == 0.0) || (om2_on && b == 0.0) {
        return ComplexResponse::ZERO;
    }
    let mut x = delta_p;
    if om1_on {
        x -= p.omega1 * p.omega1 / a;
    }
    if om2_on {
        x -= p.omega2 * p.omega2 / b;
    }
    if !x.is_finite() {
        // Within an ulp of a window: the divided term overflowed; χ → 0 there.
        return ComplexResponse::ZERO;
    }
    let gamma = p.gamma01;
    let gamma_num = match m.variant {
        FormulaVariant::PaperVerbatim => gamma * gamma,
        FormulaVariant::LinearGamma => gamma,
    };
    let denom = x * x + gamma * gamma;
    ComplexResponse {
        re: c * (-x) / denom,
        im: c * gamma_num / denom,
    }
}

/// Probe detunings at which the susceptibility vanishes: Δ1 and/or Δ2 for
/// whichever controls are on, deduplicated and sorted ascending.
pub fn transparency_windows(p: &AtomParams) -> Vec<f64> {
    let mut windows = Vec::with_capacity(2);
    if p.omega1 > 0.0 {
        windows.push(p.delta1);
    }
    if p.omega2 > 0.0 {
        windows.push(p.delta2);
    }
    windows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    windows.dedup();
    windows
}

/// Default central-difference step for [`dispersion_slope`].
pub const DEFAULT_SLOPE_STEP: f64 = 1e-5;

/// ∂χ′/∂ωp at `delta_p` by central finite difference with step `h`. In the
/// scaled units ωp = ω01 + Δp, so the derivative in Δp is the derivative in
/// probe frequency.
pub fn dispersion_slope(
    delta_p: f64,
    p: &AtomParams,
    m: &SusceptibilityModel,
    h: f64,
) -> Result<f64, SusceptibilityError> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let hi = chi_analytic(delta_p + h, p, m);
    if !hi.re.is_finite() {
        return Err(SusceptibilityError::NonFinite {
            delta_p: delta_p + h,
        });
    }
    let lo = chi_analytic(delta_p - h, p, m);
    if !lo.re.is_finite() {
        return Err(SusceptibilityError::NonFinite {
            delta_p: delta_p - h,
        });
    }
    Ok((hi.re - lo.re) / (2.0 * h))
}
