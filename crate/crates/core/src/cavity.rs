//! Ring-cavity transmission through an intracavity dispersive/absorptive
//! medium.
//!
//! The transmission follows the Airy form
//!
//! ```text
//! S(Δp) = t² / (1 + r²κ² − 2 r κ cos Φ)
//! ```
//!
//! with mirror amplitude reflectivity r (t² = 1 − r², lossless third mirror),
//! round-trip absorption κ = exp(−η χ″) and round-trip phase
//! Φ = θ0 + β Δp + ξ χ′. The couplings β (empty-cavity phase slope), ξ
//! (dispersive) and η (absorptive) are dimensionless stand-ins for the
//! optical-path products that a physical cavity would fix; only these
//! products matter for the spectra. Steep intracavity dispersion multiplies
//! dΦ/dΔp and thereby narrows the transmission peak — the linewidth ratio
//! between two media is captured by [`linewidth_ratio`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atom::ParamError;

/// Mirror reflectivity and the dimensionless cavity–medium couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavityParams {
    /// Amplitude reflectivity of the input and output mirrors, 0 < r < 1.
    pub r: f64,
    /// Empty-cavity phase slope dΦ/dΔp. Zero means the free spectral range is
    /// far larger than the scan and the mode is co-tuned with the medium.
    pub beta: f64,
    /// Dispersive coupling multiplying χ′ in the round-trip phase.
    pub xi: f64,
    /// Absorption coupling: κ = exp(−eta·χ″).
    pub eta: f64,
    /// Cavity bias phase at Δp = 0, radians.
    pub theta0: f64,
    /// Coupling entering the linewidth-ratio formula (1 + k·s)/(1 + k·s′).
    pub k_ratio: f64,
}

impl Default for CavityParams {
    fn default() -> Self {
        CavityParams {
            r: 0.98,
            beta: 0.0,
            xi: 1.364,
            eta: 2.0,
            theta0: 0.0,
            k_ratio: 1.364,
        }
    }
}

impl CavityParams {
    /// Input/output intensity transmittance t² = 1 − r².
    pub fn t2(&self) -> f64 {
        1.0 - self.r * self.r
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !self.r.is_finite() || self.r <= 0.0 || self.r >= 1.0 {
            return Err(ParamError {
                field: "r",
                message: format!("must satisfy 0 < r < 1 (got {})", self.r),
            });
        }
        let nonneg: [(&'static str, f64); 3] =
            [("beta", self.beta), ("xi", self.xi), ("eta", self.eta)];
        for (field, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(ParamError {
                    field,
                    message: format!("must be a finite value ≥ 0 (got {v})"),
                });
            }
        }
        if !self.theta0.is_finite() {
            return Err(ParamError {
                field: "theta0",
                message: format!("must be finite (got {})", self.theta0),
            });
        }
        // k_ratio = +inf is the sentinel for the asymptotic ratio form.
        if self.k_ratio.is_nan() || self.k_ratio < 0.0 {
            return Err(ParamError {
                field: "k_ratio",
                message: format!("must be ≥ 0 (got {})", self.k_ratio),
            });
        }
        Ok(())
    }
}

/// Raised by the cavity evaluators.
#[derive(Debug, Clone, Error)]
pub enum CavityError {
    /// χ″ < 0 came in; a passive medium cannot amplify, so this flags an
    /// upstream sign error.
    #[error("negative medium absorption χ″ = {chi_im}")]
    NegativeAbsorption { chi_im: f64 },
    /// The linewidth-ratio denominator was not positive.
    #[error("linewidth ratio denominator {denominator} is not positive")]
    DivisionByZero { denominator: f64 },
}

/// Total round-trip phase Φ = θ0 + β·Δp + ξ·χ′. The constant optical part of
/// the empty-cavity path is absorbed into θ0 modulo 2π.
pub fn round_trip_phase(delta_p: f64, chi_re: f64, c: &CavityParams) -> f64 {
    c.theta0 + c.beta * delta_p + c.xi * chi_re
}

/// Medium amplitude transmission per round trip, κ = exp(−η·χ″) ∈ (0, 1]
/// (0 in the opaque underflow limit).
pub fn round_trip_absorption(chi_im: f64, c: &CavityParams) -> Result<f64, CavityError> {
    if chi_im < -1e-9 {
        return Err(CavityError::NegativeAbsorption { chi_im });
    }
    Ok((-c.eta * chi_im.max(0.0)).exp())
}

/// Airy transmission S = t²/(1 + r²κ² − 2rκ cos Φ). Bounded by
/// t²/(1+rκ)² ≤ S ≤ t²/(1−rκ)² and strictly positive for rκ < 1.
pub fn transmission(phase: f64, kappa: f64, c: &CavityParams) -> f64 {
    debug_assert!((0.0..=1.0).contains(&kappa));
    let rk = c.r * kappa;
    c.t2() / (1.0 + rk * rk - 2.0 * rk * phase.cos())
}

/// Full width in round-trip phase at half of the κ = 1 resonant maximum:
/// 2·arccos((4r − 1 − r²)/(2r)). Approaches 2(1−r)/√r as r → 1.
pub fn empty_cavity_fwhm_phase(c: &CavityParams) -> f64 {
    2.0 * ((4.0 * c.r - 1.0 - c.r * c.r) / (2.0 * c.r)).acos()
}

/// Ratio of cavity linewidths for two media with dispersion slopes
/// `slope_single` and `slope_double`:
///
/// ```text
/// Δω_d/Δω_s = (1 + k·slope_single) / (1 + k·slope_double)
/// ```
///
/// Passing `k_ratio = f64::INFINITY` selects the asymptotic form
/// slope_single/slope_double.
pub fn linewidth_ratio(
    slope_single: f64,
    slope_double: f64,
    k_ratio: f64,
) -> Result<f64, CavityError> {
    if k_ratio.is_infinite() {
        if slope_double <= 0.0 {
            return Err(CavityError::DivisionByZero {
                denominator: slope_double,
            });
        }
        return Ok(slope_single / slope_double);
    }
    let denominator = 1.0 + k_ratio * slope_double;
    if denominator <= 0.0 {
        return Err(CavityError::DivisionByZero { denominator });
    }
    Ok((1.0 + k_ratio * slope_single) / denominator)
}
