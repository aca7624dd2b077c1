//! Density-matrix dynamics of the four-level tripod scheme.
//!
//! |0⟩ is the excited state; |1⟩, |2⟩, |3⟩ are ground states. A weak probe
//! (Rabi frequency g) drives |1⟩–|0⟩ and two control fields (Ω1, Ω2) drive
//! |2⟩–|0⟩ and |3⟩–|0⟩. In the rotating frame the ten independent matrix
//! elements obey
//!
//! ```text
//! ρ̇00 = −(γ01+γ02+γ03)ρ00 − ig(ρ10−ρ01) − iΩ1(ρ20−ρ02) − iΩ2(ρ30−ρ03)
//! ρ̇11 = γ01ρ00 + γ21ρ22 + γ31ρ33 − ig(ρ01−ρ10)
//! ρ̇22 = γ02ρ00 − γ21ρ22 + γ32ρ33 − iΩ1(ρ02−ρ20)
//! ρ̇33 = γ03ρ00 − (γ31+γ32)ρ33 − iΩ2(ρ03−ρ30)
//! ρ̇10 = −Γ10ρ10 + ig(ρ11−ρ00) + iΩ1ρ12 + iΩ2ρ13
//! ρ̇20 = −Γ20ρ20 − iΩ1ρ00 + igρ21 + iΩ1ρ22 + iΩ2ρ23
//! ρ̇30 = −Γ30ρ30 − iΩ2ρ00 + igρ31 + iΩ1ρ32 + iΩ2ρ33
//! ρ̇12 = −Γ12ρ12 − igρ02 + iΩ1ρ10
//! ρ̇13 = −Γ13ρ13 − igρ03 + iΩ2ρ10
//! ρ̇23 = −Γ23ρ23 − iΩ1ρ03 + iΩ2ρ20
//! ```
//!
//! with ρkj = ρjk*, Σj ρjj = 1, and complex decay factors
//! Γ10 = γ01 − iΔp, Γ20 = γ02 − iΔ1, Γ30 = γ03 − iΔ2,
//! Γ12 = γ12 − i(Δp−Δ1), Γ13 = γ13 − i(Δp−Δ2), Γ23 = γ23 − i(Δ1−Δ2).
//!
//! Everything is scaled by γ01, so γ01 = 1 by convention. The steady state is
//! obtained two independent ways: a 16-unknown real linear solve
//! ([`solve_steady_state`]) and fixed-step RK4 integration
//! ([`evolve_to_steady_state`]), each usable as an oracle for the other.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LuFactors};

/// Raised by the steady-state and time-evolution solvers.
#[derive(Debug, Clone, Error)]
pub enum AtomError {
    /// The steady-state linear system is singular to working precision:
    /// the stationary manifold is multi-dimensional (e.g. no fields and no
    /// ground-state redistribution).
    #[error("degenerate steady state: reciprocal condition estimate {rcond:.3e} below 1e-12")]
    DegenerateSteadyState { rcond: f64 },
    /// The weak-probe 3×3 system is singular: the probe sits exactly on the
    /// named transparency window(s) with no coherence decay to lift the
    /// degeneracy.
    #[error("weak-probe system singular at transparency window {windows}")]
    SingularWindow { windows: String },
    /// Time evolution hit `t_max` with the residual still above tolerance.
    #[error("no steady state within t_max = {t_max}: residual {residual:.3e}")]
    NotConverged { residual: f64, t_max: f64 },
    /// The integration step violates dt ≤ 0.01 / max(rates, Rabi, |detunings|, 1).
    #[error("invalid step dt = {dt}: must be positive and ≤ {max_dt:.3e}")]
    InvalidStep { dt: f64, max_dt: f64 },
    /// A candidate density matrix failed the Hermiticity/trace/positivity checks.
    #[error("invalid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },
}

/// Constraint violation found by a parameter `validate()`.
#[derive(Debug, Clone)]
pub struct ParamError {
    pub field: &'static str,
    pub message: String,
}

/// All rates, Rabi frequencies and detunings of the tripod system, in units
/// of γ01 (so `gamma01` is 1 by convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomParams {
    /// Spontaneous decay rates |0⟩→|j⟩.
    pub gamma01: f64,
    pub gamma02: f64,
    pub gamma03: f64,
    /// Ground-population redistribution rates (|2⟩→|1⟩, |3⟩→|1⟩, |3⟩→|2⟩).
    pub gamma21: f64,
    pub gamma31: f64,
    pub gamma32: f64,
    /// Ground-coherence relaxation rates.
    pub gamma12: f64,
    pub gamma13: f64,
    pub gamma23: f64,
    /// Probe Rabi frequency.
    pub g: f64,
    /// Control Rabi frequencies.
    pub omega1: f64,
    pub omega2: f64,
    /// Detunings of probe and control fields.
    pub delta_p: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl Default for AtomParams {
    /// Defaults are the double-dark working point used throughout: Ω1 = 2,
    /// Ω2 = 0.3, Δ1 = −Δ2 = −1, ground coherence decays 1e-4, weak probe
    /// g = 1e-3, ground redistribution 1e-4.
    fn default() -> Self {
        AtomParams {
            gamma01: 1.0,
            gamma02: 1.0,
            gamma03: 1.0,
            gamma21: 1e-4,
            gamma31: 1e-4,
            gamma32: 1e-4,
            gamma12: 1e-4,
            gamma13: 1e-4,
            gamma23: 1e-4,
            g: 1e-3,
            omega1: 2.0,
            omega2: 0.3,
            delta_p: 0.0,
            delta1: -1.0,
            delta2: 1.0,
        }
    }
}

impl AtomParams {
    /// Check the type invariants: nonnegative finite rates and Rabi
    /// frequencies, finite detunings, and the γ01 = 1 scaling convention.
    pub fn validate(&self) -> Result<(), ParamError> {
        let nonneg: [(&'static str, f64); 12] = [
            ("gamma01", self.gamma01),
            ("gamma02", self.gamma02),
            ("gamma03", self.gamma03),
            ("gamma21", self.gamma21),
            ("gamma31", self.gamma31),
            ("gamma32", self.gamma32),
            ("gamma12", self.gamma12),
            ("gamma13", self.gamma13),
            ("gamma23", self.gamma23),
            ("g", self.g),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (field, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(ParamError {
                    field,
                    message: format!("must be a finite value ≥ 0 (got {v})"),
                });
            }
        }
        let finite: [(&'static str, f64); 3] = [
            ("delta_p", self.delta_p),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(ParamError {
                    field,
                    message: format!("must be finite (got {v})"),
                });
            }
        }
        if self.gamma01 != 1.0 {
            return Err(ParamError {
                field: "gamma01",
                message: format!(
                    "is fixed at 1 by the scaling convention (got {})",
                    self.gamma01
                ),
            });
        }
        Ok(())
    }

    /// Largest rate/frequency scale in the problem, floored at 1. The RK4
    /// step must satisfy dt ≤ 0.01 / this.
    pub fn max_scale(&self) -> f64 {
        [
            self.gamma01,
            self.gamma02,
            self.gamma03,
            self.gamma21,
            self.gamma31,
            self.gamma32,
            self.gamma12,
            self.gamma13,
            self.gamma23,
            self.g,
            self.omega1,
            self.omega2,
            self.delta_p.abs(),
            self.delta1.abs(),
            self.delta2.abs(),
            1.0,
        ]
        .into_iter()
        .fold(f64::NAN, f64::max)
    }

    fn gamma10(&self) -> Complex64 {
        Complex64::new(self.gamma01, -self.delta_p)
    }
    fn gamma20(&self) -> Complex64 {
        Complex64::new(self.gamma02, -self.delta1)
    }
    fn gamma30(&self) -> Complex64 {
        Complex64::new(self.gamma03, -self.delta2)
    }
    pub(crate) fn gamma12c(&self) -> Complex64 {
        Complex64::new(self.gamma12, -(self.delta_p - self.delta1))
    }
    pub(crate) fn gamma13c(&self) -> Complex64 {
        Complex64::new(self.gamma13, -(self.delta_p - self.delta2))
    }
    fn gamma23c(&self) -> Complex64 {
        Complex64::new(self.gamma23, -(self.delta1 - self.delta2))
    }
}

/// 4×4 complex Hermitian density matrix with unit trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho: [[Complex64; 4]; 4],
}

const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const DIAG_SLACK: f64 = 1e-10;

impl DensityMatrix {
    /// Pure population in level `j`.
    pub fn pure(j: usize) -> Self {
        assert!(j < 4);
        let mut rho = [[Complex64::ZERO; 4]; 4];
        rho[j][j] = Complex64::ONE;
        DensityMatrix { rho }
    }

    /// Diagonal (classical) state with the given populations; they must sum
    /// to 1 within tolerance.
    pub fn from_populations(pops: [f64; 4]) -> Result<Self, AtomError> {
        let mut rho = [[Complex64::ZERO; 4]; 4];
        for (j, p) in pops.into_iter().enumerate() {
            rho[j][j] = Complex64::new(p, 0.0);
        }
        let dm = DensityMatrix { rho };
        dm.check_invariants(HERMITICITY_TOL)?;
        Ok(dm)
    }

    /// Build from a full complex matrix, enforcing the type invariants.
    pub fn from_matrix(rho: [[Complex64; 4]; 4]) -> Result<Self, AtomError> {
        let dm = DensityMatrix { rho };
        dm.check_invariants(HERMITICITY_TOL)?;
        Ok(dm)
    }

    pub fn element(&self, j: usize, k: usize) -> Complex64 {
        self.rho[j][k]
    }

    pub fn population(&self, j: usize) -> f64 {
        self.rho[j][j].re
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|j| self.rho[j][j].re).sum()
    }

    /// Largest |ρjk − ρkj*| over all pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                worst = worst.max((self.rho[j][k] - self.rho[k][j].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise difference |ρjk − other.ρjk| (real and imaginary
    /// parts separately).
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                let d = self.rho[j][k] - other.rho[j][k];
                worst = worst.max(d.re.abs()).max(d.im.abs());
            }
        }
        worst
    }

    pub(crate) fn check_invariants(&self, tol: f64) -> Result<(), AtomError> {
        let herm = self.hermiticity_defect();
        if herm > tol {
            return Err(AtomError::InvalidDensityMatrix {
                reason: format!("Hermiticity defect {herm:.3e} exceeds {tol:.1e}"),
            });
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > tol.max(TRACE_TOL) {
            return Err(AtomError::InvalidDensityMatrix {
                reason: format!(
                    "trace {trace} differs from 1 by more than {:.1e}",
                    tol.max(TRACE_TOL)
                ),
            });
        }
        for j in 0..4 {
            let d = self.rho[j][j];
            if d.im.abs() > tol || d.re < -DIAG_SLACK || d.re > 1.0 + DIAG_SLACK {
                return Err(AtomError::InvalidDensityMatrix {
                    reason: format!("diagonal entry ρ{j}{j} = {d} outside [0, 1]"),
                });
            }
        }
        Ok(())
    }

    fn from_state(s: &RhoState) -> Self {
        let mut rho = [[Complex64::ZERO; 4]; 4];
        for (j, row) in rho.iter_mut().enumerate() {
            row[j] = Complex64::new(s.pop[j], 0.0);
        }
        for (idx, &(j, k)) in COHERENCE_INDEX.iter().enumerate() {
            rho[j][k] = s.coh[idx];
            rho[k][j] = s.coh[idx].conj();
        }
        DensityMatrix { rho }
    }
}

/// Stored coherences, in unknown-vector order: ρ10, ρ20, ρ30, ρ12, ρ13, ρ23.
const COHERENCE_INDEX: [(usize, usize); 6] = [(1, 0), (2, 0), (3, 0), (1, 2), (1, 3), (2, 3)];

const C10: usize = 0;
const C20: usize = 1;
const C30: usize = 2;
const C12: usize = 3;
const C13: usize = 4;
const C23: usize = 5;

/// Internal packed state: 4 real populations + 6 stored coherences.
#[derive(Debug, Clone, Copy)]
struct RhoState {
    pop: [f64; 4],
    coh: [Complex64; 6],
}

impl RhoState {
    fn from_density(d: &DensityMatrix) -> Self {
        let mut pop = [0.0; 4];
        for (j, p) in pop.iter_mut().enumerate() {
            *p = d.rho[j][j].re;
        }
        let mut coh = [Complex64::ZERO; 6];
        for (idx, &(j, k)) in COHERENCE_INDEX.iter().enumerate() {
            coh[idx] = d.rho[j][k];
        }
        RhoState { pop, coh }
    }

    fn axpy(&self, scale: f64, other: &RhoState) -> RhoState {
        let mut out = *self;
        for j in 0..4 {
            out.pop[j] += scale * other.pop[j];
        }
        for c in 0..6 {
            out.coh[c] += scale * other.coh[c];
        }
        out
    }

    fn max_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for p in self.pop {
            worst = worst.max(p.abs());
        }
        for c in self.coh {
            worst = worst.max(c.re.abs()).max(c.im.abs());
        }
        worst
    }
}

/// Time derivative of the packed state under the tripod equations of motion.
fn equations_of_motion(p: &AtomParams, s: &RhoState) -> RhoState {
    let i = Complex64::I;
    let [p00, p11, p22, p33] = s.pop;
    let r10 = s.coh[C10];
    let r20 = s.coh[C20];
    let r30 = s.coh[C30];
    let r12 = s.coh[C12];
    let r13 = s.coh[C13];
    let r23 = s.coh[C23];

    let mut d = RhoState {
        pop: [0.0; 4],
        coh: [Complex64::ZERO; 6],
    };
    // Population rows, with the coherent drive terms written in their
    // manifestly real form (−ig(ρ10 − ρ01) = 2g Im ρ10, etc.).
    d.pop[0] = -(p.gamma01 + p.gamma02 + p.gamma03) * p00
        + 2.0 * p.g * r10.im
        + 2.0 * p.omega1 * r20.im
        + 2.0 * p.omega2 * r30.im;
    d.pop[1] = p.gamma01 * p00 + p.gamma21 * p22 + p.gamma31 * p33 - 2.0 * p.g * r10.im;
    d.pop[2] = p.gamma02 * p00 - p.gamma21 * p22 + p.gamma32 * p33 - 2.0 * p.omega1 * r20.im;
    d.pop[3] = p.gamma03 * p00 - (p.gamma31 + p.gamma32) * p33 - 2.0 * p.omega2 * r30.im;

    d.coh[C10] =
        -p.gamma10() * r10 + i * p.g * (p11 - p00) + i * p.omega1 * r12 + i * p.omega2 * r13;
    d.coh[C20] = -p.gamma20() * r20 - i * p.omega1 * p00
        + i * p.g * r12.conj()
        + i * p.omega1 * p22
        + i * p.omega2 * r23;
    d.coh[C30] = -p.gamma30() * r30 - i * p.omega2 * p00
        + i * p.g * r13.conj()
        + i * p.omega1 * r23.conj()
        + i * p.omega2 * p33;
    d.coh[C12] = -p.gamma12c() * r12 - i * p.g * r20.conj() + i * p.omega1 * r10;
    d.coh[C13] = -p.gamma13c() * r13 - i * p.g * r30.conj() + i * p.omega2 * r10;
    d.coh[C23] = -p.gamma23c() * r23 - i * p.omega1 * r30.conj() + i * p.omega2 * r20;
    d
}

/// Max-norm of the equations of motion evaluated on `rho` — how far `rho` is
/// from stationarity.
pub fn steady_state_residual(p: &AtomParams, rho: &DensityMatrix) -> f64 {
    equations_of_motion(p, &RhoState::from_density(rho)).max_norm()
}

/// The vectorized steady-state problem: 16 real unknowns
/// (ρ00, ρ11, ρ22, ρ33, then Re/Im of ρ10, ρ20, ρ30, ρ12, ρ13, ρ23), with the
/// ρ00 evolution row replaced by the trace constraint Σρjj = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSteadyStateSystem {
    /// Row-major 16×16 coefficient matrix.
    pub matrix: Vec<f64>,
    /// Right-hand side; only the trace row is nonzero.
    pub rhs: [f64; 16],
}

pub const N_UNKNOWNS: usize = 16;

// Unknown-vector indices.
const U00: usize = 0;
const U11: usize = 1;
const U22: usize = 2;
const U33: usize = 3;
const X10: usize = 4;
const Y10: usize = 5;
const X20: usize = 6;
const Y20: usize = 7;
const X30: usize = 8;
const Y30: usize = 9;
const X12: usize = 10;
const Y12: usize = 11;
const X13: usize = 12;
const Y13: usize = 13;
const X23: usize = 14;
const Y23: usize = 15;

/// Assemble the steady-state linear system for the given parameters.
///
/// Each complex coherence equation contributes a real-part row and an
/// imaginary-part row; Hermiticity is imposed structurally by expressing
/// conjugate elements through the stored six coherences.
pub fn assemble_steady_state_system(p: &AtomParams) -> LinearSteadyStateSystem {
    let n = N_UNKNOWNS;
    let mut a = vec![0.0; n * n];
    let mut rhs = [0.0; 16];
    let mut set = |row: usize, col: usize, v: f64| {
        a[row * n + col] = v;
    };

    let d12 = p.delta_p - p.delta1;
    let d13 = p.delta_p - p.delta2;
    let d23 = p.delta1 - p.delta2;

    // Trace constraint replaces the ρ00 row.
    set(0, U00, 1.0);
    set(0, U11, 1.0);
    set(0, U22, 1.0);
    set(0, U33, 1.0);
    rhs[0] = 1.0;

    // ρ̇11 = 0
    set(1, U00, p.gamma01);
    set(1, U22, p.gamma21);
    set(1, U33, p.gamma31);
    set(1, Y10, -2.0 * p.g);

    // ρ̇22 = 0
    set(2, U00, p.gamma02);
    set(2, U22, -p.gamma21);
    set(2, U33, p.gamma32);
    set(2, Y20, -2.0 * p.omega1);

    // ρ̇33 = 0
    set(3, U00, p.gamma03);
    set(3, U33, -(p.gamma31 + p.gamma32));
    set(3, Y30, -2.0 * p.omega2);

    // ρ̇10 = 0
    set(4, X10, -p.gamma01);
    set(4, Y10, -p.delta_p);
    set(4, Y12, -p.omega1);
    set(4, Y13, -p.omega2);
    set(5, X10, p.delta_p);
    set(5, Y10, -p.gamma01);
    set(5, U00, -p.g);
    set(5, U11, p.g);
    set(5, X12, p.omega1);
    set(5, X13, p.omega2);

    // ρ̇20 = 0   (uses ρ21 = ρ12*)
    set(6, X20, -p.gamma02);
    set(6, Y20, -p.delta1);
    set(6, Y12, p.g);
    set(6, Y23, -p.omega2);
    set(7, X20, p.delta1);
    set(7, Y20, -p.gamma02);
    set(7, U00, -p.omega1);
    set(7, X12, p.g);
    set(7, U22, p.omega1);
    set(7, X23, p.omega2);

    // ρ̇30 = 0   (uses ρ31 = ρ13*, ρ32 = ρ23*)
    set(8, X30, -p.gamma03);
    set(8, Y30, -p.delta2);
    set(8, Y13, p.g);
    set(8, Y23, p.omega1);
    set(9, X30, p.delta2);
    set(9, Y30, -p.gamma03);
    set(9, U00, -p.omega2);
    set(9, X13, p.g);
    set(9, X23, p.omega1);
    set(9, U33, p.omega2);

    // ρ̇12 = 0   (uses ρ02 = ρ20*)
    set(10, X12, -p.gamma12);
    set(10, Y12, -d12);
    set(10, Y20, -p.g);
    set(10, Y10, -p.omega1);
    set(11, X12, d12);
    set(11, Y12, -p.gamma12);
    set(11, X20, -p.g);
    set(11, X10, p.omega1);

    // ρ̇13 = 0   (uses ρ03 = ρ30*)
    set(12, X13, -p.gamma13);
    set(12, Y13, -d13);
    set(12, Y30, -p.g);
    set(12, Y10, -p.omega2);
    set(13, X13, d13);
    set(13, Y13, -p.gamma13);
    set(13, X30, -p.g);
    set(13, X10, p.omega2);

    // ρ̇23 = 0   (uses ρ03 = ρ30*)
    set(14, X23, -p.gamma23);
    set(14, Y23, -d23);
    set(14, Y30, -p.omega1);
    set(14, Y20, -p.omega2);
    set(15, X23, d23);
    set(15, Y23, -p.gamma23);
    set(15, X30, -p.omega1);
    set(15, X20, p.omega2);

    LinearSteadyStateSystem { matrix: a, rhs }
}

const DEGENERACY_RCOND: f64 = 1e-12;

/// Exact steady state of the tripod equations, via the 16×16 linear solve.
///
/// Fails with [`AtomError::DegenerateSteadyState`] when the stationary state
/// is not unique (reciprocal condition estimate below 1e-12).
pub fn solve_steady_state(p: &AtomParams) -> Result<DensityMatrix, AtomError> {
    let sys = assemble_steady_state_system(p);
    let lu = match LuFactors::factor(&sys.matrix, N_UNKNOWNS) {
        Ok(lu) => lu,
        Err(_) => return Err(AtomError::DegenerateSteadyState { rcond: 0.0 }),
    };
    let rcond = {
        let norm_a = linalg::one_norm(&sys.matrix, N_UNKNOWNS);
        1.0 / (norm_a * lu.inverse_one_norm())
    };
    if rcond < DEGENERACY_RCOND {
        return Err(AtomError::DegenerateSteadyState { rcond });
    }
    let x = lu.solve(&sys.rhs);
    let mut state = RhoState {
        pop: [x[U00], x[U11], x[U22], x[U33]],
        coh: [Complex64::ZERO; 6],
    };
    for c in 0..6 {
        state.coh[c] = Complex64::new(x[X10 + 2 * c], x[Y10 + 2 * c]);
    }
    Ok(DensityMatrix::from_state(&state))
}

/// First-order probe coherences under the weak-field approximation with all
/// population held in |1⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakProbeCoherences {
    pub rho10: Complex64,
    pub rho12: Complex64,
    pub rho13: Complex64,
}

/// ρ10 per unit probe Rabi frequency in the weak-probe limit. Total: exact
/// transparency points return 0, vanished controls drop their term.
pub(crate) fn weak_probe_rho10_unit(p: &AtomParams) -> Complex64 {
    let g12 = p.gamma12c();
    let g13 = p.gamma13c();
    let dark1 = p.omega1 > 0.0 && g12 == Complex64::ZERO;
    let dark2 = p.omega2 > 0.0 && g13 == Complex64::ZERO;
    if dark1 || dark2 {
        return Complex64::ZERO;
    }
    let mut denom = p.gamma10();
    if p.omega1 > 0.0 {
        denom += p.omega1 * p.omega1 / g12;
    }
    if p.omega2 > 0.0 {
        denom += p.omega2 * p.omega2 / g13;
    }
    Complex64::I / denom
}

/// Solve the closed weak-probe 3×3 system
///
/// ```text
/// −Γ10ρ10 + iΩ1ρ12 + iΩ2ρ13 = −ig
/// −Γ12ρ12 + iΩ1ρ10          = 0
/// −Γ13ρ13 + iΩ2ρ10          = 0
/// ```
///
/// by structured elimination. Exact dark points (Γ12 = 0 with Ω1 on, or
/// Γ13 = 0 with Ω2 on) yield ρ10 = 0 with the dark coherence pinned at
/// −g/Ω; a vanished control with its Γ = 0, or both windows degenerate with
/// both controls on, leaves coherences undetermined and raises
/// [`AtomError::SingularWindow`].
pub fn solve_weak_probe_coherences(p: &AtomParams) -> Result<WeakProbeCoherences, AtomError> {
    let g12 = p.gamma12c();
    let g13 = p.gamma13c();
    let zero_row_1 = g12 == Complex64::ZERO && p.omega1 == 0.0;
    let zero_row_2 = g13 == Complex64::ZERO && p.omega2 == 0.0;
    if zero_row_1 || zero_row_2 {
        let windows = match (zero_row_1, zero_row_2) {
            (true, true) => "Δ1 and Δ2 (both controls off)".to_string(),
            (true, false) => format!("Δ1 = {} (control Ω1 off)", p.delta1),
            _ => format!("Δ2 = {} (control Ω2 off)", p.delta2),
        };
        return Err(AtomError::SingularWindow { windows });
    }
    let dark1 = p.omega1 > 0.0 && g12 == Complex64::ZERO;
    let dark2 = p.omega2 > 0.0 && g13 == Complex64::ZERO;
    match (dark1, dark2) {
        (true, true) => Err(AtomError::SingularWindow {
            windows: format!("Δ1 = Δ2 = {} (degenerate windows)", p.delta1),
        }),
        (true, false) => Ok(WeakProbeCoherences {
            rho10: Complex64::ZERO,
            rho12: Complex64::new(-p.g / p.omega1, 0.0),
            rho13: Complex64::ZERO,
        }),
        (false, true) => Ok(WeakProbeCoherences {
            rho10: Complex64::ZERO,
            rho12: Complex64::ZERO,
            rho13: Complex64::new(-p.g / p.omega2, 0.0),
        }),
        (false, false) => {
            let rho10 = p.g * weak_probe_rho10_unit(p);
            let rho12 = if p.omega1 > 0.0 {
                Complex64::I * p.omega1 * rho10 / g12
            } else {
                Complex64::ZERO
            };
            let rho13 = if p.omega2 > 0.0 {
                Complex64::I * p.omega2 * rho10 / g13
            } else {
                Complex64::ZERO
            };
            Ok(WeakProbeCoherences {
                rho10,
                rho12,
                rho13,
            })
        }
    }
}

/// Options for [`evolve_to_steady_state`].
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_max: f64,
    pub tol: f64,
}

impl EvolveOptions {
    /// Step at the stability/accuracy bound for these parameters, generous
    /// horizon, residual tolerance 1e-10.
    pub fn suggested(p: &AtomParams) -> Self {
        EvolveOptions {
            dt: 0.01 / p.max_scale(),
            t_max: 50_000.0,
            tol: 1e-10,
        }
    }
}

/// Integrate the equations of motion with classical fixed-step RK4 until the
/// max-norm of the right-hand side drops below `opts.tol`, or `opts.t_max`
/// is reached (then [`AtomError::NotConverged`]).
///
/// Serves as the independent oracle for [`solve_steady_state`]: the exact
/// steady state is a fixed point of the RK4 map, so the two routes agree to
/// the stopping tolerance divided by the slowest relaxation rate.
pub fn evolve_to_steady_state(
    p: &AtomParams,
    rho0: &DensityMatrix,
    opts: &EvolveOptions,
) -> Result<DensityMatrix, AtomError> {
    let max_dt = 0.01 / p.max_scale();
    // Tiny slack so dt computed as 0.01/max_scale by callers is never
    // rejected for a rounding ulp.
    if !opts.dt.is_finite() || opts.dt <= 0.0 || opts.dt > max_dt * (1.0 + 1e-12) {
        return Err(AtomError::InvalidStep {
            dt: opts.dt,
            max_dt,
        });
    }
    rho0.check_invariants(HERMITICITY_TOL)?;

    let dt = opts.dt;
    let mut state = RhoState::from_density(rho0);
    let mut t = 0.0;
    loop {
        let k1 = equations_of_motion(p, &state);
        let residual = k1.max_norm();
        if residual < opts.tol {
            let out = DensityMatrix::from_state(&state);
            out.check_invariants(1e-8)?;
            return Ok(out);
        }
        if t >= opts.t_max {
            return Err(AtomError::NotConverged {
                residual,
                t_max: opts.t_max,
            });
        }
        let k2 = equations_of_motion(p, &state.axpy(0.5 * dt, &k1));
        let k3 = equations_of_motion(p, &state.axpy(0.5 * dt, &k2));
        let k4 = equations_of_motion(p, &state.axpy(dt, &k3));
        state = state
            .axpy(dt / 6.0, &k1)
            .axpy(dt / 3.0, &k2)
            .axpy(dt / 3.0, &k3)
            .axpy(dt / 6.0, &k4);
        t += dt;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2a() -> AtomParams {
        AtomParams::default()
    }

    #[test]
    fn default_params_validate() {
        fig2a().validate().unwrap();
    }

    #[test]
    fn validation_rejects_negative_rate() {
        let p = AtomParams {
            gamma21: -0.1,
            ..fig2a()
        };
        let err = p.validate().unwrap_err();
        assert_eq!(err.field, "gamma21");
    }

    #[test]
    fn validation_pins_gamma01_scaling() {
        let p = AtomParams {
            gamma01: 2.0,
            ..fig2a()
        };
        assert_eq!(p.validate().unwrap_err().field, "gamma01");
    }

    #[test]
    fn assembly_is_deterministic() {
        let a = assemble_steady_state_system(&fig2a());
        let b = assemble_steady_state_system(&fig2a());
        assert_eq!(a, b);
    }

    #[test]
    fn assembly_decouples_without_fields_or_redistribution() {
        // No couplings: population rows touch only populations, coherence
        // rows touch only their own Re/Im pair.
        let p = AtomParams {
            g: 0.0,
            omega1: 0.0,
            omega2: 0.0,
            gamma21: 0.0,
            gamma31: 0.0,
            gamma32: 0.0,
            ..fig2a()
        };
        let sys = assemble_steady_state_system(&p);
        let n = N_UNKNOWNS;
        for row in 0..4 {
            for col in 4..n {
                assert_eq!(sys.matrix[row * n + col], 0.0, "pop row {row}, col {col}");
            }
        }
        for row in 4..n {
            let pair = (row - 4) / 2;
            for col in 0..n {
                let col_pair = if col >= 4 { (col - 4) / 2 } else { usize::MAX };
                if col_pair != pair {
                    assert_eq!(sys.matrix[row * n + col], 0.0, "coh row {row}, col {col}");
                }
            }
        }
    }

    #[test]
    fn assembly_is_linear_in_probe_detuning() {
        // A(Δp) − A(−Δp) is supported exactly on the Re↔Im cross couplings of
        // the ρ10, ρ12, ρ13 rows, and A(Δp) + A(−Δp) = 2A(0).
        let p = fig2a();
        let minus = AtomParams {
            delta_p: -p.delta_p,
            ..p
        };
        let zero = AtomParams { delta_p: 0.0, ..p };
        let p = AtomParams { delta_p: 0.7, ..p };
        let minus = AtomParams {
            delta_p: -0.7,
            ..minus
        };
        let ap = assemble_steady_state_system(&p).matrix;
        let am = assemble_steady_state_system(&minus).matrix;
        let a0 = assemble_steady_state_system(&zero).matrix;
        let n = N_UNKNOWNS;
        let cross: [(usize, usize); 6] = [
            (4, Y10),
            (5, X10),
            (10, Y12),
            (11, X12),
            (12, Y13),
            (13, X13),
        ];
        for r in 0..n {
            for c in 0..n {
                let idx = r * n + c;
                assert!(
                    (ap[idx] + am[idx] - 2.0 * a0[idx]).abs() < 1e-15,
                    "not affine in Δp at ({r},{c})"
                );
                if !cross.contains(&(r, c)) {
                    assert_eq!(ap[idx], am[idx], "unexpected Δp dependence at ({r},{c})");
                }
            }
        }
        for (r, c) in cross {
            assert!(
                (ap[r * n + c] - am[r * n + c]).abs() > 1.0,
                "missing Δp flip at ({r},{c})"
            );
        }
    }

    #[test]
    fn steady_state_funnels_to_ground_one() {
        let p = AtomParams {
            g: 0.0,
            omega1: 0.0,
            omega2: 0.0,
            gamma21: 0.1,
            gamma31: 0.1,
            gamma32: 0.1,
            ..fig2a()
        };
        let rho = solve_steady_state(&p).unwrap();
        assert!((rho.population(1) - 1.0).abs() < 1e-12);
        for (j, k) in [(0usize, 0usize), (2, 2), (3, 3)] {
            assert!(rho.element(j, k).norm() < 1e-12);
        }
        assert!(steady_state_residual(&p, &rho) < 1e-10);
    }

    #[test]
    fn steady_state_degenerate_without_redistribution() {
        let p = AtomParams {
            g: 0.0,
            omega1: 0.0,
            omega2: 0.0,
            gamma21: 0.0,
            gamma31: 0.0,
            gamma32: 0.0,
            ..fig2a()
        };
        match solve_steady_state(&p) {
            Err(AtomError::DegenerateSteadyState { .. }) => {}
            other => panic!("expected degenerate steady state, got {other:?}"),
        }
    }

    #[test]
    fn steady_state_probe_coherence_matches_weak_probe_value() {
        // Closed-form oracle: ρ10/g = i/(1 + 3.91 i) at Δp = 0.
        let p = fig2a();
        let rho = solve_steady_state(&p).unwrap();
        let expected = Complex64::I / Complex64::new(1.0, 3.91);
        let got = rho.element(1, 0) / p.g;
        assert!(
            (got - expected).norm() / expected.norm() < 1e-3,
            "got {got}, expected {expected}"
        );
        assert!(steady_state_residual(&p, &rho) < 1e-10);
        rho.check_invariants(1e-10).unwrap();
    }

    #[test]
    fn weak_probe_bare_two_level_coherence() {
        let p = AtomParams {
            omega1: 0.0,
            omega2: 0.0,
            delta_p: 0.0,
            gamma12: 0.0,
            gamma13: 0.0,
            gamma23: 0.0,
            ..fig2a()
        };
        let wp = solve_weak_probe_coherences(&p).unwrap();
        assert!((wp.rho10 - Complex64::new(0.0, p.g)).norm() < 1e-15);
        assert_eq!(wp.rho12, Complex64::ZERO);
        assert_eq!(wp.rho13, Complex64::ZERO);
    }

    #[test]
    fn weak_probe_matches_rational_form() {
        // ρ10/g = (3.91 + i)/16.2881 at Δp = 0 with γ ground = 0.
        let p = AtomParams {
            gamma12: 0.0,
            gamma13: 0.0,
            ..fig2a()
        };
        let wp = solve_weak_probe_coherences(&p).unwrap();
        let expected = Complex64::new(3.91, 1.0) / 16.2881 * p.g;
        assert!((wp.rho10 - expected).norm() < 1e-12);
    }

    #[test]
    fn weak_probe_exact_dark_state() {
        // Δp = Δ2, γ13 = 0, Ω2 on: probe coherence exactly zero and the dark
        // ground coherence pinned at −g/Ω2.
        let p = AtomParams {
            delta_p: 1.0,
            delta2: 1.0,
            omega2: 0.3,
            gamma13: 0.0,
            ..fig2a()
        };
        let wp = solve_weak_probe_coherences(&p).unwrap();
        assert_eq!(wp.rho10, Complex64::ZERO);
        assert!((wp.rho13 - Complex64::new(-p.g / p.omega2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn weak_probe_singular_when_control_off_on_its_window() {
        let p = AtomParams {
            omega1: 0.0,
            delta_p: -1.0, // exactly on the Δ1 window
            gamma12: 0.0,
            ..fig2a()
        };
        match solve_weak_probe_coherences(&p) {
            Err(AtomError::SingularWindow { windows }) => {
                assert!(windows.contains("Δ1"), "got {windows}");
            }
            other => panic!("expected SingularWindow, got {other:?}"),
        }
    }

    #[test]
    fn weak_probe_singular_when_windows_degenerate() {
        let p = AtomParams {
            delta_p: 0.5,
            delta1: 0.5,
            delta2: 0.5,
            gamma12: 0.0,
            gamma13: 0.0,
            ..fig2a()
        };
        match solve_weak_probe_coherences(&p) {
            Err(AtomError::SingularWindow { windows }) => {
                assert!(windows.contains("degenerate"), "got {windows}");
            }
            other => panic!("expected SingularWindow, got {other:?}"),
        }
    }

    #[test]
    fn weak_probe_coherence_rows_solve_the_assembled_system() {
        // Embedding the weak-probe solution (ρ11 = 1) into the 16-unknown
        // vector must annihilate the assembled ρ10, ρ12, ρ13 rows: the matrix
        // and the closed-form route encode the same equations.
        let p = AtomParams {
            gamma12: 0.0,
            gamma13: 0.0,
            gamma21: 0.0,
            gamma31: 0.0,
            gamma32: 0.0,
            ..fig2a()
        };
        let wp = solve_weak_probe_coherences(&p).unwrap();
        let sys = assemble_steady_state_system(&p);
        let mut x = [0.0; N_UNKNOWNS];
        x[U11] = 1.0;
        x[X10] = wp.rho10.re;
        x[Y10] = wp.rho10.im;
        x[X12] = wp.rho12.re;
        x[Y12] = wp.rho12.im;
        x[X13] = wp.rho13.re;
        x[Y13] = wp.rho13.im;
        for row in [4usize, 5, 10, 11, 12, 13] {
            let acc: f64 = x
                .iter()
                .enumerate()
                .map(|(col, v)| sys.matrix[row * N_UNKNOWNS + col] * v)
                .sum();
            assert!(acc.abs() < 1e-15, "row {row} residual {acc:.3e}");
        }
    }

    #[test]
    fn evolve_rejects_oversized_step() {
        let p = fig2a();
        let opts = EvolveOptions {
            dt: 0.1,
            t_max: 10.0,
            tol: 1e-10,
        };
        match evolve_to_steady_state(&p, &DensityMatrix::pure(1), &opts) {
            Err(AtomError::InvalidStep { .. }) => {}
            other => panic!("expected InvalidStep, got {other:?}"),
        }
    }

    #[test]
    fn evolve_fixed_point_returns_immediately() {
        let p = fig2a();
        let rho = solve_steady_state(&p).unwrap();
        let opts = EvolveOptions {
            t_max: 0.0, // any step would raise NotConverged; residual < tol wins first
            ..EvolveOptions::suggested(&p)
        };
        let out = evolve_to_steady_state(&p, &rho, &opts).unwrap();
        assert!(rho.max_abs_diff(&out) < 1e-14);
    }

    #[test]
    fn evolve_pure_decay_repopulates_ground_one() {
        let p = AtomParams {
            g: 0.0,
            omega1: 0.0,
            omega2: 0.0,
            gamma21: 0.1,
            gamma31: 0.0,
            gamma32: 0.0,
            ..fig2a()
        };
        let opts = EvolveOptions::suggested(&p);
        let rho = evolve_to_steady_state(&p, &DensityMatrix::pure(2), &opts).unwrap();
        assert!((rho.population(1) - 1.0).abs() < 1e-8);
        assert!(rho.population(2).abs() < 1e-8);
    }

    #[test]
    fn evolve_not_converged_reports_residual() {
        let p = AtomParams {
            g: 0.0,
            omega1: 0.0,
            omega2: 0.0,
            gamma21: 0.1,
            gamma31: 0.0,
            gamma32: 0.0,
            ..fig2a()
        };
        let opts = EvolveOptions {
            t_max: 0.5,
            ..EvolveOptions::suggested(&p)
        };
        match evolve_to_steady_state(&p, &DensityMatrix::pure(2), &opts) {
            Err(AtomError::NotConverged { residual, .. }) => assert!(residual > 1e-3),
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn evolve_agrees_with_linear_solve() {
        let p = fig2a();
        let opts = EvolveOptions::suggested(&p);
        let direct = solve_steady_state(&p).unwrap();
        let evolved = evolve_to_steady_state(&p, &DensityMatrix::pure(1), &opts).unwrap();
        assert!(direct.max_abs_diff(&evolved) < 1e-6);
    }

    #[test]
    fn trace_and_hermiticity_hold_along_trajectory() {
        let p = AtomParams {
            delta_p: 0.4,
            ..fig2a()
        };
        let dt = 0.01 / p.max_scale();
        let mut state = RhoState::from_density(&DensityMatrix::pure(1));
        let mut worst_trace: f64 = 0.0;
        for _ in 0..20_000 {
            let k1 = equations_of_motion(&p, &state);
            let k2 = equations_of_motion(&p, &state.axpy(0.5 * dt, &k1));
            let k3 = equations_of_motion(&p, &state.axpy(0.5 * dt, &k2));
            let k4 = equations_of_motion(&p, &state.axpy(dt, &k3));
            state = state
                .axpy(dt / 6.0, &k1)
                .axpy(dt / 3.0, &k2)
                .axpy(dt / 3.0, &k3)
                .axpy(dt / 6.0, &k4);
            let trace: f64 = state.pop.iter().sum();
            worst_trace = worst_trace.max((trace - 1.0).abs());
        }
        assert!(worst_trace < 1e-8, "trace drifted by {worst_trace:.3e}");
        // Hermiticity is structural for the packed state.
        assert_eq!(DensityMatrix::from_state(&state).hermiticity_defect(), 0.0);
    }

    #[test]
    fn steady_state_invariant_under_time_rescaling() {
        // Scaling every rate, Rabi frequency and detuning by s rescales time
        // units and leaves the steady state unchanged.
        let p = fig2a();
        let s = 3.7;
        let scaled = AtomParams {
            gamma01: s * p.gamma01,
            gamma02: s * p.gamma02,
            gamma03: s * p.gamma03,
            gamma21: s * p.gamma21,
            gamma31: s * p.gamma31,
            gamma32: s * p.gamma32,
            gamma12: s * p.gamma12,
            gamma13: s * p.gamma13,
            gamma23: s * p.gamma23,
            g: s * p.g,
            omega1: s * p.omega1,
            omega2: s * p.omega2,
            delta_p: s * p.delta_p,
            delta1: s * p.delta1,
            delta2: s * p.delta2,
        };
        let a = solve_steady_state(&p).unwrap();
        let b = solve_steady_state(&scaled).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-11);
    }

    #[test]
    fn weak_probe_limit_of_full_solve_without_ground_decay() {
        // g → 0 with γ ground = 0 and no redistribution: the full solve's
        // ρ10/g approaches the weak-probe value.
        let p = AtomParams {
            gamma12: 0.0,
            gamma13: 0.0,
            gamma23: 0.0,
            gamma21: 0.0,
            gamma31: 0.0,
            gamma32: 0.0,
            g: 1e-3,
            ..fig2a()
        };
        let full = solve_steady_state(&p).unwrap();
        let wp = solve_weak_probe_coherences(&p).unwrap();
        let a = full.element(1, 0) / p.g;
        let b = wp.rho10 / p.g;
        assert!((a - b).norm() / b.norm() < 1e-3);
    }

    #[test]
    fn density_matrix_rejects_bad_trace() {
        assert!(DensityMatrix::from_populations([0.5, 0.2, 0.2, 0.2]).is_err());
    }

    #[test]
    fn density_matrix_rejects_out_of_range_diagonal() {
        assert!(DensityMatrix::from_populations([1.5, -0.5, 0.0, 0.0]).is_err());
    }

    #[test]
    fn density_matrix_rejects_non_hermitian() {
        let mut m = [[Complex64::ZERO; 4]; 4];
        m[1][1] = Complex64::ONE;
        m[0][1] = Complex64::new(0.1, 0.0);
        m[1][0] = Complex64::new(0.2, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());
    }
}
