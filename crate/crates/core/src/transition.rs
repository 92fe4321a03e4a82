//! Local transition classification at a critical state.
//!
//! At a critical point the reduced dynamics
//! `d rho/dt = lambda rho + a2 rho^2 - a3 rho^3` has `lambda = 0`, and the
//! leading nonlinearity decides everything: for `a2 = 0` the leading term is
//! `-a3 rho^3` (odd order, negative coefficient, continuous transition); for
//! `a2 != 0` it is `a2 rho^2` (even order, mixed transition with a fold
//! nearby). The thermodynamic order follows the sign of `a2`: positive gives
//! a first-order jump with latent heat, zero a second-order point with a
//! heat-capacity jump, negative a third-order point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LandauLocal, ReducedCoeffs, ThermoState};

/// Default tolerance below which `lambda` counts as critical.
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-8;
/// Default tolerance below which `a2` counts as zero.
pub const DEFAULT_A2_TOL: f64 = 1e-8;

/// Dynamic transition class: continuous, jump, or mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DynamicType {
    /// Continuous exchange of stable states (odd leading order, negative
    /// coefficient).
    I,
    /// Pure jump (odd leading order, positive coefficient); unreachable here
    /// while the cubic coefficient stays positive.
    II,
    /// Mixed continuous/jump behavior (even leading order).
    III,
}

/// Thermodynamic order of the transition in the Ehrenfest sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThermoOrder {
    First,
    Second,
    Third,
}

/// Location of a saddle-node (fold) point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddleNode {
    pub t1: f64,
    pub p1: f64,
    /// Offset of the colliding pair from the reference density, `a2/(2 a3)`.
    pub rho_sn: f64,
}

/// Local classification data computed from the reduced coefficients alone.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocalClassification {
    pub dynamic_type: DynamicType,
    pub thermo_order: ThermoOrder,
    /// Leading order `k` of the nonlinearity on the center subspace.
    pub leading_order: u32,
    /// Coefficient of the leading term: `a2` when `k = 2`, `-a3` when `k = 3`.
    pub leading_coeff: f64,
}

/// Full report assembled by the front end.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionReport {
    pub dynamic_type: DynamicType,
    pub thermo_order: ThermoOrder,
    pub critical_state: ThermoState,
    pub rho0: f64,
    pub reduced: ReducedCoeffs,
    pub leading_order: u32,
    pub leading_coeff: f64,
    pub saddle_node: Option<SaddleNode>,
    pub notes: String,
}

/// Classify the transition at a critical point from its reduced coefficients.
///
/// Requires `|lambda| <= lambda_tol`; `a2` within `a2_tol` of zero selects the
/// cubic branch.
pub fn classify_local(
    rc: &ReducedCoeffs,
    lambda_tol: f64,
    a2_tol: f64,
) -> Result<LocalClassification> {
    if rc.lambda().abs() > lambda_tol {
        return Err(Error::NotCritical {
            lambda_abs: rc.lambda().abs(),
            tol: lambda_tol,
        });
    }
    Ok(if rc.a2().abs() <= a2_tol {
        LocalClassification {
            dynamic_type: DynamicType::I,
            thermo_order: ThermoOrder::Second,
            leading_order: 3,
            leading_coeff: -rc.a3(),
        }
    } else {
        LocalClassification {
            dynamic_type: DynamicType::III,
            thermo_order: if rc.a2() > 0.0 {
                ThermoOrder::First
            } else {
                ThermoOrder::Third
            },
            leading_order: 2,
            leading_coeff: rc.a2(),
        }
    })
}

/// Thermodynamic order from the sign of `a2` at a critical point.
pub fn transition_order(rc: &ReducedCoeffs, lambda_tol: f64, a2_tol: f64) -> Result<ThermoOrder> {
    classify_local(rc, lambda_tol, a2_tol).map(|c| c.thermo_order)
}

/// Free-energy values on the three equilibrium branches relative to the
/// reference state,
/// `G(rho0 + rho_pm) = G(rho0) - lambda/4 (rho_pm)^2 - a2/12 (rho_pm)^3`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchEnergies {
    pub g_plus: f64,
    pub g_minus: f64,
    pub g_zero: f64,
}

/// Evaluate the equilibrium free energies given `G` at the reference state.
/// Fails with `BranchMissing` when the transition pair does not exist.
pub fn free_energy_at_equilibria(rc: &ReducedCoeffs, g_at_rho0: f64) -> Result<BranchEnergies> {
    let (minus, plus) = rc.transition_pair().ok_or(Error::BranchMissing {
        discriminant: rc.discriminant(),
    })?;
    let gap = |x: f64| -0.25 * rc.lambda() * x * x - rc.a2() * x * x * x / 12.0;
    Ok(BranchEnergies {
        g_plus: g_at_rho0 + gap(plus),
        g_minus: g_at_rho0 + gap(minus),
        g_zero: g_at_rho0,
    })
}

/// Heat-capacity jump at a second-order point,
/// `Delta C = alpha_slope^2 T_C / (2 a3)`.
pub fn heat_capacity_jump(landau: &LandauLocal) -> Result<f64> {
    if landau.a2.abs() > DEFAULT_A2_TOL {
        return Err(Error::NotSecondOrder { a2: landau.a2 });
    }
    Ok(landau.alpha_slope * landau.alpha_slope * landau.t_c / (2.0 * landau.a3))
}
