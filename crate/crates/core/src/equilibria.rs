//! Steady states of the reduced and entropy-eliminated density dynamics and
//! of the coupled density/entropy system, with stability labels.

use serde::Serialize;
use serde_json::json;

use crate::cubic::solve_cubic;
use crate::error::{Error, Result};
use crate::model::{CoefficientModel, ReducedCoeffs, ThermoState};

/// Default absolute residual tolerance for root acceptance.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

/// Branch tag for reduced-equation roots; `Zero` is the reference state,
/// `Plus`/`Minus` the transition pair, `Unlabeled` everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Zero,
    Plus,
    Minus,
    Unlabeled,
}

/// One steady state with its local stability data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Equilibrium {
    /// Root location: an offset from `rho0` for reduced-equation roots,
    /// an absolute density for full-equation roots.
    pub rho: f64,
    pub stability: Stability,
    pub branch: Branch,
    /// Derivative of the vector field at the root; stable iff negative.
    pub fprime: f64,
    /// Number of near-coincident analytic roots merged into this entry.
    pub multiplicity: u32,
}

impl Equilibrium {
    pub fn is_stable(&self) -> bool {
        self.stability == Stability::Stable
    }

    fn new(rho: f64, fprime: f64, branch: Branch) -> Self {
        let stability = if fprime < 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        Self {
            rho,
            stability,
            branch,
            fprime,
            multiplicity: 1,
        }
    }
}

/// Steady states sorted ascending in `rho`.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
    /// `a2^2 + 4 a3 lambda` for reduced-equation sets, absent otherwise.
    pub discriminant: Option<f64>,
}

impl EquilibriumSet {
    pub fn stable(&self) -> impl Iterator<Item = &Equilibrium> {
        self.equilibria.iter().filter(|e| e.is_stable())
    }

    pub fn len(&self) -> usize {
        self.equilibria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty()
    }

    /// Documented JSON form:
    /// `{ "discriminant": ..., "roots": [{"rho", "stable", "branch"}] }`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "discriminant": self.discriminant,
            "roots": self.equilibria.iter().map(|e| json!({
                "rho": e.rho,
                "stable": e.is_stable(),
                "branch": e.branch,
            })).collect::<Vec<_>>(),
        })
    }

    fn from_roots(mut entries: Vec<Equilibrium>, tol: f64, discriminant: Option<f64>) -> Self {
        entries.sort_by(|a, b| a.rho.partial_cmp(&b.rho).unwrap());
        // Merge roots closer than the tolerance, preferring the labeled
        // branch of the pair.
        let mut merged: Vec<Equilibrium> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if (e.rho - last.rho).abs() <= tol => {
                    last.multiplicity += e.multiplicity;
                    if last.branch == Branch::Unlabeled {
                        last.branch = e.branch;
                    }
                    // A merged pair sits at a degenerate root; keep the more
                    // conservative (unstable) label when the signs disagree.
                    if e.stability == Stability::Unstable {
                        last.stability = Stability::Unstable;
                    }
                }
                _ => merged.push(e),
            }
        }
        Self {
            equilibria: merged,
            discriminant,
        }
    }
}

/// Roots of `lambda x + a2 x^2 - a3 x^3 = 0` with stability from the sign of
/// `lambda + 2 a2 x - 3 a3 x^2`.
///
/// Returns `{0, rho-, rho+}` for a positive discriminant, `{0, double root}`
/// when `|disc| <= tol^2`, and `{0}` otherwise.
pub fn reduced_steady_states(rc: &ReducedCoeffs, tol: f64) -> EquilibriumSet {
    let disc = rc.discriminant();
    let tol2 = tol * tol;
    let mut entries = vec![Equilibrium::new(0.0, rc.rhs_prime(0.0), Branch::Zero)];
    if disc > tol2 {
        let (minus, plus) = rc.transition_pair().expect("positive discriminant");
        entries.push(Equilibrium::new(minus, rc.rhs_prime(minus), Branch::Minus));
        entries.push(Equilibrium::new(plus, rc.rhs_prime(plus), Branch::Plus));
    } else if disc >= -tol2 {
        let x = rc.double_root();
        let mut e = Equilibrium::new(x, rc.rhs_prime(x), Branch::Unlabeled);
        e.multiplicity = 2;
        entries.push(e);
    }
    EquilibriumSet::from_roots(entries, tol, Some(disc))
}

/// All real roots of the entropy-eliminated steady-state equation
/// `-(alpha1 + b p + 2 beta2 T / beta1) rho + alpha2 rho^2 - a3 rho^3 + p = 0`,
/// found in closed form and polished by Newton to `|residual| < tol`.
pub fn full_steady_states(
    state: ThermoState,
    model: &CoefficientModel,
    tol: f64,
) -> Result<EquilibriumSet> {
    let c = model.eval_coefficients(state)?;
    let a3 = c.cubic_coeff();
    if !(a3 > crate::model::MIN_CUBIC_COEFF) {
        return Err(Error::NonPositiveCubic { a3 });
    }
    let linear = c.linear_coeff(state);
    let roots = solve_cubic(-a3, c.alpha2, -linear, state.p);
    let mut entries = Vec::with_capacity(roots.len());
    for mut r in roots {
        // One extra Newton pass against the model residual.
        for _ in 0..3 {
            let f = c.density_rhs(r, state);
            if f.abs() < tol {
                break;
            }
            let fp = c.density_rhs_prime(r, state);
            if fp.abs() < 1e-30 {
                break;
            }
            r -= f / fp;
        }
        entries.push(Equilibrium::new(
            r,
            c.density_rhs_prime(r, state),
            Branch::Unlabeled,
        ));
    }
    Ok(EquilibriumSet::from_roots(entries, tol, None))
}

/// Eigenvalues of the 2x2 Jacobian of the coupled density/entropy dynamics at
/// `(rho, s)`, returned ascending. The Jacobian is symmetric, so both are
/// real.
pub fn coupled_jacobian_eigs(
    rho: f64,
    s: f64,
    state: ThermoState,
    model: &CoefficientModel,
) -> Result<(f64, f64)> {
    let c = model.eval_coefficients(state)?;
    let j11 = -(c.alpha1 + c.b * state.p) + 2.0 * c.alpha2 * rho
        - 3.0 * c.alpha3 * rho * rho
        - 2.0 * c.beta2 * s;
    let j12 = -2.0 * c.beta2 * rho;
    let j22 = -c.beta1;
    let mean = 0.5 * (j11 + j22);
    let half_gap = 0.5 * (j11 - j22);
    let radius = (half_gap * half_gap + j12 * j12).sqrt();
    Ok((mean - radius, mean + radius))
}

/// The gas-branch reference density: the smallest stable nonnegative root,
/// falling back to the smallest stable root when none is nonnegative.
pub fn gas_branch_select(set: &EquilibriumSet) -> Result<f64> {
    let mut stable = set.stable().map(|e| e.rho).collect::<Vec<_>>();
    if stable.is_empty() {
        return Err(Error::NoStableRoot);
    }
    stable.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(stable
        .iter()
        .copied()
        .find(|&r| r >= 0.0)
        .unwrap_or(stable[0]))
}
