//! Equilibrium phase-transition analysis for single-species PVT fluids.
//!
//! The model couples a molar-density order parameter to an entropy variable
//! through a quartic free energy whose coefficients depend on temperature and
//! pressure. Eliminating the fast entropy mode leaves a scalar gradient flow
//! with a cubic right-hand side; shifting to a reference steady state reduces
//! it to `d rho/dt = lambda rho + a2 rho^2 - a3 rho^3`, and the pair
//! `(lambda, a2)` organizes the whole phase diagram:
//!
//! - `lambda = 0` traces the critical curve `T = phi(p)`;
//! - the sign of `a2` on that curve decides the transition order (first,
//!   second at the Andrews point `a2 = 0`, third);
//! - `a2^2 + 4 a3 lambda = 0` locates the saddle-node fold that bounds the
//!   metastable window.
//!
//! The crate provides the coefficient model and van der Waals correspondence
//! ([`model`]), steady-state enumeration with stability ([`equilibria`]),
//! transition classification ([`transition`]), curve tracing and
//! thermodynamic signatures ([`curves`]), and time integration of the
//! homogeneous ([`ode`]) and spatially extended ([`pde`]) dynamics with
//! free-energy dissipation audits.

pub mod cubic;
pub mod curves;
pub mod equilibria;
pub mod error;
pub mod model;
pub mod ode;
pub mod pde;
pub mod solve;
pub mod transition;

pub use curves::{
    andrews_point, coexistence_trace, critical_curve_trace, critical_point_at_p,
    maxwell_t_star, metastable_window, saddle_node_locate_p, saddle_node_locate_t,
    thermo_signature, transition_functions, transition_report, AndrewsPoint, CoexistenceCurve,
    CriticalCurve, MetastableWindow, ThermoSignature, TransitionFunctions,
};
pub use equilibria::{
    coupled_jacobian_eigs, full_steady_states, gas_branch_select, reduced_steady_states, Branch,
    Equilibrium, EquilibriumSet, Stability, DEFAULT_ROOT_TOL,
};
pub use error::{Error, Result};
pub use model::{
    CoefficientModel, CoefficientValues, LandauLocal, LandauModelSpec, Poly2, Preset,
    ReducedCoeffs, ThermoState, ValidityBox, VdwParams,
};
pub use ode::{
    basin_probe, integrate_coupled, integrate_full, integrate_reduced, lyapunov_audit,
    BasinLabel, IntegratorConfig, Scheme, TrajSample, Trajectory,
};
pub use pde::{discrete_energy, simulate, step, Field1D, PdeConfig, PdeScheme, SimResult};
pub use transition::{
    classify_local, free_energy_at_equilibria, heat_capacity_jump, transition_order,
    BranchEnergies, DynamicType, LocalClassification, SaddleNode, ThermoOrder, TransitionReport,
};
