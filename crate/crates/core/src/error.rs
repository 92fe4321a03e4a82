//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by model evaluation, equilibrium enumeration, transition
/// analysis, and time integration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("state (T={t}, p={p}) is outside the model validity box")]
    OutsideValidityBox { t: f64, p: f64 },

    #[error("coefficient {name} = {value} violates positivity at (T={t}, p={p})")]
    PositivityViolation {
        name: &'static str,
        value: f64,
        t: f64,
        p: f64,
    },

    #[error("cubic coefficient a3 = {a3} is not positive")]
    NonPositiveCubic { a3: f64 },

    #[error("equilibrium set contains no stable root")]
    NoStableRoot,

    #[error("state is not critical: |lambda| = {lambda_abs} exceeds tolerance {tol}")]
    NotCritical { lambda_abs: f64, tol: f64 },

    #[error("no convergence after {iterations} iterations (residual norm {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian in Newton solve")]
    SingularJacobian,

    #[error("discriminant has no zero in the scanned window")]
    NoFoldInWindow,

    #[error("lambda has no zero crossing in the scanned T window at p = {p}")]
    NoSignChange { p: f64 },

    #[error("transition at the requested state is not first order (a2 = {a2})")]
    NotFirstOrder { a2: f64 },

    #[error("transition at the requested state is not second order (a2 = {a2})")]
    NotSecondOrder { a2: f64 },

    #[error("requested equilibrium branch does not exist (discriminant = {discriminant})")]
    BranchMissing { discriminant: f64 },

    #[error("adaptive step size underflow at t = {t} (h = {h})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("explicit scheme violates the diffusive CFL bound: dt = {dt} > {dt_max}")]
    CflViolation { dt: f64, dt_max: f64 },

    #[error("discrete energy increased by {increase} at step {step}, beyond the audit tolerance")]
    EnergyAuditFailed { step: usize, increase: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
