//! Time integration of the reduced, entropy-eliminated, and coupled
//! dynamics, with free-energy dissipation auditing and basin probing.

use serde::Serialize;

use crate::equilibria::{full_steady_states, reduced_steady_states, Branch, DEFAULT_ROOT_TOL};
use crate::error::{Error, Result};
use crate::model::{CoefficientModel, ReducedCoeffs, ThermoState};

/// Number of consecutive accepted steps inside `convergence_eps` before a
/// trajectory is labeled converged; guards against false positives near a
/// slow saddle passage.
pub const DWELL_STEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Rk4Fixed,
    Rk45Adaptive,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    /// Step size for the fixed scheme, initial step for the adaptive one.
    pub dt: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub t_end: f64,
    /// Radius for equilibrium detection.
    pub convergence_eps: f64,
    pub dwell_steps: usize,
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            scheme: Scheme::Rk4Fixed,
            dt,
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            t_end,
            convergence_eps: 1e-8,
            dwell_steps: DWELL_STEPS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn rk45(t_end: f64) -> Result<Self> {
        let cfg = Self {
            scheme: Scheme::Rk45Adaptive,
            dt: (t_end / 100.0).min(0.1),
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            t_end,
            convergence_eps: 1e-8,
            dwell_steps: DWELL_STEPS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0) {
            return Err(Error::InvalidInput(format!(
                "dt = {} and t_end = {} must be positive",
                self.dt, self.t_end
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.convergence_eps > 0.0) {
            return Err(Error::InvalidInput(
                "tolerances and convergence_eps must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajSample {
    pub t: f64,
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergedTo {
    pub rho: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajSample>,
    pub converged_to: Option<ConvergedTo>,
}

impl Trajectory {
    pub fn terminal(&self) -> &TrajSample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    /// CSV with columns `t,rho` or `t,rho,S`.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        let with_s = self.samples.first().map_or(false, |s| s.s.is_some());
        if with_s {
            writeln!(w, "t,rho,S")?;
        } else {
            writeln!(w, "t,rho")?;
        }
        for s in &self.samples {
            match s.s {
                Some(sv) => writeln!(w, "{},{},{}", s.t, s.rho, sv)?,
                None => writeln!(w, "{},{}", s.t, s.rho)?,
            }
        }
        Ok(())
    }

    /// JSON with the integrator configuration echoed for reproducibility.
    pub fn to_json(&self, cfg: &IntegratorConfig) -> serde_json::Value {
        serde_json::json!({
            "config": cfg,
            "converged_to": self.converged_to,
            "samples": self.samples,
        })
    }
}

/// Known equilibria used for convergence labeling: `(location, branch)` in
/// the integrated coordinates.
type Labels = Vec<(f64, Branch)>;

struct Integration<const N: usize> {
    samples: Vec<(f64, [f64; N])>,
    converged_to: Option<ConvergedTo>,
}

fn integrate_system<const N: usize, F>(
    f: F,
    y0: [f64; N],
    cfg: &IntegratorConfig,
    labels: &Labels,
    target: impl Fn(&[f64; N], f64) -> f64,
) -> Result<Integration<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    cfg.validate()?;
    let mut samples = vec![(0.0, y0)];
    let mut y = y0;
    let mut t = 0.0;
    let mut dwell = 0usize;
    let mut converged: Option<ConvergedTo> = None;
    let mut h = cfg.dt.min(cfg.t_end);

    let check_dwell = |y: &[f64; N], dwell: &mut usize| -> Option<ConvergedTo> {
        let mut best: Option<(f64, f64, Branch)> = None;
        for &(rho_star, branch) in labels {
            let d = target(y, rho_star);
            if best.map_or(true, |(bd, _, _)| d < bd) {
                best = Some((d, rho_star, branch));
            }
        }
        match best {
            Some((d, rho_star, branch)) if d < cfg.convergence_eps => {
                *dwell += 1;
                if *dwell >= cfg.dwell_steps {
                    Some(ConvergedTo {
                        rho: rho_star,
                        branch,
                    })
                } else {
                    None
                }
            }
            _ => {
                *dwell = 0;
                None
            }
        }
    };

    match cfg.scheme {
        Scheme::Rk4Fixed => {
            while t < cfg.t_end - 1e-15 * (1.0 + cfg.t_end) {
                let step = h.min(cfg.t_end - t);
                y = rk4_step(&f, &y, step);
                if y.iter().any(|v| !v.is_finite()) {
                    // Blown-up trajectories are recorded as-is; the energy
                    // audit surfaces the instability.
                    t += step;
                    samples.push((t, y));
                    break;
                }
                t += step;
                samples.push((t, y));
                if converged.is_none() {
                    converged = check_dwell(&y, &mut dwell);
                }
            }
        }
        Scheme::Rk45Adaptive => {
            while t < cfg.t_end - 1e-15 * (1.0 + cfg.t_end) {
                h = h.min(cfg.t_end - t);
                if h < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::StepSizeUnderflow { t, h });
                }
                let (y_new, err_norm) = dopri_step(&f, &y, h, cfg.abs_tol, cfg.rel_tol);
                if err_norm <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                    t += h;
                    y = y_new;
                    samples.push((t, y));
                    if converged.is_none() {
                        converged = check_dwell(&y, &mut dwell);
                    }
                    let factor = if err_norm == 0.0 {
                        5.0
                    } else {
                        (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    h *= factor;
                } else if err_norm.is_finite() {
                    h *= (0.9 * err_norm.powf(-0.2)).clamp(0.2, 0.9);
                } else {
                    h *= 0.2;
                }
            }
        }
    }
    Ok(Integration {
        samples,
        converged_to: converged,
    })
}

fn rk4_step<const N: usize, F: Fn(&[f64; N]) -> [f64; N]>(f: &F, y: &[f64; N], h: f64) -> [f64; N] {
    let k1 = f(y);
    let k2 = f(&add(y, &k1, 0.5 * h));
    let k3 = f(&add(y, &k2, 0.5 * h));
    let k4 = f(&add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn add<const N: usize>(y: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

/// One Dormand-Prince 5(4) step; returns the 5th-order solution and the
/// scaled error norm of the embedded pair.
fn dopri_step<const N: usize, F: Fn(&[f64; N]) -> [f64; N]>(
    f: &F,
    y: &[f64; N],
    h: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> ([f64; N], f64) {
    const A: [[f64; 6]; 6] = [
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut k = [[0.0; N]; 7];
    k[0] = f(y);
    for stage in 1..7 {
        let mut arg = *y;
        for j in 0..stage {
            let a = A[stage - 1][j];
            if a != 0.0 {
                for i in 0..N {
                    arg[i] += h * a * k[j][i];
                }
            }
        }
        k[stage] = f(&arg);
    }
    let mut y5 = *y;
    let mut y4 = *y;
    for j in 0..7 {
        for i in 0..N {
            y5[i] += h * B5[j] * k[j][i];
            y4[i] += h * B4[j] * k[j][i];
        }
    }
    let mut err_norm = 0.0f64;
    for i in 0..N {
        let scale = abs_tol + rel_tol * y[i].abs().max(y5[i].abs());
        err_norm = err_norm.max(((y5[i] - y4[i]) / scale).abs());
    }
    (y5, err_norm)
}

/// Integrate `d rho/dt = lambda rho + a2 rho^2 - a3 rho^3` from `rho_init`.
pub fn integrate_reduced(
    rc: &ReducedCoeffs,
    rho_init: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let set = reduced_steady_states(rc, DEFAULT_ROOT_TOL);
    let labels: Labels = set.equilibria.iter().map(|e| (e.rho, e.branch)).collect();
    let run = integrate_system(
        |y: &[f64; 1]| [rc.rhs(y[0])],
        [rho_init],
        cfg,
        &labels,
        |y, r| (y[0] - r).abs(),
    )?;
    Ok(Trajectory {
        samples: run
            .samples
            .into_iter()
            .map(|(t, y)| TrajSample {
                t,
                rho: y[0],
                s: None,
            })
            .collect(),
        converged_to: run.converged_to,
    })
}

/// Integrate the entropy-eliminated density dynamics at fixed `(T, p)`.
pub fn integrate_full(
    state: ThermoState,
    model: &CoefficientModel,
    rho_init: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let c = model.eval_coefficients(state)?;
    let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
    let labels: Labels = set.equilibria.iter().map(|e| (e.rho, e.branch)).collect();
    let run = integrate_system(
        |y: &[f64; 1]| [c.density_rhs(y[0], state)],
        [rho_init],
        cfg,
        &labels,
        |y, r| (y[0] - r).abs(),
    )?;
    Ok(Trajectory {
        samples: run
            .samples
            .into_iter()
            .map(|(t, y)| TrajSample {
                t,
                rho: y[0],
                s: None,
            })
            .collect(),
        converged_to: run.converged_to,
    })
}

/// Integrate the coupled density/entropy dynamics at fixed `(T, p)`.
pub fn integrate_coupled(
    state: ThermoState,
    model: &CoefficientModel,
    rho_init: f64,
    s_init: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let c = model.eval_coefficients(state)?;
    let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
    // Convergence targets on the slaved manifold.
    let slaved = |rho: f64| (state.t - c.beta2 * rho * rho) / c.beta1;
    let labels: Labels = set.equilibria.iter().map(|e| (e.rho, e.branch)).collect();
    let run = integrate_system(
        |y: &[f64; 2]| {
            let (rho, s) = (y[0], y[1]);
            [
                -(c.alpha1 + c.b * state.p) * rho + c.alpha2 * rho * rho
                    - c.alpha3 * rho * rho * rho
                    - 2.0 * c.beta2 * s * rho
                    + state.p,
                -c.beta1 * s - c.beta2 * rho * rho + state.t,
            ]
        },
        [rho_init, s_init],
        cfg,
        &labels,
        move |y, r| (y[0] - r).abs().max((y[1] - slaved(r)).abs()),
    )?;
    Ok(Trajectory {
        samples: run
            .samples
            .into_iter()
            .map(|(t, y)| TrajSample {
                t,
                rho: y[0],
                s: Some(y[1]),
            })
            .collect(),
        converged_to: run.converged_to,
    })
}

/// Maximum energy increase between consecutive samples; a gradient flow
/// integrated within tolerance keeps this at round-off level.
pub fn lyapunov_audit<F>(traj: &Trajectory, energy: F) -> f64
where
    F: Fn(&TrajSample) -> f64,
{
    let mut max_increase = f64::NEG_INFINITY;
    for pair in traj.samples.windows(2) {
        let increase = energy(&pair[1]) - energy(&pair[0]);
        if increase > max_increase {
            max_increase = increase;
        }
    }
    if max_increase == f64::NEG_INFINITY {
        0.0
    } else {
        max_increase
    }
}

/// Per-step audit threshold: `1e-9 * (1 + |G|)`.
pub fn audit_threshold(g: f64) -> f64 {
    1e-9 * (1.0 + g.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasinLabel {
    Converged(ConvergedTo),
    /// Initial condition within round-off of the separatrix.
    Separatrix,
    Unresolved,
}

/// Label each initial condition by the equilibrium it converges to.
pub fn basin_probe(
    rc: &ReducedCoeffs,
    inits: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<BasinLabel>> {
    let set = reduced_steady_states(rc, DEFAULT_ROOT_TOL);
    let separatrices: Vec<f64> = set
        .equilibria
        .iter()
        .filter(|e| !e.is_stable())
        .map(|e| e.rho)
        .collect();
    let mut out = Vec::with_capacity(inits.len());
    for &x0 in inits {
        if separatrices.iter().any(|s| (x0 - s).abs() <= 1e-12) {
            out.push(BasinLabel::Separatrix);
            continue;
        }
        let traj = integrate_reduced(rc, x0, cfg)?;
        out.push(match traj.converged_to {
            Some(c) => BasinLabel::Converged(c),
            None => BasinLabel::Unresolved,
        });
    }
    Ok(out)
}

impl PartialEq for ConvergedTo {
    fn eq(&self, other: &Self) -> bool {
        self.branch == other.branch && self.rho == other.rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoefficientModel, ValidityBox, VdwParams};
    use approx::assert_abs_diff_eq;

    fn rc(lambda: f64, a2: f64, a3: f64) -> ReducedCoeffs {
        ReducedCoeffs::new(lambda, a2, a3, 0.0).unwrap()
    }

    #[test]
    fn linear_decay_to_zero_branch() {
        let r = rc(-1.0, 0.0, 1.0);
        let cfg = IntegratorConfig::rk45(10.0).unwrap();
        let traj = integrate_reduced(&r, 0.1, &cfg).unwrap();
        assert!(traj.terminal().rho.abs() < 1e-4);
        assert_eq!(traj.converged_to.unwrap().branch, Branch::Zero);
        // t strictly increasing.
        assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn pitchfork_basins_by_sign() {
        let r = rc(1.0, 0.0, 1.0);
        let cfg = IntegratorConfig::rk45(40.0).unwrap();
        let up = integrate_reduced(&r, 0.1, &cfg).unwrap();
        assert_abs_diff_eq!(up.terminal().rho, 1.0, epsilon = 1e-6);
        assert_eq!(up.converged_to.unwrap().branch, Branch::Plus);
        let down = integrate_reduced(&r, -0.1, &cfg).unwrap();
        assert_abs_diff_eq!(down.terminal().rho, -1.0, epsilon = 1e-6);
        assert_eq!(down.converged_to.unwrap().branch, Branch::Minus);
    }

    #[test]
    fn rk4_self_convergence_is_fourth_order() {
        // Smooth transient of the reduced flow; compare against a very fine
        // solution.
        let r = rc(0.8, 0.5, 1.0);
        let t_end = 1.0;
        let solution = |dt: f64| {
            let cfg = IntegratorConfig::rk4(dt, t_end).unwrap();
            integrate_reduced(&r, 0.3, &cfg).unwrap().terminal().rho
        };
        let reference = solution(1e-5);
        let e1 = (solution(0.02) - reference).abs();
        let e2 = (solution(0.01) - reference).abs();
        let ratio = e1 / e2;
        assert!(
            (8.0..32.0).contains(&ratio),
            "expected ~16x error reduction, got {ratio} ({e1} vs {e2})"
        );
    }

    fn vdw_model() -> CoefficientModel {
        CoefficientModel::vdw_compatible(VdwParams::new(1.0, 1.0, 1.0).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn full_dynamics_supercritical_unique_attractor() {
        let model = vdw_model();
        let state = ThermoState::new(0.35, 0.04).unwrap();
        let set = full_steady_states(state, &model, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(set.len(), 1);
        let target = set.equilibria[0].rho;
        let cfg = IntegratorConfig::rk45(200.0).unwrap();
        for init in [0.05, 0.5, 1.5, 2.9] {
            let traj = integrate_full(state, &model, init, &cfg).unwrap();
            assert_abs_diff_eq!(traj.terminal().rho, target, epsilon = 1e-6);
        }
    }

    #[test]
    fn steady_initial_condition_stays_put() {
        let model = vdw_model();
        let state = ThermoState::new(0.26, 0.02).unwrap();
        let set = full_steady_states(state, &model, DEFAULT_ROOT_TOL).unwrap();
        let rho_star = set.equilibria[0].rho;
        let cfg = IntegratorConfig::rk45(10.0).unwrap();
        let traj = integrate_full(state, &model, rho_star, &cfg).unwrap();
        for s in &traj.samples {
            assert_abs_diff_eq!(s.rho, rho_star, epsilon = 1e-10);
        }
    }

    #[test]
    fn bistable_phase_line_selects_branch_by_side() {
        let model = vdw_model();
        let state = ThermoState::new(0.26, 0.02).unwrap();
        let set = full_steady_states(state, &model, DEFAULT_ROOT_TOL).unwrap();
        let (gas, mid, liq) = (
            set.equilibria[0].rho,
            set.equilibria[1].rho,
            set.equilibria[2].rho,
        );
        let cfg = IntegratorConfig::rk45(400.0).unwrap();
        let below = integrate_full(state, &model, mid - 0.02, &cfg).unwrap();
        assert_abs_diff_eq!(below.terminal().rho, gas, epsilon = 1e-6);
        let above = integrate_full(state, &model, mid + 0.02, &cfg).unwrap();
        assert_abs_diff_eq!(above.terminal().rho, liq, epsilon = 1e-6);
    }

    #[test]
    fn coupled_decouples_at_zero_beta2() {
        let model = CoefficientModel::constant(
            0.5,
            1.0,
            1.0,
            1.0,
            0.0,
            0.1,
            ValidityBox::new(0.01, 10.0, 0.001, 10.0).unwrap(),
        )
        .unwrap();
        let state = ThermoState::new(1.0, 0.5).unwrap();
        let s0 = model.eliminate_entropy(0.4, state).unwrap();
        let cfg = IntegratorConfig::rk4(1e-3, 5.0).unwrap();
        let coupled = integrate_coupled(state, &model, 0.4, s0, &cfg).unwrap();
        let scalar = integrate_full(state, &model, 0.4, &cfg).unwrap();
        assert_eq!(coupled.samples.len(), scalar.samples.len());
        for (a, b) in coupled.samples.iter().zip(scalar.samples.iter()) {
            assert_abs_diff_eq!(a.rho, b.rho, epsilon = 1e-8);
        }
    }

    #[test]
    fn coupled_terminal_lands_on_slaved_manifold() {
        let model = vdw_model();
        let state = ThermoState::new(0.3, 0.03).unwrap();
        let cfg = IntegratorConfig::rk45(300.0).unwrap();
        let traj = integrate_coupled(state, &model, 0.8, -0.2, &cfg).unwrap();
        let terminal = traj.terminal();
        let slaved = model.eliminate_entropy(terminal.rho, state).unwrap();
        assert!((terminal.s.unwrap() - slaved).abs() < 1e-6);
    }

    #[test]
    fn dissipation_audit_on_reduced_flow() {
        let r = rc(0.7, 0.9, 1.1);
        let cfg = IntegratorConfig::rk45(30.0).unwrap();
        let traj = integrate_reduced(&r, 1.7, &cfg).unwrap();
        let max_up = lyapunov_audit(&traj, |s| r.potential(s.rho));
        assert!(max_up <= 1e-9, "max increase {max_up}");

        // A stationary trajectory has zero increase up to round-off.
        let stationary = integrate_reduced(&r, 0.0, &cfg).unwrap();
        let max_up = lyapunov_audit(&stationary, |s| r.potential(s.rho));
        assert!(max_up.abs() <= 1e-15);
    }

    #[test]
    fn coarse_fixed_step_violates_dissipation_and_is_reported() {
        // Step far beyond the explicit stability bound 2.78/|f'|.
        let r = rc(-1.0, 0.0, 1e-6);
        let cfg = IntegratorConfig::rk4(3.0, 40.0).unwrap();
        let traj = integrate_reduced(&r, 0.5, &cfg).unwrap();
        let max_up = lyapunov_audit(&traj, |s| r.potential(s.rho));
        assert!(max_up > 0.0, "instability must surface, got {max_up}");
    }

    #[test]
    fn basin_probe_labels_split_at_separatrix() {
        let r = rc(-0.21, 1.0, 1.0);
        let cfg = IntegratorConfig::rk45(400.0).unwrap();
        let inits = [-0.5, 0.1, 0.25, 0.3, 0.35, 0.6, 1.4];
        let labels = basin_probe(&r, &inits, &cfg).unwrap();
        for (&x0, label) in inits.iter().zip(labels.iter()) {
            match label {
                BasinLabel::Converged(c) => {
                    if x0 < 0.3 {
                        assert_abs_diff_eq!(c.rho, 0.0, epsilon = 1e-9);
                    } else {
                        assert_abs_diff_eq!(c.rho, 0.7, epsilon = 1e-9);
                    }
                }
                BasinLabel::Separatrix => assert_abs_diff_eq!(x0, 0.3, epsilon = 1e-12),
                BasinLabel::Unresolved => panic!("init {x0} should resolve"),
            }
        }
        // Labeling is a step function of the initial condition.
        let mut seen_upper = false;
        for label in &labels {
            if let BasinLabel::Converged(c) = label {
                if c.rho > 0.5 {
                    seen_upper = true;
                } else {
                    assert!(!seen_upper, "labels must switch exactly once");
                }
            }
        }
    }
}
