//! Parameter-plane analysis: the critical curve `T = phi(p)` where the
//! reference branch turns marginal, the Andrews point where additionally
//! `a2 = 0`, saddle-node (fold) location, transition-function tables with the
//! observed jump temperature, metastable windows, and thermodynamic
//! signatures along coexistence.
//!
//! The reference density `rho0(T, p)` is continued along the root branch of
//! the steady-state cubic rather than re-picked per state: re-selection by
//! stability would always land on a stable root and `lambda` would never
//! change sign. Depending on the model geometry the branch either crosses
//! `lambda = 0` transversally (pinned-branch constructions) or terminates in
//! a fold there (van der Waals isobars), so the tracer first scans for a sign
//! change and falls back to a two-variable fold solve when the branch is
//! lost.

use std::io::{self, Write};

use serde::Serialize;

use crate::equilibria::{
    full_steady_states, gas_branch_select, Branch, EquilibriumSet, DEFAULT_ROOT_TOL,
};
use crate::error::{Error, Result};
use crate::model::{CoefficientModel, CoefficientValues, ReducedCoeffs, ThermoState};
use crate::solve::{bisect, damped_newton, NewtonOptions};
use crate::transition::{
    classify_local, LocalClassification, SaddleNode, TransitionReport, DEFAULT_A2_TOL,
};

const SCAN_STEPS: usize = 256;
const T_BISECT_TOL: f64 = 1e-13;
/// Finite-difference step factor for thermodynamic derivatives.
const FD_SCALE: f64 = 1e-4;

fn refine_root(c: &CoefficientValues, state: ThermoState, guess: f64) -> Option<f64> {
    let mut rho = guess;
    for _ in 0..40 {
        let f = c.density_rhs(rho, state);
        let fp = c.density_rhs_prime(rho, state);
        if fp.abs() < 1e-30 {
            break;
        }
        let step = f / fp;
        rho -= step;
        if !rho.is_finite() {
            return None;
        }
        if step.abs() <= 1e-15 * (1.0 + rho.abs()) {
            break;
        }
    }
    let residual_scale = 1e-9 * (1.0 + state.p.abs());
    (c.density_rhs(rho, state).abs() <= residual_scale).then_some(rho)
}

#[derive(Debug, Clone, Copy)]
struct BranchPoint {
    rho: f64,
    rc: ReducedCoeffs,
}

enum Walk {
    Point(BranchPoint),
    Lost,
}

/// Continues one root of the steady-state cubic through parameter space.
struct BranchWalker<'a> {
    model: &'a CoefficientModel,
    rho: f64,
}

impl<'a> BranchWalker<'a> {
    /// Seed from the gas branch at `state`.
    fn start(model: &'a CoefficientModel, state: ThermoState) -> Result<(Self, BranchPoint)> {
        let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
        let rho = gas_branch_select(&set)?;
        let rc = model.reduced_coefficients(rho, state)?;
        Ok((Self { model, rho }, BranchPoint { rho, rc }))
    }

    fn step(&mut self, state: ThermoState) -> Result<Walk> {
        let c = self.model.eval_coefficients(state)?;
        let refined = refine_root(&c, state, self.rho);
        let set = full_steady_states(state, self.model, DEFAULT_ROOT_TOL)?;
        let closest = set
            .equilibria
            .iter()
            .map(|e| e.rho)
            .min_by(|a, b| {
                (a - self.rho)
                    .abs()
                    .partial_cmp(&(b - self.rho).abs())
                    .unwrap()
            })
            .ok_or(Error::NoStableRoot)?;
        let candidate = match refined {
            Some(r) if (r - closest).abs() <= 1e-6 * (1.0 + r.abs()) => r,
            _ => closest,
        };
        // A jump beyond this guard means the tracked root annihilated in a
        // fold and the solver latched onto a different branch.
        let guard = 0.15 * (1.0 + self.rho.abs());
        if (candidate - self.rho).abs() > guard {
            return Ok(Walk::Lost);
        }
        self.rho = candidate;
        let rc = c.reduced_coefficients(candidate, state)?;
        Ok(Walk::Point(BranchPoint { rho: candidate, rc }))
    }
}

/// One solved point of the critical curve at fixed pressure.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalPoint {
    pub t_phi: f64,
    pub rho0: f64,
    /// Whether the sign change of `lambda` was verified on both sides; folds
    /// and tangential contacts only admit the one-sided check.
    pub two_sided: bool,
}

/// Solve `lambda(T, p) = 0` in `T` at fixed `p` along the continued gas
/// branch.
pub fn critical_point_at_p(
    model: &CoefficientModel,
    p: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<CriticalPoint> {
    if !(t_lo < t_hi) {
        return Err(Error::InvalidInput(format!(
            "empty temperature window [{t_lo}, {t_hi}]"
        )));
    }
    let state_hi = ThermoState::new(t_hi, p)?;
    let (mut walker, start) = BranchWalker::start(model, state_hi)?;

    let n = SCAN_STEPS;
    let dt = (t_hi - t_lo) / n as f64;
    let mut prev_t = t_hi;
    let mut prev = start;
    let mut best_abs = (prev.rc.lambda().abs(), prev_t, prev);
    let mut sign_bracket: Option<((f64, f64), (f64, f64))> = None; // (t, rho) above / below
    let mut lost_at: Option<(f64, BranchPoint)> = None; // (last good t, point)

    for k in 1..=n {
        let t = t_hi - dt * k as f64;
        let state = ThermoState::new(t, p)?;
        match walker.step(state)? {
            Walk::Lost => {
                lost_at = Some((prev_t, prev));
                break;
            }
            Walk::Point(pt) => {
                if prev.rc.lambda() < 0.0 && pt.rc.lambda() >= 0.0 {
                    sign_bracket = Some(((prev_t, prev.rho), (t, pt.rho)));
                    break;
                }
                if pt.rc.lambda().abs() < best_abs.0 {
                    best_abs = (pt.rc.lambda().abs(), t, pt);
                }
                prev_t = t;
                prev = pt;
            }
        }
    }

    if let Some(((t_above, rho_above), (t_below, _))) = sign_bracket {
        // Transversal crossing: bisect lambda along the branch. The bracket
        // itself certifies lambda > 0 below and lambda < 0 above.
        let mut seed = rho_above;
        let t_phi = bisect(
            |t| {
                let state = ThermoState::new(t, p)?;
                let c = model.eval_coefficients(state)?;
                let rho = refine_root(&c, state, seed).ok_or(Error::NoConvergence {
                    iterations: 40,
                    residual: f64::NAN,
                })?;
                seed = rho;
                Ok(c.reduced_coefficients(rho, state)?.lambda())
            },
            t_below,
            t_above,
            T_BISECT_TOL,
        )?;
        let state = ThermoState::new(t_phi, p)?;
        let c = model.eval_coefficients(state)?;
        let rho0 = refine_root(&c, state, seed).unwrap_or(seed);
        return Ok(CriticalPoint {
            t_phi,
            rho0,
            two_sided: true,
        });
    }

    // Fold or tangential contact: solve f = 0, df/drho = 0 in (rho, T).
    let seed = lost_at.map(|(t, pt)| (pt.rho, t)).unwrap_or_else(|| {
        let (_, t, pt) = best_abs;
        (pt.rho, t)
    });
    let sol = damped_newton(
        |x: &[f64; 2]| {
            let state = ThermoState::new(x[1], p).ok()?;
            let c = model.eval_coefficients(state).ok()?;
            Some([
                c.density_rhs(x[0], state),
                c.density_rhs_prime(x[0], state),
            ])
        },
        [seed.0, seed.1],
        &NewtonOptions::default(),
    )
    .map_err(|_| Error::NoSignChange { p })?;
    let (rho0, t_phi) = (sol[0], sol[1]);
    if t_phi < t_lo - dt || t_phi > t_hi + dt {
        return Err(Error::NoSignChange { p });
    }
    Ok(CriticalPoint {
        t_phi,
        rho0,
        two_sided: false,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveSample {
    pub p: f64,
    pub t_phi: f64,
    pub rho0: f64,
    pub two_sided: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedSample {
    pub p: f64,
    pub reason: String,
}

/// The traced critical curve `T = phi(p)`.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalCurve {
    pub samples: Vec<CurveSample>,
    pub skipped: Vec<SkippedSample>,
    /// Sign of `phi'` on the sampled range: +1 increasing, -1 decreasing,
    /// 0 mixed or undetermined.
    pub monotone_flag: i8,
}

impl CriticalCurve {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "p,T_phi,rho0")?;
        for s in &self.samples {
            writeln!(w, "{},{},{}", s.p, s.t_phi, s.rho0)?;
        }
        Ok(())
    }
}

/// Trace the critical curve over `steps + 1` pressures in `[p_lo, p_hi]`,
/// scanning `[t_lo, t_hi]` for the marginal temperature at each.
///
/// Pressures where no critical temperature is found are recorded in
/// `skipped` rather than failing the whole trace.
pub fn critical_curve_trace(
    model: &CoefficientModel,
    p_lo: f64,
    p_hi: f64,
    steps: usize,
    t_lo: f64,
    t_hi: f64,
) -> Result<CriticalCurve> {
    if !(p_lo < p_hi) || steps == 0 {
        return Err(Error::InvalidInput(format!(
            "empty pressure range [{p_lo}, {p_hi}] with {steps} steps"
        )));
    }
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for k in 0..=steps {
        let p = p_lo + (p_hi - p_lo) * k as f64 / steps as f64;
        match critical_point_at_p(model, p, t_lo, t_hi) {
            Ok(cp) => samples.push(CurveSample {
                p,
                t_phi: cp.t_phi,
                rho0: cp.rho0,
                two_sided: cp.two_sided,
            }),
            Err(e) => skipped.push(SkippedSample {
                p,
                reason: e.to_string(),
            }),
        }
    }
    let monotone_flag = monotone_sign(samples.iter().map(|s| s.t_phi));
    Ok(CriticalCurve {
        samples,
        skipped,
        monotone_flag,
    })
}

fn monotone_sign<I: Iterator<Item = f64>>(values: I) -> i8 {
    let v: Vec<f64> = values.collect();
    if v.len() < 2 {
        return 0;
    }
    let increasing = v.windows(2).all(|w| w[1] > w[0]);
    let decreasing = v.windows(2).all(|w| w[1] < w[0]);
    match (increasing, decreasing) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

/// Terminus of the first-order coexistence segment: `lambda = 0` and `a2 = 0`
/// jointly with the steady-state condition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AndrewsPoint {
    pub t_c: f64,
    pub p_c: f64,
    pub rho_c: f64,
}

/// Damped-Newton solve of `(steady-state residual, lambda, a2) = 0` in
/// `(rho, T, p)` from `guess`.
///
/// When the three-variable system degenerates (pinned-branch constructions
/// make the residual row vanish identically along the branch), the solver
/// falls back to the two-variable system `(lambda, a2) = 0` in `(T, p)` with
/// the reference root re-solved inside.
pub fn andrews_point(model: &CoefficientModel, guess: (f64, f64, f64)) -> Result<AndrewsPoint> {
    let opts = NewtonOptions::default();
    let full = damped_newton(
        |x: &[f64; 3]| {
            let state = ThermoState::new(x[1], x[2]).ok()?;
            let c = model.eval_coefficients(state).ok()?;
            let rc = c.reduced_coefficients(x[0], state).ok()?;
            Some([c.density_rhs(x[0], state), rc.lambda(), rc.a2()])
        },
        [guess.0, guess.1, guess.2],
        &opts,
    );
    let (rho_c, t_c, p_c) = match full {
        Ok(sol) => (sol[0], sol[1], sol[2]),
        Err(first_err) => {
            let mut rho_inner = guess.0;
            let reduced = damped_newton(
                |x: &[f64; 2]| {
                    let state = ThermoState::new(x[0], x[1]).ok()?;
                    let c = model.eval_coefficients(state).ok()?;
                    let rho = refine_root(&c, state, rho_inner)?;
                    rho_inner = rho;
                    let rc = c.reduced_coefficients(rho, state).ok()?;
                    Some([rc.lambda(), rc.a2()])
                },
                [guess.1, guess.2],
                &opts,
            )
            .map_err(|_| first_err)?;
            (rho_inner, reduced[0], reduced[1])
        }
    };
    // Validate the full three-equation residual at the solution.
    let state = ThermoState::new(t_c, p_c)?;
    let rc = model.reduced_coefficients(rho_c, state)?;
    let residual = model
        .density_rhs(rho_c, state)?
        .abs()
        .max(rc.lambda().abs())
        .max(rc.a2().abs());
    if residual > 1e-9 {
        return Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            residual,
        });
    }
    Ok(AndrewsPoint { t_c, p_c, rho_c })
}

/// Locate the zero of the discriminant `a2^2 + 4 a3 lambda` in `T`, given a
/// provider of reduced coefficients along a branch. The provider returns
/// `Ok(None)` when the branch ends, which stops the scan.
pub fn fold_in_t_with<F>(mut rc_at: F, t_lo: f64, t_hi: f64) -> Result<(f64, ReducedCoeffs)>
where
    F: FnMut(f64) -> Result<Option<ReducedCoeffs>>,
{
    if !(t_lo < t_hi) {
        return Err(Error::InvalidInput(format!(
            "empty temperature window [{t_lo}, {t_hi}]"
        )));
    }
    let n = SCAN_STEPS;
    let dt = (t_hi - t_lo) / n as f64;
    let mut prev: Option<(f64, f64)> = None; // (t, disc)
    let mut bracket = None;
    for k in 0..=n {
        let t = t_hi - dt * k as f64;
        let Some(rc) = rc_at(t)? else { break };
        let disc = rc.discriminant();
        if let Some((tp, dp)) = prev {
            if dp < 0.0 && disc >= 0.0 {
                bracket = Some((t, tp));
                break;
            }
        }
        prev = Some((t, disc));
    }
    let (t_below, t_above) = bracket.ok_or(Error::NoFoldInWindow)?;
    let t1 = bisect(
        |t| {
            rc_at(t)?
                .map(|rc| rc.discriminant())
                .ok_or(Error::NoFoldInWindow)
        },
        t_below,
        t_above,
        T_BISECT_TOL,
    )?;
    let rc = rc_at(t1)?.ok_or(Error::NoFoldInWindow)?;
    if rc.a2().abs() <= DEFAULT_A2_TOL {
        return Err(Error::NoFoldInWindow);
    }
    Ok((t1, rc))
}

/// Saddle-node location in `T` at fixed `p`, following the continued gas
/// branch. Returns the fold state with `rho_sn = a2 / (2 a3)` as an offset
/// from the reference density.
pub fn saddle_node_locate_t(
    model: &CoefficientModel,
    p: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<SaddleNode> {
    let state_hi = ThermoState::new(t_hi, p)?;
    let (mut walker, _) = BranchWalker::start(model, state_hi)?;
    // Bisection revisits nearby temperatures out of order; the walker only
    // needs a consistent seed, which the previous evaluation provides.
    let (t1, rc) = fold_in_t_with(
        |t| {
            let state = ThermoState::new(t, p)?;
            match walker.step(state)? {
                Walk::Point(pt) => Ok(Some(pt.rc)),
                Walk::Lost => Ok(None),
            }
        },
        t_lo,
        t_hi,
    )?;
    Ok(SaddleNode {
        t1,
        p1: p,
        rho_sn: rc.double_root(),
    })
}

/// Saddle-node location in `p` at fixed `T`, the symmetric one-parameter
/// slice.
pub fn saddle_node_locate_p(
    model: &CoefficientModel,
    t: f64,
    p_lo: f64,
    p_hi: f64,
) -> Result<SaddleNode> {
    if !(p_lo < p_hi) {
        return Err(Error::InvalidInput(format!(
            "empty pressure window [{p_lo}, {p_hi}]"
        )));
    }
    // March from whichever end hosts a stable gas branch.
    let starts = [(p_hi, -1.0), (p_lo, 1.0)];
    let mut last_err = Error::NoFoldInWindow;
    for (p_start, dir) in starts {
        let state = match ThermoState::new(t, p_start) {
            Ok(s) => s,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let Ok((mut walker, start)) = BranchWalker::start(model, state) else {
            continue;
        };
        let n = SCAN_STEPS;
        let dp = (p_hi - p_lo) / n as f64;
        let mut prev = (p_start, start.rc.discriminant());
        let mut bracket = None;
        for k in 1..=n {
            let p = p_start + dir * dp * k as f64;
            if p < p_lo - 1e-15 || p > p_hi + 1e-15 {
                break;
            }
            let state = ThermoState::new(t, p)?;
            match walker.step(state)? {
                Walk::Lost => break,
                Walk::Point(pt) => {
                    let disc = pt.rc.discriminant();
                    if prev.1 < 0.0 && disc >= 0.0 {
                        bracket = Some((prev.0, p));
                        break;
                    }
                    prev = (p, disc);
                }
            }
        }
        if let Some((p_a, p_b)) = bracket {
            let p1 = bisect(
                |p| {
                    let state = ThermoState::new(t, p)?;
                    match walker.step(state)? {
                        Walk::Point(pt) => Ok(pt.rc.discriminant()),
                        Walk::Lost => Err(Error::NoFoldInWindow),
                    }
                },
                p_a,
                p_b,
                T_BISECT_TOL,
            )?;
            let state = ThermoState::new(t, p1)?;
            if let Walk::Point(pt) = walker.step(state)? {
                if pt.rc.a2().abs() <= DEFAULT_A2_TOL {
                    return Err(Error::NoFoldInWindow);
                }
                return Ok(SaddleNode {
                    t1: t,
                    p1,
                    rho_sn: pt.rc.double_root(),
                });
            }
        }
    }
    Err(last_err)
}

/// Jump temperature: where the free energies of the two competing stable
/// states cross inside the bistability window `[t0, t1]`.
pub fn maxwell_t_star(model: &CoefficientModel, p: f64, t0: f64, t1: f64) -> Result<f64> {
    let margin = 1e-7 * (t1 - t0).max(1e-12);
    let gap = |t: f64| -> Result<f64> {
        let state = ThermoState::new(t, p)?;
        let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
        competing_gap(model, state, &set)
    };
    bisect(gap, t0 + margin, t1 - margin, T_BISECT_TOL)
}

/// Free-energy difference `G(jumped state) - G(reference state)` between the
/// outer stable roots; the reference is the gas-side root (lowest for
/// `a2 > 0`, highest for `a2 < 0`).
fn competing_gap(
    model: &CoefficientModel,
    state: ThermoState,
    set: &EquilibriumSet,
) -> Result<f64> {
    let stable: Vec<f64> = set.stable().map(|e| e.rho).collect();
    if stable.len() < 2 {
        return Err(Error::BranchMissing {
            discriminant: set.discriminant.unwrap_or(f64::NAN),
        });
    }
    let low = stable[0];
    let high = *stable.last().unwrap();
    let rc_low = model.reduced_coefficients(low, state)?;
    let (reference, jumped) = if rc_low.a2() > 0.0 {
        (low, high)
    } else {
        (high, low)
    };
    Ok(model.gibbs_reduced(jumped, state)? - model.gibbs_reduced(reference, state)?)
}

/// One sample of a transition-function table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiSample {
    pub t: f64,
    pub phi: f64,
    pub g: f64,
}

/// The observed equilibrium branch `Phi(T)` at fixed pressure, one table per
/// sign branch.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionFunctionTable {
    pub branch: Branch,
    pub samples: Vec<PhiSample>,
    pub t_star: Option<f64>,
    pub t0: f64,
    pub t1: Option<f64>,
}

/// Both transition functions plus the continued reference branch.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionFunctions {
    pub plus: TransitionFunctionTable,
    pub minus: TransitionFunctionTable,
    /// Continued reference branch `rho0(T)` where it exists.
    pub reference: Vec<PhiSample>,
    pub t0: f64,
    pub t1: Option<f64>,
    pub t_star: Option<f64>,
    pub a2_at_t0: f64,
}

impl TransitionFunctions {
    /// Documented CSV layout: `T, phi_plus, phi_minus, G_plus, G_zero`.
    /// Missing samples (a branch that does not exist at that temperature)
    /// are written as NaN.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "T,phi_plus,phi_minus,G_plus,G_zero")?;
        let mut grid: Vec<f64> = self
            .plus
            .samples
            .iter()
            .chain(self.minus.samples.iter())
            .chain(self.reference.iter())
            .map(|s| s.t)
            .collect();
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        let find = |samples: &[PhiSample], t: f64| -> Option<PhiSample> {
            samples.iter().find(|s| s.t == t).copied()
        };
        for &t in &grid {
            let plus = find(&self.plus.samples, t);
            let minus = find(&self.minus.samples, t);
            let reference = find(&self.reference, t);
            writeln!(
                w,
                "{},{},{},{},{}",
                t,
                plus.map_or(f64::NAN, |s| s.phi),
                minus.map_or(f64::NAN, |s| s.phi),
                plus.map_or(f64::NAN, |s| s.g),
                reference.map_or(f64::NAN, |s| s.g),
            )?;
        }
        Ok(())
    }
}

/// Sample the transition functions `Phi+(T)` and `Phi-(T)` at fixed `p` over
/// `[t_lo, t_hi]` with `samples` grid points.
///
/// The discontinuous branch jumps at the energy-crossing temperature
/// `t_star` in `[t0, t1)`; the continuous branch switches at `t0` with a
/// derivative kink. Grid points where a branch does not exist (the reference
/// root annihilates below `t0` on fold-type models) are omitted from that
/// table.
pub fn transition_functions(
    model: &CoefficientModel,
    p: f64,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
) -> Result<TransitionFunctions> {
    if samples < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    let cp = critical_point_at_p(model, p, t_lo, t_hi)?;
    let t0 = cp.t_phi;
    let state0 = ThermoState::new(t0, p)?;
    let a2_at_t0 = model.reduced_coefficients(cp.rho0, state0)?.a2();

    let first_order = a2_at_t0.abs() > DEFAULT_A2_TOL;
    let t1 = if first_order {
        saddle_node_locate_t(model, p, t0 + 1e-12, t_hi).ok().map(|sn| sn.t1)
    } else {
        None
    };
    let t_star = match t1 {
        Some(t1) => maxwell_t_star(model, p, t0, t1).ok(),
        None => None,
    };

    // The jumping branch switches at t_star, the continuous one at t0.
    let (plus_switch, minus_switch) = if a2_at_t0 > DEFAULT_A2_TOL {
        (t_star.unwrap_or(t0), t0)
    } else if a2_at_t0 < -DEFAULT_A2_TOL {
        (t0, t_star.unwrap_or(t0))
    } else {
        (t0, t0)
    };

    let state_hi = ThermoState::new(t_hi, p)?;
    let (mut walker, _) = BranchWalker::start(model, state_hi)?;
    let mut walker_alive = true;

    let mut plus = Vec::with_capacity(samples);
    let mut minus = Vec::with_capacity(samples);
    let mut reference = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = t_hi - (t_hi - t_lo) * k as f64 / (samples - 1) as f64;
        let state = ThermoState::new(t, p)?;
        let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
        let rho_ref = if walker_alive {
            match walker.step(state)? {
                Walk::Point(pt) => Some(pt.rho),
                Walk::Lost => {
                    walker_alive = false;
                    None
                }
            }
        } else {
            None
        };
        if let Some(r) = rho_ref {
            reference.push(PhiSample {
                t,
                phi: r,
                g: model.gibbs_reduced(r, state)?,
            });
        }
        let lowest = set.equilibria.first().map(|e| e.rho);
        let highest = set.equilibria.last().map(|e| e.rho);
        let three = set.len() >= 3;

        // Phi+: reference above its switch, the high branch below.
        let phi_plus = if t > plus_switch {
            rho_ref
        } else if a2_at_t0 > DEFAULT_A2_TOL || three {
            highest
        } else {
            None
        };
        // Phi-: reference above its switch, the low branch below.
        let phi_minus = if t > minus_switch {
            rho_ref
        } else if a2_at_t0 < -DEFAULT_A2_TOL || three {
            lowest
        } else {
            None
        };
        if let Some(v) = phi_plus {
            plus.push(PhiSample {
                t,
                phi: v,
                g: model.gibbs_reduced(v, state)?,
            });
        }
        if let Some(v) = phi_minus {
            minus.push(PhiSample {
                t,
                phi: v,
                g: model.gibbs_reduced(v, state)?,
            });
        }
    }
    plus.reverse();
    minus.reverse();
    reference.reverse();

    let (plus_star, minus_star) = if a2_at_t0 > DEFAULT_A2_TOL {
        (t_star, None)
    } else if a2_at_t0 < -DEFAULT_A2_TOL {
        (None, t_star)
    } else {
        (None, None)
    };
    Ok(TransitionFunctions {
        plus: TransitionFunctionTable {
            branch: Branch::Plus,
            samples: plus,
            t_star: plus_star,
            t0,
            t1,
        },
        minus: TransitionFunctionTable {
            branch: Branch::Minus,
            samples: minus,
            t_star: minus_star,
            t0,
            t1,
        },
        reference,
        t0,
        t1,
        t_star,
        a2_at_t0,
    })
}

/// One sample of the bistability window.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WindowSample {
    pub t: f64,
    pub rho_gas: f64,
    pub rho_separatrix: f64,
    pub rho_liquid: f64,
    /// Distance from each attractor to the separatrix.
    pub basin_gas: f64,
    pub basin_liquid: f64,
}

/// Bistability window `[t0, t1]` at fixed pressure with per-sample basin
/// geometry.
#[derive(Debug, Clone, Serialize)]
pub struct MetastableWindow {
    pub t0: f64,
    pub t1: f64,
    pub samples: Vec<WindowSample>,
}

/// Compute the bistability window where the reference state and the jumped
/// state are simultaneously stable. Requires a first-order (`a2 > 0`)
/// configuration at the critical temperature.
pub fn metastable_window(
    model: &CoefficientModel,
    p: f64,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
) -> Result<MetastableWindow> {
    let cp = critical_point_at_p(model, p, t_lo, t_hi)?;
    let t0 = cp.t_phi;
    let state0 = ThermoState::new(t0, p)?;
    let a2 = model.reduced_coefficients(cp.rho0, state0)?.a2();
    if a2 <= DEFAULT_A2_TOL {
        return Err(Error::NotFirstOrder { a2 });
    }
    let t1 = saddle_node_locate_t(model, p, t0 + 1e-12, t_hi)?.t1;
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = t0 + (t1 - t0) * (k as f64 + 0.5) / samples as f64;
        let state = ThermoState::new(t, p)?;
        let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
        if set.len() != 3 {
            continue;
        }
        let e = &set.equilibria;
        if !(e[0].is_stable() && !e[1].is_stable() && e[2].is_stable()) {
            continue;
        }
        out.push(WindowSample {
            t,
            rho_gas: e[0].rho,
            rho_separatrix: e[1].rho,
            rho_liquid: e[2].rho,
            basin_gas: e[1].rho - e[0].rho,
            basin_liquid: e[2].rho - e[1].rho,
        });
    }
    Ok(MetastableWindow {
        t0,
        t1,
        samples: out,
    })
}

/// Jumps of free energy and its first derivatives across a first-order
/// transition at fixed pressure.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThermoSignature {
    /// Free-energy gap across the jump, evaluated a half FD step below the
    /// given temperature so its sign reflects the energy released on cooling
    /// (at the crossing temperature itself the gap vanishes by definition).
    pub delta_e: f64,
    /// Entropy jump `S(jumped) - S(reference)` from `-dG/dT` along each
    /// branch.
    pub delta_s: f64,
    /// Phase-volume jump from `dG/dp` along each branch.
    pub delta_v: f64,
    /// Latent heat `T * delta_s`.
    pub delta_h: f64,
    pub t: f64,
    pub p: f64,
}

/// Evaluate the first-order transition signature at `(t_eval, p)`; both
/// competing stable states must exist there.
pub fn thermo_signature(model: &CoefficientModel, p: f64, t_eval: f64) -> Result<ThermoSignature> {
    let state = ThermoState::new(t_eval, p)?;
    let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
    let stable: Vec<f64> = set.stable().map(|e| e.rho).collect();
    if stable.len() < 2 {
        let rho = gas_branch_select(&set)?;
        let a2 = model.reduced_coefficients(rho, state)?.a2();
        return Err(Error::NotFirstOrder { a2 });
    }
    let low = stable[0];
    let high = *stable.last().unwrap();
    let rc_low = model.reduced_coefficients(low, state)?;
    if rc_low.a2().abs() <= DEFAULT_A2_TOL {
        return Err(Error::NotFirstOrder { a2: rc_low.a2() });
    }
    let (reference, jumped) = if rc_low.a2() > 0.0 {
        (low, high)
    } else {
        (high, low)
    };

    // G along one branch at a perturbed state, re-solving the root from the
    // unperturbed seed.
    let branch_g = |t: f64, pr: f64, seed: f64| -> Result<f64> {
        let s = ThermoState::new(t, pr)?;
        let c = model.eval_coefficients(s)?;
        let rho = refine_root(&c, s, seed).ok_or(Error::NoConvergence {
            iterations: 40,
            residual: f64::NAN,
        })?;
        Ok(model.gibbs_reduced_with(&c, rho, s))
    };
    // Central difference with one Richardson extrapolation step.
    let richardson = |d: &dyn Fn(f64) -> Result<f64>, h: f64| -> Result<f64> {
        Ok((4.0 * d(0.5 * h)? - d(h)?) / 3.0)
    };
    let h_t = FD_SCALE * (1.0 + t_eval.abs());
    let h_p = FD_SCALE * (1.0 + p.abs());

    let dg_dt = |seed: f64| -> Result<f64> {
        richardson(
            &|h| Ok((branch_g(t_eval + h, p, seed)? - branch_g(t_eval - h, p, seed)?) / (2.0 * h)),
            h_t,
        )
    };
    let dg_dp = |seed: f64| -> Result<f64> {
        richardson(
            &|h| Ok((branch_g(t_eval, p + h, seed)? - branch_g(t_eval, p - h, seed)?) / (2.0 * h)),
            h_p,
        )
    };

    let delta_s = -(dg_dt(jumped)? - dg_dt(reference)?);
    let delta_v = dg_dp(jumped)? - dg_dp(reference)?;
    let delta_e = branch_g(t_eval - 0.5 * h_t, p, jumped)? - branch_g(t_eval - 0.5 * h_t, p, reference)?;
    Ok(ThermoSignature {
        delta_e,
        delta_s,
        delta_v,
        delta_h: t_eval * delta_s,
        t: t_eval,
        p,
    })
}

/// One point of the traced coexistence curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoexistenceSample {
    pub p: f64,
    pub t_star: f64,
    pub t0: f64,
    pub t1: f64,
    pub rho_gas: f64,
    pub rho_liquid: f64,
    pub delta_s: f64,
    pub delta_v: f64,
    pub delta_h: f64,
}

/// The first-order coexistence curve `T*(p)` with thermodynamic jumps.
#[derive(Debug, Clone, Serialize)]
pub struct CoexistenceCurve {
    pub samples: Vec<CoexistenceSample>,
    pub skipped: Vec<SkippedSample>,
}

impl CoexistenceCurve {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "p,T_star,T0,T1,rho_gas,rho_liquid,delta_s,delta_v,delta_h")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                s.p,
                s.t_star,
                s.t0,
                s.t1,
                s.rho_gas,
                s.rho_liquid,
                s.delta_s,
                s.delta_v,
                s.delta_h
            )?;
        }
        Ok(())
    }
}

/// Trace the coexistence curve over `steps + 1` pressures: at each, the
/// bistability window, the energy-crossing temperature, the coexisting
/// densities, and the first-derivative jumps.
pub fn coexistence_trace(
    model: &CoefficientModel,
    p_lo: f64,
    p_hi: f64,
    steps: usize,
    t_lo: f64,
    t_hi: f64,
) -> Result<CoexistenceCurve> {
    if !(p_lo < p_hi) || steps == 0 {
        return Err(Error::InvalidInput(format!(
            "empty pressure range [{p_lo}, {p_hi}] with {steps} steps"
        )));
    }
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for k in 0..=steps {
        let p = p_lo + (p_hi - p_lo) * k as f64 / steps as f64;
        match coexistence_point(model, p, t_lo, t_hi) {
            Ok(sample) => samples.push(sample),
            Err(e) => skipped.push(SkippedSample {
                p,
                reason: e.to_string(),
            }),
        }
    }
    Ok(CoexistenceCurve { samples, skipped })
}

fn coexistence_point(
    model: &CoefficientModel,
    p: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<CoexistenceSample> {
    let cp = critical_point_at_p(model, p, t_lo, t_hi)?;
    let t0 = cp.t_phi;
    let state0 = ThermoState::new(t0, p)?;
    let a2 = model.reduced_coefficients(cp.rho0, state0)?.a2();
    if a2 <= DEFAULT_A2_TOL {
        return Err(Error::NotFirstOrder { a2 });
    }
    let t1 = saddle_node_locate_t(model, p, t0 + 1e-12, t_hi)?.t1;
    let t_star = maxwell_t_star(model, p, t0, t1)?;
    let state = ThermoState::new(t_star, p)?;
    let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
    let stable: Vec<f64> = set.stable().map(|e| e.rho).collect();
    if stable.len() < 2 {
        return Err(Error::BranchMissing {
            discriminant: f64::NAN,
        });
    }
    let sig = thermo_signature(model, p, t_star)?;
    Ok(CoexistenceSample {
        p,
        t_star,
        t0,
        t1,
        rho_gas: stable[0],
        rho_liquid: *stable.last().unwrap(),
        delta_s: sig.delta_s,
        delta_v: sig.delta_v,
        delta_h: sig.delta_h,
    })
}

/// Assemble a full transition report at `state`: pick the reference density
/// (the root with minimal `|lambda|` unless one is given), classify, and
/// attach the nearby fold when the transition is of the mixed type.
pub fn transition_report(
    model: &CoefficientModel,
    state: ThermoState,
    rho0: Option<f64>,
    lambda_tol: f64,
    a2_tol: f64,
) -> Result<TransitionReport> {
    let rc = match rho0 {
        Some(r) => model.reduced_coefficients(r, state)?,
        None => {
            let set = full_steady_states(state, model, DEFAULT_ROOT_TOL)?;
            let mut best: Option<ReducedCoeffs> = None;
            for e in &set.equilibria {
                let cand = model.reduced_coefficients(e.rho, state)?;
                if best.map_or(true, |b| cand.lambda().abs() < b.lambda().abs()) {
                    best = Some(cand);
                }
            }
            best.ok_or(Error::NoStableRoot)?
        }
    };
    let class: LocalClassification = classify_local(&rc, lambda_tol, a2_tol)?;
    let mut notes = String::new();
    let saddle_node = if class.leading_order == 2 {
        let t_hi = model.validity().t_max;
        match saddle_node_locate_t(model, state.p, state.t, t_hi) {
            Ok(sn) => Some(sn),
            Err(e) => {
                notes = format!("fold search in T at fixed p failed: {e}");
                None
            }
        }
    } else {
        None
    };
    Ok(TransitionReport {
        dynamic_type: class.dynamic_type,
        thermo_order: class.thermo_order,
        critical_state: state,
        rho0: rc.rho0(),
        reduced: rc,
        leading_order: class.leading_order,
        leading_coeff: class.leading_coeff,
        saddle_node,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoefficientModel, LandauModelSpec, ReducedCoeffs, VdwParams};
    use crate::transition::{DynamicType, ThermoOrder};
    use approx::assert_abs_diff_eq;

    fn vdw_model() -> CoefficientModel {
        CoefficientModel::vdw_compatible(VdwParams::new(1.0, 1.0, 1.0).unwrap(), 1.0).unwrap()
    }

    const VDW_TC: f64 = 8.0 / 27.0;
    const VDW_PC: f64 = 1.0 / 27.0;

    #[test]
    fn landau_critical_curve_is_flat() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.0, 1.0);
        let model = spec.build().unwrap();
        let b = model.validity();
        let curve = critical_curve_trace(&model, b.p_min + 1e-6, b.p_max - 1e-6, 8, b.t_min, b.t_max)
            .unwrap();
        assert!(curve.skipped.is_empty());
        for s in &curve.samples {
            assert_abs_diff_eq!(s.t_phi, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s.rho0, 1.0, epsilon = 1e-9);
            assert!(s.two_sided);
        }
        // lambda orientation around the curve per the sign convention.
        let p = spec.p_c();
        for (t, sign) in [(1.0 - 0.01, 1.0), (1.0 + 0.01, -1.0)] {
            let state = ThermoState::new(t, p).unwrap();
            let lambda = model.reduced_coefficients(1.0, state).unwrap().lambda();
            assert!(lambda * sign > 0.0, "lambda {lambda} at T {t}");
        }
    }

    #[test]
    fn vdw_critical_point_at_critical_pressure() {
        let model = vdw_model();
        let cp = critical_point_at_p(&model, VDW_PC, 0.15, 0.5).unwrap();
        assert_abs_diff_eq!(cp.t_phi, VDW_TC, epsilon = 1e-5);
        assert_abs_diff_eq!(cp.rho0, 1.0 / 3.0, epsilon = 1e-2);
        let state = ThermoState::new(cp.t_phi, VDW_PC).unwrap();
        let lambda = model
            .reduced_coefficients(cp.rho0, state)
            .unwrap()
            .lambda();
        assert!(lambda.abs() <= 1e-9, "lambda {lambda}");
    }

    #[test]
    fn vdw_subcritical_curve_is_monotone_increasing() {
        let model = vdw_model();
        let curve =
            critical_curve_trace(&model, 0.4 * VDW_PC, 0.9 * VDW_PC, 6, 0.1, 0.4).unwrap();
        assert!(curve.skipped.is_empty(), "skipped: {:?}", curve.skipped);
        assert_eq!(curve.monotone_flag, 1);
        for s in &curve.samples {
            assert!(s.t_phi < VDW_TC);
            let state = ThermoState::new(s.t_phi, s.p).unwrap();
            let lambda = model.reduced_coefficients(s.rho0, state).unwrap().lambda();
            assert!(lambda.abs() <= 1e-9);
        }
    }

    #[test]
    fn andrews_point_recovers_vdw_critical_constants() {
        let model = vdw_model();
        let pt = andrews_point(&model, (0.3, 0.3, 0.04)).unwrap();
        assert_abs_diff_eq!(pt.t_c, VDW_TC, epsilon = 1e-6);
        assert_abs_diff_eq!(pt.p_c, VDW_PC, epsilon = 1e-6);
        assert_abs_diff_eq!(pt.rho_c, 1.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn andrews_point_on_constructed_model_recovers_p_c_exactly() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.0, 1.0);
        let model = spec.build().unwrap();
        let pt = andrews_point(&model, (1.05, 0.97, spec.p_c() * 1.1)).unwrap();
        assert_abs_diff_eq!(pt.p_c, spec.p_c(), epsilon = 1e-9);
        assert_abs_diff_eq!(pt.t_c, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn andrews_point_far_guess_fails() {
        let model = vdw_model();
        assert!(andrews_point(&model, (2.5, 1.0, 0.3)).is_err());
    }

    #[test]
    fn synthetic_fold_closed_form() {
        // lambda(T) = -(T - t0), a2 = 1, a3 = 1: fold at t0 + 1/4.
        let t0 = 1.0;
        let (t1, rc) = fold_in_t_with(
            |t| Ok(Some(ReducedCoeffs::new(-(t - t0), 1.0, 1.0, 0.0).unwrap())),
            0.5,
            2.0,
        )
        .unwrap();
        assert_abs_diff_eq!(t1, t0 + 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(rc.double_root(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn fold_requires_nonzero_a2() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.0, 1.0);
        let model = spec.build().unwrap();
        let b = model.validity();
        let err = saddle_node_locate_t(&model, spec.p_c(), b.t_min, b.t_max).unwrap_err();
        assert!(matches!(err, Error::NoFoldInWindow));
    }

    #[test]
    fn fold_matches_root_count_change() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.5, 1.0);
        let model = spec.build().unwrap();
        let p = spec.p_c();
        let b = model.validity();
        let sn = saddle_node_locate_t(&model, p, b.t_min, b.t_max).unwrap();
        assert!(sn.t1 > 1.0);
        // Root-count oracle: bisect the temperature where the count drops
        // from 3 to 1.
        let count = |t: f64| {
            let state = ThermoState::new(t, p).unwrap();
            full_steady_states(state, &model, DEFAULT_ROOT_TOL).unwrap().len()
        };
        let (mut ta, mut tb) = (1.0 + 1e-6, b.t_max);
        assert_eq!(count(ta), 3);
        assert_eq!(count(tb), 1);
        for _ in 0..80 {
            let tm = 0.5 * (ta + tb);
            if count(tm) == 3 {
                ta = tm;
            } else {
                tb = tm;
            }
        }
        assert_abs_diff_eq!(sn.t1, 0.5 * (ta + tb), epsilon = 1e-8);
        // At the fold the pair coincides with the double root.
        let state = ThermoState::new(sn.t1, p).unwrap();
        let rc = model.reduced_coefficients(1.0, state).unwrap();
        assert!(rc.discriminant().abs() < 1e-9);
        assert_abs_diff_eq!(sn.rho_sn, rc.double_root(), epsilon = 1e-9);
    }

    #[test]
    fn fold_in_p_slice() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.5, 1.0);
        let model = spec.build().unwrap();
        let b = model.validity();
        // Fixed T above t_c so lambda < 0 and the discriminant crosses zero
        // in p.
        let t = 1.05;
        let sn = saddle_node_locate_p(&model, t, b.p_min, b.p_max).unwrap();
        let state = ThermoState::new(t, sn.p1).unwrap();
        let rc = model.reduced_coefficients(1.0, state).unwrap();
        assert!(rc.discriminant().abs() < 1e-8, "disc {}", rc.discriminant());
    }

    #[test]
    fn transition_functions_continuous_case() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.0, 1.0);
        let model = spec.build().unwrap();
        let p = spec.p_c();
        let tf = transition_functions(&model, p, 0.9, 1.1, 101).unwrap();
        assert_abs_diff_eq!(tf.t0, 1.0, epsilon = 1e-9);
        assert!(tf.t_star.is_none());
        for s in &tf.plus.samples {
            if s.t < tf.t0 {
                let state = ThermoState::new(s.t, p).unwrap();
                let rc = model.reduced_coefficients(1.0, state).unwrap();
                let expect = 1.0 + (rc.lambda() / rc.a3()).sqrt();
                assert_abs_diff_eq!(s.phi, expect, epsilon = 1e-7);
            } else {
                assert_abs_diff_eq!(s.phi, 1.0, epsilon = 1e-9);
            }
        }
        for s in &tf.minus.samples {
            if s.t < tf.t0 {
                let state = ThermoState::new(s.t, p).unwrap();
                let rc = model.reduced_coefficients(1.0, state).unwrap();
                let expect = 1.0 - (rc.lambda() / rc.a3()).sqrt();
                assert_abs_diff_eq!(s.phi, expect, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn transition_functions_jump_case() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.5, 1.0);
        let model = spec.build().unwrap();
        let p = spec.p_c();
        let tf = transition_functions(&model, p, 0.92, 1.08, 321).unwrap();
        let t0 = tf.t0;
        let t1 = tf.t1.expect("fold exists");
        let t_star = tf.t_star.expect("jump temperature exists");
        assert!(t0 <= t_star && t_star < t1, "{t0} {t_star} {t1}");
        // Jump magnitude at t_star: the plus table switches from the
        // reference branch to the high branch; at the energy crossing the
        // offset is 2 a2 / (3 a3).
        let below = tf
            .plus
            .samples
            .iter()
            .filter(|s| s.t <= t_star)
            .last()
            .unwrap();
        let state = ThermoState::new(below.t, p).unwrap();
        let rc = model.reduced_coefficients(1.0, state).unwrap();
        let jump = below.phi - 1.0;
        assert_abs_diff_eq!(jump, 2.0 * rc.a2() / (3.0 * rc.a3()), epsilon = 0.02);
        // The minus table is continuous with a kink at t0.
        for pair in tf.minus.samples.windows(2) {
            assert!((pair[1].phi - pair[0].phi).abs() < 0.02);
        }
    }

    #[test]
    fn metastable_window_structure() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.5, 1.0);
        let model = spec.build().unwrap();
        let p = spec.p_c();
        let b = model.validity();
        let window = metastable_window(&model, p, b.t_min, b.t_max, 7).unwrap();
        assert_abs_diff_eq!(window.t0, 1.0, epsilon = 1e-9);
        let sn = saddle_node_locate_t(&model, p, 1.0 + 1e-12, b.t_max).unwrap();
        assert_abs_diff_eq!(window.t1, sn.t1, epsilon = 1e-9);
        assert!(!window.samples.is_empty());
        for s in &window.samples {
            assert!(s.rho_gas < s.rho_separatrix && s.rho_separatrix < s.rho_liquid);
            assert!(s.basin_gas > 0.0 && s.basin_liquid > 0.0);
        }
        // Past the fold exactly one stable state remains.
        let state = ThermoState::new(window.t1 + 0.01, p).unwrap();
        let set = full_steady_states(state, &model, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(set.stable().count(), 1);
    }

    #[test]
    fn thermo_signature_first_order() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.5, 1.0);
        let model = spec.build().unwrap();
        let p = spec.p_c();
        let b = model.validity();
        let t0 = critical_point_at_p(&model, p, b.t_min, b.t_max).unwrap().t_phi;
        let t1 = saddle_node_locate_t(&model, p, t0 + 1e-12, b.t_max).unwrap().t1;
        let t_star = maxwell_t_star(&model, p, t0, t1).unwrap();
        let sig = thermo_signature(&model, p, t_star).unwrap();
        assert!(sig.delta_e < 0.0, "delta_e {}", sig.delta_e);
        assert!(sig.delta_s < 0.0, "delta_s {}", sig.delta_s);
        assert_eq!(sig.delta_h, t_star * sig.delta_s);
        // Second-order configuration is rejected.
        let spec2 = LandauModelSpec::new(2.0, 1.0, 0.0, 1.0);
        let model2 = spec2.build().unwrap();
        assert!(matches!(
            thermo_signature(&model2, spec2.p_c(), 0.98),
            Err(Error::NotFirstOrder { .. })
        ));
    }

    #[test]
    fn transition_report_at_critical_states() {
        let spec = LandauModelSpec::new(2.0, 1.0, 0.0, 1.0);
        let model = spec.build().unwrap();
        let state = ThermoState::new(1.0, spec.p_c()).unwrap();
        let report = transition_report(&model, state, None, 1e-6, DEFAULT_A2_TOL).unwrap();
        assert_eq!(report.dynamic_type, DynamicType::I);
        assert_eq!(report.thermo_order, ThermoOrder::Second);
        assert!(report.saddle_node.is_none());

        let spec = LandauModelSpec::new(2.0, 1.0, 0.5, 1.0);
        let model = spec.build().unwrap();
        let state = ThermoState::new(1.0, spec.p_c()).unwrap();
        let report = transition_report(&model, state, None, 1e-6, DEFAULT_A2_TOL).unwrap();
        assert_eq!(report.dynamic_type, DynamicType::III);
        assert_eq!(report.thermo_order, ThermoOrder::First);
        let sn = report.saddle_node.expect("fold attached");
        assert!(sn.t1 > 1.0);

        let off_critical = ThermoState::new(1.05, spec.p_c()).unwrap();
        assert!(matches!(
            transition_report(&model, off_critical, None, 1e-6, DEFAULT_A2_TOL),
            Err(Error::NotCritical { .. })
        ));
    }
}
