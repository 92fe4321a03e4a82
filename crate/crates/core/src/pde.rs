//! Spatially extended density/entropy dynamics on a 1-D interval with
//! zero-flux boundaries, plus the discrete free-energy audit.
//!
//! The default scheme treats diffusion implicitly (tridiagonal solve with
//! mirror ghost nodes) and the reaction terms explicitly, so diffusion never
//! restricts the step size. The explicit scheme is kept for cross-checks and
//! enforces the diffusive CFL bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CoefficientModel, CoefficientValues, ThermoState};

/// Discretized `(rho, S)` fields on a uniform 1-D grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field1D {
    h: f64,
    rho: Vec<f64>,
    s: Vec<f64>,
}

impl Field1D {
    pub fn new(h: f64, rho: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        if rho.len() < 3 || rho.len() != s.len() {
            return Err(Error::InvalidInput(format!(
                "need n >= 3 nodes with equal field lengths, got {} and {}",
                rho.len(),
                s.len()
            )));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!("grid spacing must be positive, got {h}")));
        }
        Ok(Self { h, rho, s })
    }

    pub fn uniform(n: usize, h: f64, rho: f64, s: f64) -> Result<Self> {
        Self::new(h, vec![rho; n], vec![s; n])
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn domain_length(&self) -> f64 {
        (self.n() - 1) as f64 * self.h
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Trapezoid-weighted integral of the density field.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.rho, self.h)
    }

    /// One-sided boundary difference quotients `(left, right)` of the
    /// density field; at a converged zero-flux state both vanish.
    pub fn boundary_flux(&self) -> (f64, f64) {
        let n = self.n();
        (
            (self.rho[1] - self.rho[0]) / self.h,
            (self.rho[n - 1] - self.rho[n - 2]) / self.h,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PdeScheme {
    SemiImplicit,
    Explicit,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PdeConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: PdeScheme,
    pub energy_audit: bool,
}

impl PdeConfig {
    pub fn new(dt: f64, t_end: f64, scheme: PdeScheme, energy_audit: bool) -> Result<Self> {
        if !(dt > 0.0 && t_end >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "dt = {dt} and t_end = {t_end} must be positive"
            )));
        }
        Ok(Self {
            dt,
            t_end,
            scheme,
            energy_audit,
        })
    }
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let mut sum = 0.5 * (values[0] + values[n - 1]);
    for v in &values[1..n - 1] {
        sum += v;
    }
    sum * h
}

/// Mirror-ghost Laplacian: second-order zero-flux boundaries in divergence
/// form.
fn laplacian(values: &[f64], h: f64, out: &mut [f64]) {
    let n = values.len();
    let inv_h2 = 1.0 / (h * h);
    out[0] = 2.0 * (values[1] - values[0]) * inv_h2;
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) * inv_h2;
    }
    out[n - 1] = 2.0 * (values[n - 2] - values[n - 1]) * inv_h2;
}

/// Solve `(I - r L) x = rhs` with the mirror-ghost Laplacian structure by the
/// Thomas algorithm. `r = mu dt / h^2`.
fn implicit_diffusion_solve(rhs: &[f64], r: f64) -> Vec<f64> {
    let n = rhs.len();
    if r == 0.0 {
        return rhs.to_vec();
    }
    // Rows: [1+2r, -2r], interior [-r, 1+2r, -r], [-2r, 1+2r].
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let diag = 1.0 + 2.0 * r;
    c_prime[0] = -2.0 * r / diag;
    d_prime[0] = rhs[0] / diag;
    for i in 1..n {
        let lower = if i == n - 1 { -2.0 * r } else { -r };
        let upper = -r;
        let m = diag - lower * c_prime[i - 1];
        c_prime[i] = upper / m;
        d_prime[i] = (rhs[i] - lower * d_prime[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    x
}

fn reaction_terms(
    c: &CoefficientValues,
    state: ThermoState,
    rho: &[f64],
    s: &[f64],
    out_rho: &mut [f64],
    out_s: &mut [f64],
) {
    for i in 0..rho.len() {
        let r = rho[i];
        out_rho[i] = -(c.alpha1 + c.b * state.p) * r + c.alpha2 * r * r
            - c.alpha3 * r * r * r
            - 2.0 * c.beta2 * r * s[i]
            + state.p;
        out_s[i] = -c.beta1 * s[i] - c.beta2 * r * r + state.t;
    }
}

/// Advance the fields by one time step.
pub fn step(
    fields: &Field1D,
    state: ThermoState,
    model: &CoefficientModel,
    cfg: &PdeConfig,
) -> Result<Field1D> {
    step_with(fields, state, model, cfg, cfg.dt)
}

fn step_with(
    fields: &Field1D,
    state: ThermoState,
    model: &CoefficientModel,
    cfg: &PdeConfig,
    dt: f64,
) -> Result<Field1D> {
    let c = model.eval_coefficients(state)?;
    let (mu1, mu2) = (model.mu1(), model.mu2());
    let n = fields.n();
    let h = fields.h();
    let mut r_rho = vec![0.0; n];
    let mut r_s = vec![0.0; n];
    reaction_terms(&c, state, &fields.rho, &fields.s, &mut r_rho, &mut r_s);

    match cfg.scheme {
        PdeScheme::SemiImplicit => {
            let mut rho_star = fields.rho.clone();
            let mut s_star = fields.s.clone();
            for i in 0..n {
                rho_star[i] += dt * r_rho[i];
                s_star[i] += dt * r_s[i];
            }
            let rho_new = implicit_diffusion_solve(&rho_star, mu1 * dt / (h * h));
            let s_new = implicit_diffusion_solve(&s_star, mu2 * dt / (h * h));
            Field1D::new(h, rho_new, s_new)
        }
        PdeScheme::Explicit => {
            let mu_max = mu1.max(mu2);
            if mu_max > 0.0 {
                let dt_max = h * h / (2.0 * mu_max);
                if dt > dt_max {
                    return Err(Error::CflViolation { dt, dt_max });
                }
            }
            let mut lap = vec![0.0; n];
            let mut rho_new = fields.rho.clone();
            laplacian(&fields.rho, h, &mut lap);
            for i in 0..n {
                rho_new[i] += dt * (mu1 * lap[i] + r_rho[i]);
            }
            let mut s_new = fields.s.clone();
            laplacian(&fields.s, h, &mut lap);
            for i in 0..n {
                s_new[i] += dt * (mu2 * lap[i] + r_s[i]);
            }
            Field1D::new(h, rho_new, s_new)
        }
    }
}

/// Trapezoid quadrature of the free-energy density
/// `1/2 mu1 |grad rho|^2 + 1/2 mu2 |grad S|^2 + g(rho, S) - S T
///  - (rho p - 1/2 b rho^2 p) + Gref`,
/// with gradients by central differences (one-sided at the boundaries).
pub fn discrete_energy(
    fields: &Field1D,
    state: ThermoState,
    model: &CoefficientModel,
) -> Result<f64> {
    let c = model.eval_coefficients(state)?;
    let n = fields.n();
    let h = fields.h();
    let grad = |v: &[f64], i: usize| -> f64 {
        if i == 0 {
            (v[1] - v[0]) / h
        } else if i == n - 1 {
            (v[n - 1] - v[n - 2]) / h
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        }
    };
    let mut density = vec![0.0; n];
    for i in 0..n {
        let grho = grad(&fields.rho, i);
        let gs = grad(&fields.s, i);
        density[i] = 0.5 * model.mu1() * grho * grho + 0.5 * model.mu2() * gs * gs
            + model.gibbs_homogeneous_with(&c, fields.rho[i], fields.s[i], state);
    }
    Ok(trapezoid(&density, h))
}

#[derive(Debug, Clone, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub fields: Field1D,
    /// One-sided boundary difference quotients of the density field.
    pub boundary_flux: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub snapshots: Vec<Snapshot>,
    /// `(t, E)` series; per step when the audit is on, at snapshots
    /// otherwise.
    pub energy: Vec<(f64, f64)>,
    pub final_fields: Field1D,
}

/// Run the dynamics to `cfg.t_end`, recording snapshots at the requested
/// times (clamped to step boundaries). With `energy_audit` on, any per-step
/// energy increase beyond `1e-7 * (1 + |E|)` is an error, never clipped.
pub fn simulate(
    fields0: &Field1D,
    state: ThermoState,
    model: &CoefficientModel,
    cfg: &PdeConfig,
    snapshot_times: &[f64],
) -> Result<SimResult> {
    let mut fields = fields0.clone();
    let mut t = 0.0;
    let mut energy = Vec::new();
    let mut prev_energy = if cfg.energy_audit {
        let e = discrete_energy(&fields, state, model)?;
        energy.push((0.0, e));
        Some(e)
    } else {
        None
    };

    let mut targets: Vec<f64> = snapshot_times.to_vec();
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    targets.dedup();
    let mut next_target = 0usize;
    let mut snapshots = Vec::new();
    let mut take_snapshot = |t: f64, fields: &Field1D, next_target: &mut usize| {
        while *next_target < targets.len() && targets[*next_target] <= t + 1e-12 {
            snapshots.push(Snapshot {
                t,
                fields: fields.clone(),
                boundary_flux: fields.boundary_flux(),
            });
            *next_target += 1;
        }
    };
    take_snapshot(0.0, &fields, &mut next_target);

    let mut step_index = 0usize;
    while t < cfg.t_end - 1e-12 * (1.0 + cfg.t_end) {
        let dt = cfg.dt.min(cfg.t_end - t);
        fields = step_with(&fields, state, model, cfg, dt)?;
        t += dt;
        step_index += 1;
        if let Some(prev) = prev_energy {
            let e = discrete_energy(&fields, state, model)?;
            energy.push((t, e));
            let increase = e - prev;
            if increase > 1e-7 * (1.0 + prev.abs()) {
                return Err(Error::EnergyAuditFailed {
                    step: step_index,
                    increase,
                });
            }
            prev_energy = Some(e);
        }
        take_snapshot(t, &fields, &mut next_target);
    }
    if !cfg.energy_audit {
        for snap in &snapshots {
            energy.push((snap.t, discrete_energy(&snap.fields, state, model)?));
        }
    }
    Ok(SimResult {
        snapshots,
        energy,
        final_fields: fields,
    })
}

/// Write one snapshot as CSV with columns `x,rho,S`.
pub fn write_snapshot_csv<W: std::io::Write>(snap: &Snapshot, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "x,rho,S")?;
    for i in 0..snap.fields.n() {
        writeln!(
            w,
            "{},{},{}",
            snap.fields.x(i),
            snap.fields.rho()[i],
            snap.fields.s()[i]
        )?;
    }
    Ok(())
}
