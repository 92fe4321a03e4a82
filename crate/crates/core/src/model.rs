//! Thermodynamic model of a single-species fluid in reduced units.
//!
//! The free-energy density is a quartic in the molar-density offset `rho`
//! coupled to an entropy offset `S`,
//!
//! ```text
//! G(rho, S) = 1/2 a1 rho^2 + 1/2 b1 S^2 + b2 S rho^2 - 1/3 a2 rho^3
//!           + 1/4 a3 rho^4 + 1/2 b rho^2 p - rho p - S T + Gref,
//! ```
//!
//! with coefficients `a1, a2, a3, b1, b2, b` that depend on temperature and
//! pressure. Eliminating the fast entropy variable through
//! `S = (T - b2 rho^2) / b1` yields a scalar potential whose negative
//! derivative is the cubic right-hand side of the density dynamics. This
//! module holds the coefficient tables, the free energies, the entropy
//! elimination, the reduction to `(lambda, a2, a3)` around a reference
//! density, and the van der Waals correspondence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum admissible cubic coefficient; smaller values are rejected as
/// degenerate rather than extrapolated.
pub const MIN_CUBIC_COEFF: f64 = 1e-12;

/// A temperature/pressure point in model units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub t: f64,
    pub p: f64,
}

impl ThermoState {
    pub fn new(t: f64, p: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "temperature must be positive and finite, got {t}"
            )));
        }
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "pressure must be positive and finite, got {p}"
            )));
        }
        Ok(Self { t, p })
    }
}

/// Polynomial in `(T - tref, p - pref)` up to total degree 2.
///
/// Coefficient order is fixed: constant, T, p, T^2, T*p, p^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Poly2(pub [f64; 6]);

impl Poly2 {
    pub const fn constant(c: f64) -> Self {
        Self([c, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub const fn linear(c: f64, ct: f64, cp: f64) -> Self {
        Self([c, ct, cp, 0.0, 0.0, 0.0])
    }

    pub fn eval(&self, dt: f64, dp: f64) -> f64 {
        let c = &self.0;
        c[0] + c[1] * dt + c[2] * dp + c[3] * dt * dt + c[4] * dt * dp + c[5] * dp * dp
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

/// Closed rectangle in the `(T, p)` plane on which a model is declared valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityBox {
    pub t_min: f64,
    pub t_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl ValidityBox {
    pub fn new(t_min: f64, t_max: f64, p_min: f64, p_max: f64) -> Result<Self> {
        let ok = t_min > 0.0 && p_min > 0.0 && t_min < t_max && p_min < p_max;
        let finite = [t_min, t_max, p_min, p_max].iter().all(|v| v.is_finite());
        if !ok || !finite {
            return Err(Error::InvalidInput(format!(
                "validity box [{t_min}, {t_max}] x [{p_min}, {p_max}] is empty or not positive"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            p_min,
            p_max,
        })
    }

    pub fn contains(&self, state: ThermoState) -> bool {
        state.t >= self.t_min && state.t <= self.t_max && state.p >= self.p_min && state.p <= self.p_max
    }
}

/// Named coefficient families; the polynomial tables fully determine behavior,
/// the tag records how the model was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Constant,
    Vdw,
    Landau,
    Custom,
}

/// The six coefficient values at one `(T, p)` state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientValues {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub b: f64,
}

impl CoefficientValues {
    /// Linear coefficient of the entropy-eliminated density equation,
    /// `alpha1 + b p + 2 beta2 T / beta1`.
    pub fn linear_coeff(&self, state: ThermoState) -> f64 {
        self.alpha1 + self.b * state.p + 2.0 * self.beta2 * state.t / self.beta1
    }

    /// Cubic coefficient after entropy elimination, `alpha3 - 2 beta2^2 / beta1`.
    pub fn cubic_coeff(&self) -> f64 {
        self.alpha3 - 2.0 * self.beta2 * self.beta2 / self.beta1
    }

    /// Right-hand side of the entropy-eliminated density dynamics,
    /// `-(alpha1 + b p + 2 beta2 T / beta1) rho + alpha2 rho^2 - a3 rho^3 + p`.
    pub fn density_rhs(&self, rho: f64, state: ThermoState) -> f64 {
        -self.linear_coeff(state) * rho + self.alpha2 * rho * rho
            - self.cubic_coeff() * rho * rho * rho
            + state.p
    }

    /// Derivative of [`Self::density_rhs`] with respect to `rho`.
    pub fn density_rhs_prime(&self, rho: f64, state: ThermoState) -> f64 {
        -self.linear_coeff(state) + 2.0 * self.alpha2 * rho - 3.0 * self.cubic_coeff() * rho * rho
    }

    /// Shift the density equation to `rho0 + rho'` and read off the reduced
    /// coefficients `(lambda, a2, a3)`.
    pub fn reduced_coefficients(&self, rho0: f64, state: ThermoState) -> Result<ReducedCoeffs> {
        let a3 = self.cubic_coeff();
        let lambda = 2.0 * self.alpha2 * rho0 - 3.0 * a3 * rho0 * rho0 - self.linear_coeff(state);
        let a2 = self.alpha2 - 3.0 * a3 * rho0;
        ReducedCoeffs::new(lambda, a2, a3, rho0)
    }
}

/// `(T, p)`-dependent coefficients of the free energy, as a named preset plus
/// a degree-2 polynomial table in `(T - tref, p - pref)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientModel {
    preset: Preset,
    tref: f64,
    pref: f64,
    alpha1: Poly2,
    alpha2: Poly2,
    alpha3: Poly2,
    beta1: Poly2,
    beta2: Poly2,
    b: Poly2,
    mu1: f64,
    mu2: f64,
    gref: f64,
    validity: ValidityBox,
}

impl CoefficientModel {
    /// Model with all six coefficients constant.
    pub fn constant(
        alpha1: f64,
        alpha2: f64,
        alpha3: f64,
        beta1: f64,
        beta2: f64,
        b: f64,
        validity: ValidityBox,
    ) -> Result<Self> {
        Self::custom(
            Preset::Constant,
            0.0,
            0.0,
            [
                Poly2::constant(alpha1),
                Poly2::constant(alpha2),
                Poly2::constant(alpha3),
                Poly2::constant(beta1),
                Poly2::constant(beta2),
                Poly2::constant(b),
            ],
            validity,
        )
    }

    /// Model whose steady-state density equation coincides with the van der
    /// Waals isotherm: `alpha1 = 0`, `beta2 = R beta1 / 2`, `alpha2 = a`,
    /// `alpha3 = a b + 2 beta2^2 / beta1`, `b(T,p) = b`.
    ///
    /// The correspondence fixes only the ratio `2 beta2 / beta1 = R`; `beta1`
    /// itself is a free positive scalar.
    pub fn vdw_compatible(vdw: VdwParams, beta1: f64) -> Result<Self> {
        let t_c = 8.0 * vdw.a / (27.0 * vdw.r * vdw.b);
        let p_c = vdw.a / (27.0 * vdw.b * vdw.b);
        let validity = ValidityBox::new(0.05 * t_c, 4.0 * t_c, 0.005 * p_c, 30.0 * p_c)?;
        Self::vdw_compatible_with_box(vdw, beta1, validity)
    }

    /// As [`Self::vdw_compatible`] with an explicit validity box.
    pub fn vdw_compatible_with_box(
        vdw: VdwParams,
        beta1: f64,
        validity: ValidityBox,
    ) -> Result<Self> {
        if !(beta1 > 0.0) || !beta1.is_finite() {
            return Err(Error::InvalidInput(format!(
                "beta1 must be positive, got {beta1}"
            )));
        }
        let beta2 = vdw.r * beta1 / 2.0;
        let alpha3 = vdw.a * vdw.b + 2.0 * beta2 * beta2 / beta1;
        Self::custom(
            Preset::Vdw,
            0.0,
            0.0,
            [
                Poly2::constant(0.0),
                Poly2::constant(vdw.a),
                Poly2::constant(alpha3),
                Poly2::constant(beta1),
                Poly2::constant(beta2),
                Poly2::constant(vdw.b),
            ],
            validity,
        )
    }

    /// Model realizing prescribed local behavior around a pinned reference
    /// branch; see [`LandauModelSpec`].
    pub fn landau(spec: &LandauModelSpec) -> Result<Self> {
        spec.build()
    }

    /// Fully custom polynomial tables. `coeffs` order: alpha1, alpha2,
    /// alpha3, beta1, beta2, b.
    pub fn custom(
        preset: Preset,
        tref: f64,
        pref: f64,
        coeffs: [Poly2; 6],
        validity: ValidityBox,
    ) -> Result<Self> {
        if !tref.is_finite() || !pref.is_finite() || !coeffs.iter().all(Poly2::is_finite) {
            return Err(Error::InvalidModel("non-finite coefficient table".into()));
        }
        let [alpha1, alpha2, alpha3, beta1, beta2, b] = coeffs;
        let model = Self {
            preset,
            tref,
            pref,
            alpha1,
            alpha2,
            alpha3,
            beta1,
            beta2,
            b,
            mu1: 0.0,
            mu2: 0.0,
            gref: 0.0,
            validity,
        };
        // Fail early when even the box center violates positivity; every
        // evaluation re-checks regardless.
        let center = ThermoState::new(
            0.5 * (validity.t_min + validity.t_max),
            0.5 * (validity.p_min + validity.p_max),
        )?;
        model.eval_coefficients(center)?;
        Ok(model)
    }

    /// Set the gradient-energy coefficients used by the spatially extended
    /// dynamics.
    pub fn with_gradient_coeffs(mut self, mu1: f64, mu2: f64) -> Result<Self> {
        if !(mu1 >= 0.0) || !(mu2 >= 0.0) || !mu1.is_finite() || !mu2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "gradient coefficients must be nonnegative, got mu1={mu1}, mu2={mu2}"
            )));
        }
        self.mu1 = mu1;
        self.mu2 = mu2;
        Ok(self)
    }

    /// Set the additive free-energy constant.
    pub fn with_gref(mut self, gref: f64) -> Self {
        self.gref = gref;
        self
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn tref(&self) -> f64 {
        self.tref
    }

    pub fn pref(&self) -> f64 {
        self.pref
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn gref(&self) -> f64 {
        self.gref
    }

    pub fn validity(&self) -> ValidityBox {
        self.validity
    }

    /// Evaluate the six coefficients at `state`, enforcing the validity box
    /// and the positivity of `alpha2`, `alpha3`, `beta1`.
    pub fn eval_coefficients(&self, state: ThermoState) -> Result<CoefficientValues> {
        if !self.validity.contains(state) {
            return Err(Error::OutsideValidityBox {
                t: state.t,
                p: state.p,
            });
        }
        let dt = state.t - self.tref;
        let dp = state.p - self.pref;
        let values = CoefficientValues {
            alpha1: self.alpha1.eval(dt, dp),
            alpha2: self.alpha2.eval(dt, dp),
            alpha3: self.alpha3.eval(dt, dp),
            beta1: self.beta1.eval(dt, dp),
            beta2: self.beta2.eval(dt, dp),
            b: self.b.eval(dt, dp),
        };
        for (name, value) in [
            ("alpha2", values.alpha2),
            ("alpha3", values.alpha3),
            ("beta1", values.beta1),
        ] {
            if !(value > 0.0) {
                return Err(Error::PositivityViolation {
                    name,
                    value,
                    t: state.t,
                    p: state.p,
                });
            }
        }
        Ok(values)
    }

    /// Homogeneous free energy
    /// `G = 1/2 a1 rho^2 + 1/2 b1 S^2 + b2 S rho^2 - 1/3 a2 rho^3 + 1/4 a3 rho^4
    ///    + 1/2 b rho^2 p - rho p - S T + Gref`.
    pub fn gibbs_homogeneous(&self, rho: f64, s: f64, state: ThermoState) -> Result<f64> {
        let c = self.eval_coefficients(state)?;
        Ok(self.gibbs_homogeneous_with(&c, rho, s, state))
    }

    /// As [`Self::gibbs_homogeneous`] with pre-evaluated coefficients.
    pub fn gibbs_homogeneous_with(
        &self,
        c: &CoefficientValues,
        rho: f64,
        s: f64,
        state: ThermoState,
    ) -> f64 {
        let rho2 = rho * rho;
        0.5 * c.alpha1 * rho2 + 0.5 * c.beta1 * s * s + c.beta2 * s * rho2
            - c.alpha2 * rho2 * rho / 3.0
            + 0.25 * c.alpha3 * rho2 * rho2
            + 0.5 * c.b * rho2 * state.p
            - rho * state.p
            - s * state.t
            + self.gref
    }

    /// Entropy value `S = (T - beta2 rho^2) / beta1` that zeroes the entropy
    /// equation of the coupled dynamics.
    pub fn eliminate_entropy(&self, rho: f64, state: ThermoState) -> Result<f64> {
        let c = self.eval_coefficients(state)?;
        Ok((state.t - c.beta2 * rho * rho) / c.beta1)
    }

    /// Free energy after entropy elimination,
    /// `-T^2/(2 b1) + 1/2 (a1 + b p + 2 b2 T / b1) rho^2 - 1/3 a2 rho^3
    ///  + 1/4 (a3 - 2 b2^2 / b1) rho^4 - p rho + Gref`.
    pub fn gibbs_reduced(&self, rho: f64, state: ThermoState) -> Result<f64> {
        let c = self.eval_coefficients(state)?;
        Ok(self.gibbs_reduced_with(&c, rho, state))
    }

    /// As [`Self::gibbs_reduced`] with pre-evaluated coefficients.
    pub fn gibbs_reduced_with(&self, c: &CoefficientValues, rho: f64, state: ThermoState) -> f64 {
        let rho2 = rho * rho;
        -0.5 * state.t * state.t / c.beta1 + 0.5 * c.linear_coeff(state) * rho2
            - c.alpha2 * rho2 * rho / 3.0
            + 0.25 * c.cubic_coeff() * rho2 * rho2
            - state.p * rho
            + self.gref
    }

    /// Right-hand side of the entropy-eliminated density dynamics at `rho`.
    pub fn density_rhs(&self, rho: f64, state: ThermoState) -> Result<f64> {
        let c = self.eval_coefficients(state)?;
        Ok(c.density_rhs(rho, state))
    }

    /// Reduced coefficients `(lambda, a2, a3)` of the dynamics shifted to the
    /// reference density `rho0`.
    pub fn reduced_coefficients(&self, rho0: f64, state: ThermoState) -> Result<ReducedCoeffs> {
        let c = self.eval_coefficients(state)?;
        c.reduced_coefficients(rho0, state)
    }

    /// Serialize to the documented JSON schema.
    pub fn to_json_string(&self) -> String {
        let dto = ModelJson::from(self);
        serde_json::to_string_pretty(&dto).expect("model serialization cannot fail")
    }

    /// Deserialize from the documented JSON schema, validating invariants.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let dto: ModelJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        dto.try_into()
    }
}

/// Prescription for a model with a pinned reference branch `rho0 = 1` and
/// prescribed local behavior there: `lambda(T, p) = alpha_slope (t_c - T)` and
/// `a2(T, p) = a2_c + a2_p_slope (p - p_c)`, where `p_c = a3_c + a2_c` is
/// forced by the construction. The entropy coupling is switched off
/// (`beta2 = 0`), so the reduced cubic coefficient equals `alpha3`, which
/// varies linearly in `T` and equals `a3_c` at `(t_c, p_c)`.
#[derive(Debug, Clone, Copy)]
pub struct LandauModelSpec {
    pub alpha_slope: f64,
    pub t_c: f64,
    pub a2_c: f64,
    pub a3_c: f64,
    pub a2_p_slope: f64,
}

impl LandauModelSpec {
    pub fn new(alpha_slope: f64, t_c: f64, a2_c: f64, a3_c: f64) -> Self {
        Self {
            alpha_slope,
            t_c,
            a2_c,
            a3_c,
            a2_p_slope: 1.0,
        }
    }

    /// Critical pressure forced by the construction.
    pub fn p_c(&self) -> f64 {
        self.a3_c + self.a2_c
    }

    /// Reference branch pinned by the construction.
    pub fn rho0(&self) -> f64 {
        1.0
    }

    pub fn build(&self) -> Result<CoefficientModel> {
        let (alpha, t_c, q0, q1) = (self.alpha_slope, self.t_c, self.a2_c, self.a2_p_slope);
        if !(alpha > 0.0) || !(self.a3_c > 0.0) || !(t_c > 0.0) {
            return Err(Error::InvalidInput(
                "landau spec requires alpha_slope > 0, a3_c > 0, t_c > 0".into(),
            ));
        }
        let p_c = self.p_c();
        if !(p_c > 0.0) {
            return Err(Error::InvalidInput(format!(
                "landau spec yields non-positive critical pressure p_c = {p_c}"
            )));
        }
        // Targets at the pinned branch rho0 = 1 with beta2 = 0, b = 1:
        //   L(T)    = alpha (t_c - T)
        //   Q(T, p) = q0 + q1 (p - p_c)
        //   alpha3  = L + p - Q,  alpha2 = 3 L + 3 p - 2 Q,  alpha1 = alpha2 - alpha3.
        // Expanded around (tref, pref) = (t_c, p_c):
        let alpha3 = Poly2::linear(self.a3_c, -alpha, 1.0 - q1);
        let alpha2 = Poly2::linear(3.0 * p_c - 2.0 * q0, -3.0 * alpha, 3.0 - 2.0 * q1);
        let alpha1 = Poly2::linear(2.0 * p_c - q0, -2.0 * alpha, 2.0 - q1);
        // Shrink the box until alpha2 and alpha3 stay positive on it.
        let mut half_t = 0.45 * self.a3_c / alpha;
        let mut half_p = 0.45 * p_c;
        for _ in 0..60 {
            let corners_ok = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
                .iter()
                .all(|(st, sp)| {
                    let dt = st * half_t;
                    let dp = sp * half_p;
                    alpha2.eval(dt, dp) > 0.0 && alpha3.eval(dt, dp) > 0.0
                });
            if corners_ok && t_c - half_t > 0.0 && p_c - half_p > 0.0 {
                break;
            }
            half_t *= 0.7;
            half_p *= 0.7;
        }
        let validity = ValidityBox::new(t_c - half_t, t_c + half_t, p_c - half_p, p_c + half_p)?;
        CoefficientModel::custom(
            Preset::Landau,
            t_c,
            p_c,
            [
                alpha1,
                alpha2,
                alpha3,
                Poly2::constant(1.0),
                Poly2::constant(0.0),
                Poly2::constant(1.0),
            ],
            validity,
        )
    }
}

/// Van der Waals equation-of-state parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VdwParams {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl VdwParams {
    pub fn new(a: f64, b: f64, r: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && r > 0.0) || ![a, b, r].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "van der Waals parameters must be positive, got a={a}, b={b}, r={r}"
            )));
        }
        Ok(Self { a, b, r })
    }

    /// Residual of the equation of state in molar-density form,
    /// `-(b p + R T) rho + a rho^2 - a b rho^3 + p`.
    pub fn residual_density(&self, rho: f64, state: ThermoState) -> f64 {
        -(self.b * state.p + self.r * state.t) * rho + self.a * rho * rho
            - self.a * self.b * rho * rho * rho
            + state.p
    }

    /// Residual of the equation of state in molar-volume form,
    /// `v^3 - (b + R T / p) v^2 + (a / p) v - a b / p`.
    pub fn residual_volume(&self, v: f64, state: ThermoState) -> f64 {
        v * v * v - (self.b + self.r * state.t / state.p) * v * v + self.a / state.p * v
            - self.a * self.b / state.p
    }
}

/// Reduced coefficients `(lambda, a2, a3)` of the scalar dynamics
/// `d rho/dt = lambda rho + a2 rho^2 - a3 rho^3`, taken around the reference
/// density `rho0`. Construction rejects `a3 <= 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedCoeffs {
    lambda: f64,
    a2: f64,
    a3: f64,
    rho0: f64,
}

impl ReducedCoeffs {
    pub fn new(lambda: f64, a2: f64, a3: f64, rho0: f64) -> Result<Self> {
        if !(a3 > MIN_CUBIC_COEFF) {
            return Err(Error::NonPositiveCubic { a3 });
        }
        if ![lambda, a2, rho0].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("non-finite reduced coefficients".into()));
        }
        Ok(Self {
            lambda,
            a2,
            a3,
            rho0,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    /// `lambda x + a2 x^2 - a3 x^3`.
    pub fn rhs(&self, x: f64) -> f64 {
        self.lambda * x + self.a2 * x * x - self.a3 * x * x * x
    }

    /// `lambda + 2 a2 x - 3 a3 x^2`.
    pub fn rhs_prime(&self, x: f64) -> f64 {
        self.lambda + 2.0 * self.a2 * x - 3.0 * self.a3 * x * x
    }

    /// Potential whose negative derivative is [`Self::rhs`]:
    /// `-lambda x^2 / 2 - a2 x^3 / 3 + a3 x^4 / 4`.
    pub fn potential(&self, x: f64) -> f64 {
        let x2 = x * x;
        -0.5 * self.lambda * x2 - self.a2 * x2 * x / 3.0 + 0.25 * self.a3 * x2 * x2
    }

    /// `a2^2 + 4 a3 lambda`; nonzero equilibria exist iff this is nonnegative.
    pub fn discriminant(&self) -> f64 {
        self.a2 * self.a2 + 4.0 * self.a3 * self.lambda
    }

    /// The pair `(rho_minus, rho_plus) = (a2 -+ sqrt(disc)) / (2 a3)` when the
    /// discriminant is nonnegative.
    pub fn transition_pair(&self) -> Option<(f64, f64)> {
        let disc = self.discriminant();
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some(((self.a2 - s) / (2.0 * self.a3), (self.a2 + s) / (2.0 * self.a3)))
    }

    /// Location of the double root when the discriminant vanishes,
    /// `a2 / (2 a3)`.
    pub fn double_root(&self) -> f64 {
        self.a2 / (2.0 * self.a3)
    }
}

/// Local mean-field data at a second-order point: `lambda(T) = alpha (T_C - T)`
/// with quadratic coefficient `a2` and cubic coefficient `a3` frozen at the
/// critical state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandauLocal {
    pub alpha_slope: f64,
    pub t_c: f64,
    pub a3: f64,
    pub a2: f64,
}

impl LandauLocal {
    pub fn new(alpha_slope: f64, t_c: f64, a3: f64, a2: f64) -> Result<Self> {
        if !(alpha_slope > 0.0) {
            return Err(Error::InvalidInput(format!(
                "alpha_slope must be positive, got {alpha_slope}"
            )));
        }
        if !(a3 > 0.0) {
            return Err(Error::NonPositiveCubic { a3 });
        }
        Ok(Self {
            alpha_slope,
            t_c,
            a3,
            a2,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffsJson {
    alpha1: [f64; 6],
    alpha2: [f64; 6],
    alpha3: [f64; 6],
    beta1: [f64; 6],
    beta2: [f64; 6],
    b: [f64; 6],
}

#[derive(Serialize, Deserialize)]
struct BoxJson {
    tmin: f64,
    tmax: f64,
    pmin: f64,
    pmax: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    preset: Preset,
    tref: f64,
    pref: f64,
    coeffs: CoeffsJson,
    mu1: f64,
    mu2: f64,
    gref: f64,
    #[serde(rename = "box")]
    validity: BoxJson,
}

impl From<&CoefficientModel> for ModelJson {
    fn from(m: &CoefficientModel) -> Self {
        Self {
            preset: m.preset,
            tref: m.tref,
            pref: m.pref,
            coeffs: CoeffsJson {
                alpha1: m.alpha1.0,
                alpha2: m.alpha2.0,
                alpha3: m.alpha3.0,
                beta1: m.beta1.0,
                beta2: m.beta2.0,
                b: m.b.0,
            },
            mu1: m.mu1,
            mu2: m.mu2,
            gref: m.gref,
            validity: BoxJson {
                tmin: m.validity.t_min,
                tmax: m.validity.t_max,
                pmin: m.validity.p_min,
                pmax: m.validity.p_max,
            },
        }
    }
}

impl TryFrom<ModelJson> for CoefficientModel {
    type Error = Error;

    fn try_from(dto: ModelJson) -> Result<Self> {
        let validity = ValidityBox::new(
            dto.validity.tmin,
            dto.validity.tmax,
            dto.validity.pmin,
            dto.validity.pmax,
        )?;
        let model = CoefficientModel::custom(
            dto.preset,
            dto.tref,
            dto.pref,
            [
                Poly2(dto.coeffs.alpha1),
                Poly2(dto.coeffs.alpha2),
                Poly2(dto.coeffs.alpha3),
                Poly2(dto.coeffs.beta1),
                Poly2(dto.coeffs.beta2),
                Poly2(dto.coeffs.b),
            ],
            validity,
        )?;
        model.with_gradient_coeffs(dto.mu1, dto.mu2).map(|m| m.with_gref(dto.gref))
    }
}
