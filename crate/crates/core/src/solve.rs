//! Scalar bracketing and small damped-Newton solvers used by the transition
//! analysis.

use crate::error::{Error, Result};

/// Bisect `f` on a bracketing interval `[a, b]` (signs must differ) down to
/// an interval width of `tol`. Returns the midpoint of the final interval.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut xa, mut xb) = (a, b);
    let (mut fa, fb) = (f(xa)?, f(xb)?);
    if fa == 0.0 {
        return Ok(xa);
    }
    if fb == 0.0 {
        return Ok(xb);
    }
    if fa * fb > 0.0 {
        return Err(Error::InvalidInput(format!(
            "bisection bracket [{a}, {b}] does not change sign"
        )));
    }
    for _ in 0..200 {
        let xm = 0.5 * (xa + xb);
        if (xb - xa).abs() <= tol || xm == xa || xm == xb {
            return Ok(xm);
        }
        let fm = f(xm)?;
        if fm == 0.0 {
            return Ok(xm);
        }
        if fa * fm < 0.0 {
            xb = xm;
        } else {
            xa = xm;
            fa = fm;
        }
    }
    Ok(0.5 * (xa + xb))
}

/// Options for [`damped_newton`].
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub max_halvings: usize,
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-9,
            max_halvings: 20,
            fd_step: 1e-6,
        }
    }
}

/// Damped Newton iteration on a small system `F(x) = 0` with a forward/central
/// finite-difference Jacobian and step halving on residual-norm increase.
///
/// `f` returns `None` when the argument is inadmissible (for instance outside
/// a model's validity box); such trial steps are treated as failed and halved.
pub fn damped_newton<const N: usize, F>(
    mut f: F,
    x0: [f64; N],
    opts: &NewtonOptions,
) -> Result<[f64; N]>
where
    F: FnMut(&[f64; N]) -> Option<[f64; N]>,
{
    let mut x = x0;
    let mut fx = f(&x).ok_or_else(|| {
        Error::InvalidInput("Newton initial guess is inadmissible".into())
    })?;
    let mut norm = inf_norm(&fx);

    for _ in 0..opts.max_iterations {
        if norm < opts.tolerance {
            return Ok(x);
        }
        // Central-difference Jacobian column by column.
        let mut jac = [[0.0; N]; N];
        for j in 0..N {
            let h = opts.fd_step * (1.0 + x[j].abs());
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            match (f(&xp), f(&xm)) {
                (Some(fp), Some(fm)) => {
                    for i in 0..N {
                        jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
                    }
                }
                // Fall back to a one-sided difference at a box edge.
                (Some(fp), None) => {
                    for i in 0..N {
                        jac[i][j] = (fp[i] - fx[i]) / h;
                    }
                }
                (None, Some(fm)) => {
                    for i in 0..N {
                        jac[i][j] = (fx[i] - fm[i]) / h;
                    }
                }
                (None, None) => return Err(Error::SingularJacobian),
            }
        }
        let mut rhs = fx;
        for r in rhs.iter_mut() {
            *r = -*r;
        }
        let delta = solve_linear(jac, rhs)?;

        // Step halving on residual increase or inadmissible trial points.
        let mut accepted = false;
        let mut factor = 1.0;
        for _ in 0..=opts.max_halvings {
            let mut trial = x;
            for i in 0..N {
                trial[i] = x[i] + factor * delta[i];
            }
            if let Some(ft) = f(&trial) {
                let trial_norm = inf_norm(&ft);
                if trial_norm < norm || trial_norm < opts.tolerance {
                    x = trial;
                    fx = ft;
                    norm = trial_norm;
                    accepted = true;
                    break;
                }
            }
            factor *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations: opts.max_iterations,
                residual: norm,
            });
        }
    }
    if norm < opts.tolerance {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            residual: norm,
        })
    }
}

fn inf_norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Gaussian elimination with partial pivoting for the small dense systems
/// used here (N <= 3).
fn solve_linear<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Result<[f64; N]> {
    for col in 0..N {
        let mut pivot = col;
        for row in col + 1..N {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::SingularJacobian);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let m = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; N];
    for col in (0..N).rev() {
        let mut sum = b[col];
        for k in col + 1..N {
            sum -= a[col][k] * x[k];
        }
        x[col] = sum / a[col][col];
        if !x[col].is_finite() {
            return Err(Error::SingularJacobian);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bisect_finds_cubic_root() {
        let root = bisect(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert_abs_diff_eq!(root, 2f64.cbrt(), epsilon = 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn newton_solves_coupled_system() {
        // x^2 + y^2 = 4, x y = 1.
        let sol = damped_newton(
            |x: &[f64; 2]| Some([x[0] * x[0] + x[1] * x[1] - 4.0, x[0] * x[1] - 1.0]),
            [2.0, 0.3],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(sol[0] * sol[0] + sol[1] * sol[1], 4.0, epsilon = 1e-8);
        assert_abs_diff_eq!(sol[0] * sol[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn newton_reports_failure_far_from_roots() {
        // exp(x) + 1 has no real zero.
        let err = damped_newton(
            |x: &[f64; 1]| Some([x[0].exp() + 1.0]),
            [0.0],
            &NewtonOptions {
                max_iterations: 25,
                ..NewtonOptions::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
