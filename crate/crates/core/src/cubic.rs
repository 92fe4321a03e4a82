//! Closed-form real-root solver for cubic polynomials with a Newton polish.
//!
//! The discriminant decides between the one-real-root Cardano branch and the
//! three-real-root trigonometric branch; exactly degenerate cases (double and
//! triple roots) are dispatched separately so the solver stays deterministic
//! near folds.

/// All real roots of `c3 x^3 + c2 x^2 + c1 x + c0`, sorted ascending.
///
/// Degenerate leading coefficients fall through to the quadratic and linear
/// cases. Each root is polished with at most two Newton steps against the
/// original coefficients.
pub fn solve_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if c3.abs() <= 1e-14 * scale {
        return solve_quadratic(c2, c1, c0);
    }

    // Monic form x^3 + a x^2 + b x + c, then depressed t^3 + p t + q with
    // x = t - a/3.
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;

    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;
    let disc_scale = (half_q * half_q).max((third_p * third_p * third_p).abs());
    let degenerate = disc.abs() <= 1e-14 * disc_scale || disc_scale == 0.0;

    let mut roots = if degenerate {
        if p.abs() <= 1e-14 * (1.0 + q.abs().cbrt()).powi(2) && q.abs() <= f64::MIN_POSITIVE.sqrt()
        {
            // Triple root.
            vec![shift]
        } else {
            // Double root at 3q/(2p) plus a simple root at -3q/p.
            vec![-3.0 * q / p + shift, 1.5 * q / p + shift, 1.5 * q / p + shift]
        }
    } else if disc > 0.0 {
        // One real root; pick the larger-magnitude cube root to avoid
        // cancellation.
        let s = disc.sqrt();
        let u_cubed = if q >= 0.0 { -half_q - s } else { -half_q + s };
        let u = u_cubed.cbrt();
        let v = if u == 0.0 { 0.0 } else { -third_p / u };
        vec![u + v + shift]
    } else {
        // Three distinct real roots via the trigonometric form.
        let m = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_thirds_pi = 2.0 * std::f64::consts::PI / 3.0;
        vec![
            m * theta.cos() + shift,
            m * (theta - two_thirds_pi).cos() + shift,
            m * (theta + two_thirds_pi).cos() + shift,
        ]
    };

    for r in roots.iter_mut() {
        *r = polish(c3, c2, c1, c0, *r);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

fn solve_quadratic(c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let scale = c2.abs().max(c1.abs()).max(c0.abs());
    if c2.abs() <= 1e-14 * scale {
        if c1 == 0.0 {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    // Citardauq form on one root avoids cancellation.
    let q = -0.5 * (c1 + s.copysign(c1));
    let mut roots = if q == 0.0 {
        vec![0.0, -c1 / c2]
    } else {
        vec![q / c2, c0 / q]
    };
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

fn polish(c3: f64, c2: f64, c1: f64, c0: f64, mut x: f64) -> f64 {
    for _ in 0..2 {
        let f = ((c3 * x + c2) * x + c1) * x + c0;
        let fp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if fp.abs() <= 1e-30 {
            break;
        }
        let step = f / fp;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_factored_cubics() {
        // (x - 1)(x - 2)(x - 3)
        let roots = solve_cubic(1.0, -6.0, 11.0, -6.0);
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*r, want, epsilon = 1e-12);
        }
        // x^3 + x has the single real root 0.
        let roots = solve_cubic(1.0, 0.0, 1.0, 0.0);
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn repeated_roots() {
        // (x - 2)^2 (x - 1)
        let roots = solve_cubic(1.0, -5.0, 8.0, -4.0);
        assert_eq!(roots.len(), 3);
        assert_abs_diff_eq!(roots[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(roots[1], 2.0, epsilon = 1e-7);
        assert_abs_diff_eq!(roots[2], 2.0, epsilon = 1e-7);
        // (x - 3)^3
        let roots = solve_cubic(1.0, -9.0, 27.0, -27.0);
        for r in roots {
            assert_abs_diff_eq!(r, 3.0, epsilon = 1e-4);
        }
    }

    #[test]
    fn random_cubics_against_sign_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let c3 = rng.random_range(0.2..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let c2 = rng.random_range(-2.0..2.0);
            let c1 = rng.random_range(-2.0..2.0);
            let c0 = rng.random_range(-2.0..2.0);
            let f = |x: f64| ((c3 * x + c2) * x + c1) * x + c0;
            let mut scan_roots = Vec::new();
            let n = 20_000;
            let (lo, hi) = (-20.0, 20.0);
            let mut prev = f(lo);
            for i in 1..=n {
                let x = lo + (hi - lo) * i as f64 / n as f64;
                let val = f(x);
                if prev == 0.0 {
                    scan_roots.push(x - (hi - lo) / n as f64);
                } else if prev * val < 0.0 {
                    let (mut xa, mut xb) = (x - (hi - lo) / n as f64, x);
                    for _ in 0..80 {
                        let xm = 0.5 * (xa + xb);
                        if f(xa) * f(xm) <= 0.0 {
                            xb = xm;
                        } else {
                            xa = xm;
                        }
                    }
                    scan_roots.push(0.5 * (xa + xb));
                }
                prev = val;
            }
            let roots = solve_cubic(c3, c2, c1, c0);
            assert_eq!(
                roots.len(),
                scan_roots.len(),
                "root count mismatch for {c3} {c2} {c1} {c0}"
            );
            for (r, s) in roots.iter().zip(scan_roots.iter()) {
                assert_abs_diff_eq!(*r, *s, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn quadratic_and_linear_fallbacks() {
        let roots = solve_cubic(0.0, 1.0, -3.0, 2.0);
        assert_eq!(roots.len(), 2);
        assert_abs_diff_eq!(roots[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(roots[1], 2.0, epsilon = 1e-12);
        let roots = solve_cubic(0.0, 0.0, 2.0, -1.0);
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], 0.5, epsilon = 1e-12);
    }
}
