// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scalar root finding, one dimensional minimization, adaptive quadrature,
//! linear least squares and a dense Levenberg-Marquardt driver.
//!
//! These are deliberately small, dependency-light routines tuned for the
//! smooth low dimensional problems of this crate rather than general
//! purpose optimization.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Find a root of `f` inside `[lo, hi]` by a bracketed secant-bisection
/// hybrid.
///
/// The bracket must show a sign change. Secant steps are taken whenever
/// they stay inside the current bracket, otherwise the step falls back to
/// bisection, so convergence is at worst that of bisection. Iteration
/// stops when the bracket width drops below
/// `tol_abs + tol_rel * |midpoint|`.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol_abs: f64, tol_rel: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "invalid bracket [{lo}, {hi}]"
        )));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::InvalidParameter(
            "function is NaN at a bracket endpoint".into(),
        ));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed(format!(
            "f({a}) = {fa:e} and f({b}) = {fb:e} have the same sign"
        )));
    }

    const MAX_ITER: usize = 200;
    // Plain false position can pin one endpoint and stop shrinking the
    // bracket, so any iteration that fails to halve it forces a
    // bisection next; the bracket then at least halves every two steps.
    let mut force_bisect = false;
    for _ in 0..MAX_ITER {
        let width = b - a;
        let mid = 0.5 * (a + b);
        if width <= tol_abs + tol_rel * mid.abs() {
            return Ok(mid);
        }
        let mut x = mid;
        if !force_bisect {
            let denom = fb - fa;
            if denom != 0.0 {
                let secant = b - fb * (b - a) / denom;
                if secant > a && secant < b {
                    x = secant;
                }
            }
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.is_nan() {
            return Err(Error::NonConvergence(format!("f({x}) is NaN")));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisect = (b - a) > 0.5 * width;
    }
    Err(Error::NonConvergence(format!(
        "root finder exhausted {MAX_ITER} iterations, bracket [{a}, {b}]"
    )))
}

/// Minimize a unimodal `f` on `[lo, hi]` by golden section search.
///
/// Returns `(argmin, min)`. The final interval is shrunk to
/// `width_frac` of the initial one, so the answer is accurate to about
/// `width_frac * (hi - lo)` in the argument.
pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, width_frac: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let iterations = ((width_frac.ln() / INV_PHI.ln()).ceil().max(1.0)) as usize;
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Integrate `f` over `[a, b]` with adaptive Simpson quadrature to the
/// given absolute tolerance.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_recurse(f, a, b, fa, fb, fm, whole, abs_tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    abs_tol: f64,
    depth: usize,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // The floor keeps an unattainably small tolerance from splitting
    // forever once the error estimate is pure roundoff.
    let floor = f64::EPSILON * (left.abs() + right.abs() + whole.abs());
    if depth == 0 || delta.abs() <= (15.0 * abs_tol).max(floor) {
        // Richardson correction gives one extra order.
        return left + right + delta / 15.0;
    }
    simpson_recurse(f, a, m, fa, fm, flm, left, 0.5 * abs_tol, depth - 1)
        + simpson_recurse(f, m, b, fm, fb, frm, right, 0.5 * abs_tol, depth - 1)
}

/// Solve `a x = b` in the least squares sense through an SVD.
pub fn linear_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if a.nrows() != b.len() {
        return Err(Error::InvalidParameter(format!(
            "matrix has {} rows but rhs has {} entries",
            a.nrows(),
            b.len()
        )));
    }
    a.clone()
        .svd(true, true)
        .solve(b, 1e-14)
        .map_err(|e| Error::SingularSteadyState(format!("least squares solve failed: {e}")))
}

/// Options for [`levenberg_marquardt`].
#[derive(Debug, Clone)]
pub struct LmOptions {
    /// Maximum number of accepted iterations.
    pub max_iterations: usize,
    /// Converged when the gradient norm falls below this fraction of the
    /// initial residual norm.
    pub gradient_tol_rel: f64,
    /// Initial damping parameter.
    pub initial_lambda: f64,
    /// Relative step used by the central difference Jacobian.
    pub step_rel: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            gradient_tol_rel: 1e-8,
            initial_lambda: 1e-3,
            step_rel: 1e-6,
        }
    }
}

/// Outcome of a Levenberg-Marquardt run.
#[derive(Debug, Clone)]
pub struct LmResult {
    /// Parameter vector at the last accepted point.
    pub params: Vec<f64>,
    /// Euclidean norm of the residual vector there.
    pub residual_norm: f64,
    /// Euclidean norm of the cost gradient `J^T r` there.
    pub gradient_norm: f64,
    /// Accepted iterations performed.
    pub iterations: usize,
    /// Whether the gradient criterion was met.
    pub converged: bool,
    /// Jacobian at the last accepted point (central differences).
    pub jacobian: DMatrix<f64>,
    /// Residual vector at the last accepted point.
    pub residuals: Vec<f64>,
}

/// Minimize `|residual_fn(p)|^2 / 2` with damped Gauss-Newton steps.
///
/// The Jacobian is formed by central differences, which costs two model
/// evaluations per parameter but keeps the gradient accurate enough for a
/// tight convergence threshold. A model evaluation returning an error at a
/// trial point is treated as an infinitely bad step (the damping is
/// increased); an error at the starting point is fatal.
pub fn levenberg_marquardt<F>(residual_fn: F, initial: &[f64], opts: &LmOptions) -> Result<LmResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    const LAMBDA_MAX: f64 = 1e12;
    let n_params = initial.len();
    if n_params == 0 {
        return Err(Error::InvalidParameter("no fit parameters".into()));
    }

    let mut params = initial.to_vec();
    let mut residuals = residual_fn(&params)?;
    if residuals.len() < n_params {
        return Err(Error::InvalidParameter(format!(
            "{} residuals cannot determine {} parameters",
            residuals.len(),
            n_params
        )));
    }
    let mut cost = dot(&residuals, &residuals);
    let initial_norm = cost.sqrt();
    let gradient_target = opts.gradient_tol_rel * initial_norm.max(f64::MIN_POSITIVE);

    let jacobian_at = |p: &[f64]| -> Result<DMatrix<f64>> {
        let m = residual_fn(p)?.len();
        let mut jac = DMatrix::zeros(m, n_params);
        let mut probe = p.to_vec();
        for k in 0..n_params {
            let h = opts.step_rel * (p[k].abs() + 1.0);
            probe[k] = p[k] + h;
            let plus = residual_fn(&probe)?;
            probe[k] = p[k] - h;
            let minus = residual_fn(&probe)?;
            probe[k] = p[k];
            for i in 0..m {
                jac[(i, k)] = (plus[i] - minus[i]) / (2.0 * h);
            }
        }
        Ok(jac)
    };

    let mut lambda = opts.initial_lambda;
    let mut jac = jacobian_at(&params)?;
    let mut iterations = 0;

    loop {
        let r_vec = DVector::from_column_slice(&residuals);
        let gradient = jac.transpose() * &r_vec;
        let gradient_norm = gradient.norm();
        if gradient_norm <= gradient_target {
            return Ok(LmResult {
                params,
                residual_norm: cost.sqrt(),
                gradient_norm,
                iterations,
                converged: true,
                jacobian: jac,
                residuals,
            });
        }
        if iterations >= opts.max_iterations {
            return Ok(LmResult {
                params,
                residual_norm: cost.sqrt(),
                gradient_norm,
                iterations,
                converged: false,
                jacobian: jac,
                residuals,
            });
        }

        let jtj = jac.transpose() * &jac;
        // Marquardt scaling: damp along the curvature diagonal so poorly
        // scaled directions are not frozen out.
        let mut step_taken = false;
        while lambda <= LAMBDA_MAX {
            let mut system = jtj.clone();
            for k in 0..n_params {
                let d = jtj[(k, k)].max(1e-12);
                system[(k, k)] += lambda * d;
            }
            let delta = match system.lu().solve(&(-&gradient)) {
                Some(d) => d,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial: Vec<f64> = params
                .iter()
                .zip(delta.iter())
                .map(|(p, d)| p + d)
                .collect();
            match residual_fn(&trial) {
                Ok(trial_res) => {
                    let trial_cost = dot(&trial_res, &trial_res);
                    if trial_cost.is_finite() && trial_cost < cost {
                        params = trial;
                        residuals = trial_res;
                        cost = trial_cost;
                        lambda = (lambda / 3.0).max(1e-12);
                        step_taken = true;
                        break;
                    }
                    lambda *= 10.0;
                }
                // Trial point outside the model domain: damp harder.
                Err(_) => lambda *= 10.0,
            }
        }
        if !step_taken {
            let gradient_norm = gradient.norm();
            return Ok(LmResult {
                params,
                residual_norm: cost.sqrt(),
                gradient_norm,
                iterations,
                converged: gradient_norm <= gradient_target,
                jacobian: jac,
                residuals,
            });
        }
        iterations += 1;
        jac = jacobian_at(&params)?;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn root_of_cubic_on_wide_bracket() {
        let f = |x: f64| x * x * x - 2.0;
        let root = find_root(f, 0.0, 10.0, 0.0, 1e-12).unwrap();
        assert_relative_eq!(root, 2.0_f64.cbrt(), max_relative = 1e-10);
    }

    #[test]
    fn root_requires_sign_change() {
        let f = |x: f64| x * x + 1.0;
        assert!(matches!(
            find_root(f, -1.0, 1.0, 0.0, 1e-9),
            Err(Error::NotBracketed(_))
        ));
    }

    #[test]
    fn root_accepts_endpoint_zero() {
        let f = |x: f64| x - 1.0;
        assert_eq!(find_root(f, 1.0, 2.0, 0.0, 1e-9).unwrap(), 1.0);
    }

    #[test]
    fn golden_section_finds_quartic_minimum() {
        // A quartic is numerically flat within ~1.5e-4 of its minimum
        // (the fourth power drops below one ulp of the offset), which
        // bounds how tightly any comparison-based search can localize.
        let f = |x: f64| (x - 0.7).powi(4) + 3.0;
        let (xm, fm) = golden_section_min(f, -2.0, 2.0, 1e-9);
        assert!((xm - 0.7).abs() < 1e-3);
        assert_relative_eq!(fm, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn golden_section_localizes_sharp_kink() {
        let f = |x: f64| (x - 0.7).abs() + 3.0;
        let (xm, fm) = golden_section_min(f, -2.0, 2.0, 1e-9);
        assert!((xm - 0.7).abs() < 1e-7);
        assert_relative_eq!(fm, 3.0, max_relative = 1e-7);
    }

    #[test]
    fn simpson_integrates_gaussian_core() {
        let f = |x: f64| (-x * x / 2.0).exp();
        let got = adaptive_simpson(&f, -8.0, 8.0, 1e-12);
        let want = (2.0 * std::f64::consts::PI).sqrt();
        assert_relative_eq!(got, want, max_relative = 1e-10);
    }

    #[test]
    fn simpson_handles_narrow_peak() {
        // Unit-area Lorentzian with a width far smaller than the interval.
        let w = 1e-3;
        let f = move |x: f64| (w / (2.0 * std::f64::consts::PI)) / (x * x + w * w / 4.0);
        let got = adaptive_simpson(&f, -50.0, 50.0, 1e-10);
        assert!((got - 1.0).abs() < 1e-4, "got {got}");
    }

    #[test]
    fn least_squares_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let a = DMatrix::from_fn(4, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let b = DVector::from_fn(4, |i, _| 0.5 + 2.0 * xs[i]);
        let sol = linear_least_squares(&a, &b).unwrap();
        assert_relative_eq!(sol[0], 0.5, max_relative = 1e-12);
        assert_relative_eq!(sol[1], 2.0, max_relative = 1e-12);
    }

    #[test]
    fn lm_fits_exponential_data() {
        let ts: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let truth = [2.0, -0.7];
        let data: Vec<f64> = ts.iter().map(|t| truth[0] * (truth[1] * t).exp()).collect();
        let ts_for_model = ts.clone();
        let model = move |p: &[f64]| -> Result<Vec<f64>> {
            Ok(ts_for_model
                .iter()
                .zip(&data)
                .map(|(t, d)| p[0] * (p[1] * t).exp() - d)
                .collect())
        };
        let out = levenberg_marquardt(model, &[1.0, -0.2], &LmOptions::default()).unwrap();
        assert!(out.converged, "gradient norm {}", out.gradient_norm);
        assert_relative_eq!(out.params[0], truth[0], max_relative = 1e-7);
        assert_relative_eq!(out.params[1], truth[1], max_relative = 1e-7);
    }

    #[test]
    fn lm_reports_failure_on_iteration_budget() {
        // The classic banana valley needs far more than three steps from
        // the standard start, so the budget runs out first.
        let model = |p: &[f64]| -> Result<Vec<f64>> {
            Ok(vec![10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]])
        };
        let opts = LmOptions {
            max_iterations: 3,
            ..LmOptions::default()
        };
        let out = levenberg_marquardt(model, &[-1.2, 1.0], &opts).unwrap();
        assert!(!out.converged);
    }
}
