//! Quasi-Newton maximization for smooth, low-dimensional objectives.
//!
//! BFGS with a strong-Wolfe cubic line search, written as a maximizer
//! because every caller in this crate hands it a log-likelihood. Callers
//! supply the analytic gradient together with the objective value; the
//! returned curvature matrix is the negative inverse Hessian at the
//! optimum, i.e. directly usable as an asymptotic covariance.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Stopping rules and step sizes for [`maximize`].
#[derive(Debug, Clone)]
pub struct OptimizerSettings {
    pub max_iterations: usize,
    /// Convergence threshold on the gradient infinity norm.
    pub gradient_tolerance: f64,
    /// Alternative convergence threshold on the relative objective change.
    pub objective_rel_tolerance: f64,
    /// Relative step for the finite-difference Hessian at the optimum.
    pub finite_difference_step: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            gradient_tolerance: 1e-6,
            objective_rel_tolerance: 1e-10,
            finite_difference_step: 1e-5,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::Invalid("max_iterations must be at least 1".into()));
        }
        if self.gradient_tolerance <= 0.0
            || self.objective_rel_tolerance <= 0.0
            || self.finite_difference_step <= 0.0
        {
            return Err(Error::Invalid(
                "optimizer tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Result of a [`maximize`] call.
#[derive(Debug, Clone)]
pub struct Maximum {
    pub argmax: DVector<f64>,
    /// Negative inverse Hessian of the objective at `argmax`.
    pub curvature: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub value: f64,
    pub grad_inf_norm: f64,
}

/// Maximize `objective` from `start`.
///
/// `objective` returns the value and its analytic gradient. Non-finite
/// values encountered during the line search shrink the step; an error is
/// returned only when no finite step exists at all. Non-convergence within
/// the iteration budget is reported through [`Maximum::converged`], never
/// silently.
pub fn maximize<F>(objective: F, start: &[f64], settings: &OptimizerSettings) -> Result<Maximum>
where
    F: Fn(&DVector<f64>) -> (f64, DVector<f64>),
{
    settings.validate()?;
    let n = start.len();
    let mut x = DVector::from_column_slice(start);
    let (f0, g0) = objective(&x);
    if !f0.is_finite() {
        return Err(Error::Invalid(
            "objective is not finite at the starting point".into(),
        ));
    }

    // minimize the negated objective with textbook BFGS
    let mut fx = -f0;
    let mut grad = -g0;
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut converged = false;
    let mut iterations = 0;
    let mut first_step = true;

    for iter in 0..settings.max_iterations {
        iterations = iter + 1;
        if grad.amax() <= settings.gradient_tolerance {
            converged = true;
            break;
        }

        let mut dir = -(&h_inv * &grad);
        if dir.dot(&grad) >= 0.0 {
            // curvature approximation went bad, restart from steepest ascent
            h_inv = DMatrix::identity(n, n);
            dir = -grad.clone();
        }

        let ls = line_search(&objective, &x, fx, &grad, &dir)?;
        let (alpha, f_new, g_new) = match ls {
            Some(t) => t,
            None => break, // no acceptable step; report current point
        };

        let step = alpha * &dir;
        let x_new = &x + &step;
        let y = &g_new - &grad;
        let sy = step.dot(&y);

        if first_step && sy > 0.0 {
            let scale = sy / y.dot(&y);
            if scale.is_finite() && scale > 0.0 {
                h_inv *= scale;
            }
            first_step = false;
        }
        if sy > 1e-12 * step.norm() * y.norm() {
            // standard inverse BFGS update
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy = y.dot(&hy);
            let ss = &step * step.transpose();
            let hys = &hy * step.transpose();
            h_inv = h_inv - (&hys + hys.transpose()) * rho + ss * (rho * rho * yhy + rho);
        }

        let rel_change = (fx - f_new).abs() / (1.0 + fx.abs());
        x = x_new;
        fx = f_new;
        grad = g_new;
        if rel_change <= settings.objective_rel_tolerance {
            converged = true;
            break;
        }
        if grad.amax() <= settings.gradient_tolerance {
            converged = true;
            break;
        }
    }

    let curvature = curvature_at(&objective, &x, settings, &h_inv);
    Ok(Maximum {
        grad_inf_norm: grad.amax(),
        argmax: x,
        curvature,
        converged,
        iterations,
        value: -fx,
    })
}

/// Strong-Wolfe line search with cubic interpolation on the negated
/// objective. Returns `(alpha, f_min, grad_min)` or `None` when no
/// acceptable step was found (the caller keeps the current iterate).
#[allow(clippy::type_complexity)]
fn line_search<F>(
    objective: &F,
    x: &DVector<f64>,
    f0: f64,
    g0: &DVector<f64>,
    dir: &DVector<f64>,
) -> Result<Option<(f64, f64, DVector<f64>)>>
where
    F: Fn(&DVector<f64>) -> (f64, DVector<f64>),
{
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;
    let d0 = g0.dot(dir);
    debug_assert!(d0 < 0.0);

    let eval = |alpha: f64| {
        let (f, g) = objective(&(x + alpha * dir));
        (-f, -g)
    };

    // shrink until the trial objective is finite at all
    let mut alpha = 1.0;
    let mut phi;
    let mut dphi_vec;
    loop {
        let (f, g) = eval(alpha);
        if f.is_finite() {
            phi = f;
            dphi_vec = g;
            break;
        }
        alpha *= 0.5;
        if alpha < 1e-60 {
            return Err(Error::NoFiniteStep);
        }
    }

    let mut alpha_prev = 0.0;
    let mut phi_prev = f0;
    let mut dphi_prev = d0;

    for _ in 0..25 {
        let dphi = dphi_vec.dot(dir);
        if phi > f0 + C1 * alpha * d0 || (phi >= phi_prev && alpha_prev > 0.0) {
            return zoom(
                &eval, dir, f0, d0, alpha_prev, phi_prev, dphi_prev, alpha, phi,
            );
        }
        if dphi.abs() <= -C2 * d0 {
            return Ok(Some((alpha, -phi, -dphi_vec)));
        }
        if dphi >= 0.0 {
            return zoom(&eval, dir, f0, d0, alpha, phi, dphi, alpha_prev, phi_prev);
        }
        alpha_prev = alpha;
        phi_prev = phi;
        dphi_prev = dphi;
        alpha *= 2.5;
        loop {
            let (f, g) = eval(alpha);
            if f.is_finite() {
                phi = f;
                dphi_vec = g;
                break;
            }
            alpha = 0.5 * (alpha + alpha_prev);
            if (alpha - alpha_prev).abs() < 1e-16 * (1.0 + alpha_prev) {
                return Ok(Some((alpha_prev, -phi_prev, {
                    let (_, g) = eval(alpha_prev);
                    -g
                })));
            }
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn zoom<E>(
    eval: &E,
    dir: &DVector<f64>,
    f0: f64,
    d0: f64,
    mut lo: f64,
    mut phi_lo: f64,
    mut dphi_lo: f64,
    mut hi: f64,
    mut phi_hi: f64,
) -> Result<Option<(f64, f64, DVector<f64>)>>
where
    E: Fn(f64) -> (f64, DVector<f64>),
{
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;
    for _ in 0..40 {
        // interpolated minimizer of the Hermite data, safeguarded by bisection
        let mut alpha = {
            let denom = 2.0 * (phi_hi - phi_lo - dphi_lo * (hi - lo));
            if denom.abs() > 1e-300 {
                lo - dphi_lo * (hi - lo) * (hi - lo) / denom
            } else {
                0.5 * (lo + hi)
            }
        };
        let span = (hi - lo).abs();
        let lo_b = lo.min(hi) + 0.1 * span;
        let hi_b = lo.max(hi) - 0.1 * span;
        if !(alpha.is_finite() && alpha >= lo_b && alpha <= hi_b) {
            alpha = 0.5 * (lo + hi);
        }

        let (phi, dphi_vec) = eval(alpha);
        if !phi.is_finite() {
            hi = alpha;
            phi_hi = f64::INFINITY;
            continue;
        }
        if phi > f0 + C1 * alpha * d0 || phi >= phi_lo {
            hi = alpha;
            phi_hi = phi;
        } else {
            let dphi = dphi_vec.dot(dir);
            if dphi.abs() <= -C2 * d0 {
                return Ok(Some((alpha, -phi, -dphi_vec)));
            }
            if dphi * (hi - lo) >= 0.0 {
                hi = lo;
                phi_hi = phi_lo;
            }
            lo = alpha;
            phi_lo = phi;
            dphi_lo = dphi;
        }
        if (hi - lo).abs() < 1e-14 * (1.0 + lo.abs()) {
            break;
        }
    }
    if phi_lo < f0 && lo > 0.0 {
        let (phi, dphi_vec) = eval(lo);
        return Ok(Some((lo, -phi, -dphi_vec)));
    }
    Ok(None)
}

/// Negative inverse Hessian at `x`, from central differences of the
/// analytic gradient. Falls back to the BFGS approximation when the
/// finite-difference matrix is not invertible.
fn curvature_at<F>(
    objective: &F,
    x: &DVector<f64>,
    settings: &OptimizerSettings,
    bfgs_h_inv: &DMatrix<f64>,
) -> DMatrix<f64>
where
    F: Fn(&DVector<f64>) -> (f64, DVector<f64>),
{
    let n = x.len();
    let mut hess = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let h = settings.finite_difference_step * (1.0 + x[i].abs());
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        let (_, gp) = objective(&xp);
        let (_, gm) = objective(&xm);
        let col = (gp - gm) / (2.0 * h);
        for j in 0..n {
            hess[(j, i)] = col[j];
        }
    }
    // symmetrize, then invert the negated Hessian
    let neg_hess = -(&hess + hess.transpose()) * 0.5;
    match neg_hess.clone().try_inverse() {
        Some(inv) if inv.iter().all(|v| v.is_finite()) => inv,
        _ => bfgs_h_inv.clone(),
    }
}

/// Maximum relative deviation between the analytic gradient returned by
/// `objective` and a central finite-difference gradient with step `step`.
pub fn gradient_check<F>(objective: F, point: &[f64], step: f64) -> f64
where
    F: Fn(&DVector<f64>) -> (f64, DVector<f64>),
{
    let x = DVector::from_column_slice(point);
    let (_, analytic) = objective(&x);
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        let h = step * (1.0 + x[i].abs());
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        let (fp, _) = objective(&xp);
        let (fm, _) = objective(&xm);
        let numeric = (fp - fm) / (2.0 * h);
        worst = worst.max((analytic[i] - numeric).abs() / (1.0 + numeric.abs()));
    }
    worst
}
