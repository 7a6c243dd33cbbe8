//! Damped Gauss-Newton (Levenberg-Marquardt) minimization of weighted
//! squared residuals.
//!
//! The damping starts at 1e-3 on the scaled normal matrix and adapts by
//! factors of 10: divided on every accepted step, multiplied on every
//! rejection. Iteration stops when the relative cost decrease of an
//! accepted step falls below 1e-10, when the cost reaches the noiseless
//! floor 1e-20 of the data's own scale, when the scaled gradient norm
//! (maximum residual/Jacobian-column cosine) falls below 1e-8, or after
//! 200 iterations (`converged = false`). Everything is deterministic
//! given (data, init, bounds).

use alloc::vec;
use alloc::vec::Vec;
// float math under no_std; redundant whenever std is in the crate graph
#[allow(unused_imports)]
use num_traits::Float;

use super::{Dataset, FitError, FitResult, FitWarning};

#[derive(Debug, Clone)]
pub struct LeastSquaresOptions {
    pub max_iterations: usize,
    /// Relative cost-decrease threshold on accepted steps.
    pub cost_tolerance: f64,
    /// Scaled gradient-norm threshold.
    pub gradient_tolerance: f64,
    pub initial_damping: f64,
    pub damping_factor: f64,
    /// Per-parameter magnitudes used to scale finite-difference steps;
    /// defaults to |init| (with unit fallback).
    pub typical_scale: Option<Vec<f64>>,
}

impl Default for LeastSquaresOptions {
    fn default() -> Self {
        LeastSquaresOptions {
            max_iterations: 200,
            cost_tolerance: 1e-10,
            gradient_tolerance: 1e-8,
            initial_damping: 1e-3,
            damping_factor: 10.0,
            typical_scale: None,
        }
    }
}

/// Minimize Σ wᵢ (yᵢ − modelᵢ(p))² over p.
///
/// `model` maps a parameter vector to predictions aligned with `data.x`.
/// Bounds are enforced by projection. Returns best-so-far parameters with
/// `converged = false` when the iteration cap is reached.
pub fn least_squares<M>(
    model: M,
    data: &Dataset,
    init: &[f64],
    bounds: Option<&[(f64, f64)]>,
    names: &[&'static str],
    options: &LeastSquaresOptions,
) -> Result<FitResult, FitError>
where
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = data.len();
    let np = init.len();
    assert_eq!(names.len(), np, "one name per parameter");
    if n == 0 {
        return Err(FitError::EmptyDataset);
    }
    if let Some(b) = bounds {
        assert_eq!(b.len(), np);
        if init
            .iter()
            .zip(b.iter())
            .any(|(p, (lo, hi))| p < lo || p > hi)
        {
            return Err(FitError::InitOutOfBounds);
        }
    }

    let scales: Vec<f64> = match &options.typical_scale {
        Some(s) => s.clone(),
        None => init.iter().map(|p| p.abs().max(1.0)).collect(),
    };

    let residuals = |p: &[f64]| -> Result<Vec<f64>, FitError> {
        let f = model(p);
        if f.len() != n {
            return Err(FitError::LengthMismatch);
        }
        let mut r = Vec::with_capacity(n);
        for i in 0..n {
            let ri = data.weight(i).sqrt() * (data.y[i] - f[i]);
            if !ri.is_finite() {
                return Err(FitError::ModelNonFinite);
            }
            r.push(ri);
        }
        Ok(r)
    };

    let clamp = |p: &mut [f64]| {
        if let Some(b) = bounds {
            for (v, (lo, hi)) in p.iter_mut().zip(b.iter()) {
                *v = v.max(*lo).min(*hi);
            }
        }
    };

    // noiseless-data cost floor, relative to the data's own magnitude
    let data_scale: f64 = (0..n).map(|i| data.weight(i) * data.y[i] * data.y[i]).sum();
    let cost_floor = 1e-19 * data_scale + f64::MIN_POSITIVE;

    let mut p = init.to_vec();
    let mut r = residuals(&p)?;
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = options.initial_damping;
    let mut iterations = 0;
    let mut converged = cost <= cost_floor;
    let mut warnings = Vec::new();
    // column-major Jacobian of the residuals
    let mut jac = vec![0.0; n * np];

    let fd_step = f64::EPSILON.cbrt();

    'outer: while !converged && iterations < options.max_iterations {
        // central-difference Jacobian
        for j in 0..np {
            let h = fd_step * p[j].abs().max(1e-2 * scales[j]).max(f64::MIN_POSITIVE);
            let mut fwd = p.clone();
            let mut bwd = p.clone();
            fwd[j] += h;
            bwd[j] -= h;
            clamp(&mut fwd);
            clamp(&mut bwd);
            let span = fwd[j] - bwd[j];
            if span == 0.0 {
                return Err(FitError::SingularJacobian);
            }
            let rf = residuals(&fwd)?;
            let rb = residuals(&bwd)?;
            for i in 0..n {
                jac[j * n + i] = (rf[i] - rb[i]) / span;
            }
        }

        // normal matrix and gradient (of ½‖r‖²)
        let mut jtj = vec![0.0; np * np];
        let mut g = vec![0.0; np];
        for j in 0..np {
            for k in j..np {
                let mut s = 0.0;
                for i in 0..n {
                    s += jac[j * n + i] * jac[k * n + i];
                }
                jtj[j * np + k] = s;
                jtj[k * np + j] = s;
            }
            let mut s = 0.0;
            for i in 0..n {
                s += jac[j * n + i] * r[i];
            }
            g[j] = s;
        }

        if jtj.iter().step_by(np + 1).any(|d| *d == 0.0) {
            return Err(FitError::SingularJacobian);
        }

        // scale-free gradient test: largest cosine between the residual
        // vector and a Jacobian column
        let rnorm = cost.sqrt();
        let cosine = (0..np)
            .map(|j| g[j].abs() / (jtj[j * np + j].sqrt() * rnorm).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if cosine < options.gradient_tolerance {
            converged = true;
            break;
        }

        // inner damping loop
        loop {
            let mut damped = jtj.clone();
            for j in 0..np {
                damped[j * np + j] += lambda * jtj[j * np + j];
            }
            // solve damped·δ = −g
            let mut rhs: Vec<f64> = g.iter().map(|v| -v).collect();
            if cholesky_solve(&mut damped, &mut rhs, np).is_err() {
                lambda *= options.damping_factor;
                if lambda > 1e15 {
                    break 'outer;
                }
                continue;
            }
            let mut candidate: Vec<f64> = p.iter().zip(rhs.iter()).map(|(a, d)| a + d).collect();
            clamp(&mut candidate);
            let rc = residuals(&candidate)?;
            let new_cost: f64 = rc.iter().map(|v| v * v).sum();
            if new_cost < cost {
                let decrease = (cost - new_cost) / cost.max(f64::MIN_POSITIVE);
                p = candidate;
                r = rc;
                cost = new_cost;
                lambda = (lambda / options.damping_factor).max(1e-15);
                iterations += 1;
                if decrease < options.cost_tolerance || cost <= cost_floor {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            lambda *= options.damping_factor;
            if lambda > 1e15 {
                // no downhill step exists at any damping: local minimum
                converged = true;
                break 'outer;
            }
        }
    }

    if !converged && iterations >= options.max_iterations {
        warnings.push(FitWarning::MaxIterationsReached);
    }

    let std_errors = standard_errors(&model, data, &p, &scales, cost, n, np);

    Ok(FitResult {
        names: names.to_vec(),
        values: p,
        rss: cost,
        std_errors,
        iterations,
        converged,
        warnings,
    })
}

/// Standard errors from the local quadratic model,
/// cov = (JᵀJ)⁻¹·rss/(n − np); `None` unless JᵀJ is positive definite
/// and there are residual degrees of freedom.
fn standard_errors<M>(
    model: &M,
    data: &Dataset,
    p: &[f64],
    scales: &[f64],
    rss: f64,
    n: usize,
    np: usize,
) -> Option<Vec<f64>>
where
    M: Fn(&[f64]) -> Vec<f64>,
{
    if n <= np {
        return None;
    }
    let fd_step = f64::EPSILON.cbrt();
    let mut jac = vec![0.0; n * np];
    for j in 0..np {
        let h = fd_step * p[j].abs().max(1e-2 * scales[j]).max(f64::MIN_POSITIVE);
        let mut fwd = p.to_vec();
        let mut bwd = p.to_vec();
        fwd[j] += h;
        bwd[j] -= h;
        let rf = model(&fwd);
        let rb = model(&bwd);
        if rf.len() != n || rb.len() != n {
            return None;
        }
        for i in 0..n {
            let d = -(data.weight(i).sqrt()) * (rf[i] - rb[i]) / (2.0 * h);
            if !d.is_finite() {
                return None;
            }
            jac[j * n + i] = d;
        }
    }
    let mut jtj = vec![0.0; np * np];
    for j in 0..np {
        for k in j..np {
            let mut s = 0.0;
            for i in 0..n {
                s += jac[j * n + i] * jac[k * n + i];
            }
            jtj[j * np + k] = s;
            jtj[k * np + j] = s;
        }
    }
    let mut cov = vec![0.0; np * np];
    for j in 0..np {
        let mut e = vec![0.0; np];
        e[j] = 1.0;
        let mut a = jtj.clone();
        if cholesky_solve(&mut a, &mut e, np).is_err() {
            return None;
        }
        for k in 0..np {
            cov[j * np + k] = e[k];
        }
    }
    let s2 = rss / (n - np) as f64;
    let mut se = Vec::with_capacity(np);
    for j in 0..np {
        let v = cov[j * np + j] * s2;
        if v < 0.0 {
            return None;
        }
        se.push(v.sqrt());
    }
    Some(se)
}

/// In-place Cholesky solve of a symmetric positive-definite system
/// (row-major `a`, size `n`); fails on non-positive pivots.
pub(crate) fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> Result<(), ()> {
    // decompose a = L·Lᵀ
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(());
        }
        let l = d.sqrt();
        a[j * n + j] = l;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / l;
        }
    }
    // forward substitution L·z = b
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    // back substitution Lᵀ·x = z
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    Ok(())
}
