use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::params::{Method, SolverParams, Stopping};
use super::steps::Scheme;
use crate::error::{Error, Result};
use crate::numeric::{modulus_max, norm2, Polynomial};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxItersReached,
    Diverged,
}

/// Iterate history of one run.
///
/// `step_norms[k] = ‖x⁽ᵏ⁺¹⁾ − x⁽ᵏ⁾‖₂` and `residual_norms[k] = ‖f(x⁽ᵏ⁾)‖₂`,
/// each clamped to the divergence cap. `iterates` holds every accepted
/// vector starting with `x⁽⁰⁾`; after a divergence it stops growing.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverTrace<T> {
    pub iterates: Vec<Vec<Complex<T>>>,
    pub step_norms: Vec<T>,
    pub residual_norms: Vec<T>,
    pub status: Status,
    pub iterations_used: usize,
}

impl<T: Real> SolverTrace<T> {
    pub fn final_iterate(&self) -> &[Complex<T>] {
        self.iterates.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_residual(&self) -> Option<T> {
        self.residual_norms.last().copied()
    }
}

/// Runs `method` from `x0` under `params`.
pub fn run_solver<T: Real>(
    f: &Polynomial<T>,
    x0: &[Complex<T>],
    params: &SolverParams<T>,
    method: Method,
) -> Result<SolverTrace<T>> {
    params.validate()?;
    let mut scheme = Scheme::from_params(f, params)?;
    drive(&mut scheme, x0, params, method, |_, _, _| None)
}

/// Iteration loop shared by [`run_solver`] and the adaptive solver.
///
/// After every recorded step `control(k, step_norms, scheme)` may return a
/// new `alpha`, which takes effect from the next step on.
pub fn drive<T, F>(
    scheme: &mut Scheme<T>,
    x0: &[Complex<T>],
    params: &SolverParams<T>,
    method: Method,
    mut control: F,
) -> Result<SolverTrace<T>>
where
    T: Real,
    F: FnMut(usize, &[T], &Scheme<T>) -> Option<T>,
{
    params.validate()?;
    let f = scheme.polynomial().clone();
    if x0.len() != f.degree() {
        return Err(Error::InvalidParams(format!(
            "initial vector has {} components, polynomial degree is {}",
            x0.len(),
            f.degree()
        )));
    }
    let cap = params.divergence_cap;
    let clamp = |v: T| if v.is_finite() && v <= cap { v } else { cap };
    let fixed = params.stopping == Stopping::FixedIterations;

    let mut x = x0.to_vec();
    let mut iterates = vec![x.clone()];
    let mut steps = Vec::with_capacity(params.max_iters);
    let mut residuals = Vec::with_capacity(params.max_iters);
    let mut diverged = !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || modulus_max(&x) > cap;
    let mut converged_at_stop = false;

    for k in 0..params.max_iters {
        if diverged {
            if !fixed {
                break;
            }
            steps.push(cap);
            residuals.push(cap);
            continue;
        }
        let fx: Vec<_> = x.iter().map(|&xi| f.eval(xi)).collect();
        let rk = norm2(&fx);
        let within_tol = rk <= params.tol;
        residuals.push(clamp(rk));

        match scheme.step(method, &x) {
            Ok(next) if modulus_max(&next) <= cap => {
                let delta: Vec<_> = next.iter().zip(&x).map(|(a, b)| a - b).collect();
                steps.push(clamp(norm2(&delta)));
                x = next;
                iterates.push(x.clone());
            }
            _ if within_tol => {
                // already at a root; a failing extra step changes nothing
                steps.push(T::zero());
            }
            _ => {
                steps.push(cap);
                diverged = true;
            }
        }

        if within_tol && !fixed {
            converged_at_stop = true;
            break;
        }
        if let Some(alpha) = control(k, &steps, scheme) {
            scheme.set_alpha(alpha);
        }
    }

    let status = if diverged {
        Status::Diverged
    } else if converged_at_stop || residuals.last().is_some_and(|&r| r <= params.tol) {
        Status::Converged
    } else {
        Status::MaxItersReached
    };
    Ok(SolverTrace {
        iterations_used: steps.len(),
        iterates,
        step_norms: steps,
        residual_norms: residuals,
        status,
    })
}
