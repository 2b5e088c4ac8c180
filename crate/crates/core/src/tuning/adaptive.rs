use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Polynomial;
use crate::scalar::Real;
use crate::solvers::{drive, Method, Scheme, SolverParams, SolverTrace};

/// Instability watch for [`adaptive_solve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Watch {
    /// Number of trailing step norms in the slope fit.
    pub window_len: usize,
    /// Consecutive positive slopes needed to trigger a switch.
    pub patience: usize,
    /// Added to every step norm before the log.
    pub floor: f64,
}

impl Default for Watch {
    fn default() -> Self {
        Self {
            window_len: 8,
            patience: 3,
            floor: 1e-300,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSwitch<T> {
    /// Index of the last step taken with the old α.
    pub iteration: usize,
    pub from: T,
    pub to: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveOutcome<T> {
    pub trace: SolverTrace<T>,
    pub switches: Vec<AlphaSwitch<T>>,
}

/// Least-squares slope of `ln(vₖ + floor)` against `k`.
pub fn trailing_slope<T: Real>(values: &[T], floor: T) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let ys: Vec<T> = values.iter().map(|&v| (v + floor).ln()).collect();
    let nf = T::from_count(n);
    let mx = T::from_count(n - 1) / T::lit(2.0);
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / nf;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (k, &y) in ys.iter().enumerate() {
        let dx = T::from_count(k) - mx;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (y - my);
    }
    sxy / sxx
}

/// INVM^α that moves to the next α in `candidates` (cyclically) once the
/// trailing slope of `ln s_k` has been positive for `patience` consecutive
/// iterations. Slopes are only taken over windows recorded entirely under
/// the current α. Norms are recorded continuously across switches.
pub fn adaptive_solve<T: Real>(
    f: &Polynomial<T>,
    x0: &[Complex<T>],
    params: &SolverParams<T>,
    candidates: &[T],
    watch: &Watch,
) -> Result<AdaptiveOutcome<T>> {
    if candidates.is_empty() {
        return Err(Error::InvalidParams(
            "adaptive solve needs at least one alpha candidate".into(),
        ));
    }
    if watch.window_len < 2 || watch.patience == 0 {
        return Err(Error::InvalidParams(
            "watch window must be at least 2 and patience at least 1".into(),
        ));
    }
    let mut run_params = *params;
    run_params.alpha = candidates[0];
    let mut scheme = Scheme::from_params(f, &run_params)?;
    let floor = T::lit(watch.floor);

    let mut current = 0usize;
    let mut streak = 0usize;
    let mut window_start = 0usize;
    let mut switches = Vec::new();
    let trace = drive(&mut scheme, x0, &run_params, Method::Invm, |k, steps, _| {
        if steps.len() < window_start + watch.window_len {
            return None;
        }
        let window = &steps[steps.len() - watch.window_len..];
        if trailing_slope(window, floor) > T::zero() {
            streak += 1;
        } else {
            streak = 0;
        }
        if streak < watch.patience || candidates.len() < 2 {
            return None;
        }
        let next = (current + 1) % candidates.len();
        switches.push(AlphaSwitch {
            iteration: k,
            from: candidates[current],
            to: candidates[next],
        });
        current = next;
        streak = 0;
        window_start = steps.len();
        Some(candidates[next])
    })?;
    Ok(AdaptiveOutcome { trace, switches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_decreasing_logs() {
        let s: Vec<f64> = (1..=8).map(|k| (-(k as f64)).exp()).collect();
        assert!((trailing_slope(&s, 0.0) + 1.0).abs() < 1e-12);
        let up: Vec<f64> = (1..=8).map(|k| (k as f64).exp()).collect();
        assert!(trailing_slope(&up, 0.0) > 0.0);
    }
}
