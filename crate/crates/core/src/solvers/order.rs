use num_complex::Complex;

use super::driver::SolverTrace;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Three-term estimate `ln(eₖ/eₖ₋₁) / ln(eₖ₋₁/eₖ₋₂)` over the last window of
/// three consecutive positive, strictly decreasing entries.
pub fn computational_order<T: Real>(errors: &[T]) -> Result<T> {
    computational_order_above(errors, T::min_positive_value())
}

/// As [`computational_order`], treating entries `≤ floor` as inadmissible
/// (for example residuals that have reached rounding level).
pub fn computational_order_above<T: Real>(errors: &[T], floor: T) -> Result<T> {
    let ok = |e: T| e.is_finite() && e > floor;
    for k in (2..errors.len()).rev() {
        let (a, b, c) = (errors[k - 2], errors[k - 1], errors[k]);
        if ok(a) && ok(b) && ok(c) && a > b && b > c {
            return Ok((c / b).ln() / (b / a).ln());
        }
    }
    Err(Error::InsufficientData(
        "need three consecutive decreasing errors above the precision floor".into(),
    ))
}

/// Largest distance from each approximation to its nearest root.
pub fn max_root_error<T: Real>(x: &[Complex<T>], roots: &[Complex<T>]) -> T {
    x.iter()
        .map(|xi| roots.iter().map(|r| (xi - r).norm()).fold(T::infinity(), T::min))
        .fold(T::zero(), T::max)
}

/// Order estimate for a trace: true-root distances when the roots are known,
/// residual norms otherwise.
pub fn coc_from_trace<T: Real>(trace: &SolverTrace<T>, roots: Option<&[Complex<T>]>, floor: T) -> Result<T> {
    match roots {
        Some(roots) => {
            let errs: Vec<T> = trace.iterates.iter().map(|x| max_root_error(x, roots)).collect();
            computational_order_above(&errs, floor)
        }
        None => computational_order_above(&trace.residual_norms, floor),
    }
}
