use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numeric::modulus_max;
use crate::scalar::Real;

/// Relative size of the separation floor: `1e-13 · (1 + ‖x‖∞)`.
pub const SEPARATION_REL: f64 = 1e-13;

/// Below this modulus `f(y)` counts as an exact root hit.
pub const ROOT_HIT_FLOOR: f64 = 1e-300;

pub fn separation_floor<T: Real>(x: &[Complex<T>]) -> T {
    T::lit(SEPARATION_REL) * (T::one() + modulus_max(x))
}

/// Pushes near-zero denominators out to the floor along their phase.
#[derive(Clone, Copy, Debug)]
pub struct FloorGuard<T> {
    floor: T,
}

impl<T: Real> FloorGuard<T> {
    pub fn for_state(x: &[Complex<T>]) -> Self {
        Self {
            floor: separation_floor(x),
        }
    }

    pub fn floor(&self) -> T {
        self.floor
    }

    /// Returns `d` unchanged when `|d| ≥ floor`, otherwise `d + floor·e^{i arg d}`
    /// (phase 0 for an exact zero). Non-finite input, or a value still below
    /// the floor after the single shift, is a degenerate-input error.
    pub fn guard(&self, d: Complex<T>, what: &str) -> Result<Complex<T>> {
        if !(d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::Degenerate(format!("{what} is not finite")));
        }
        let m = d.norm();
        if m >= self.floor {
            return Ok(d);
        }
        let phase = if m == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            d / m
        };
        let shifted = d + phase * self.floor;
        if shifted.norm() >= self.floor {
            Ok(shifted)
        } else {
            Err(Error::Degenerate(format!("{what} below separation floor")))
        }
    }
}
