use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LleParams<T> {
    pub look_back: usize,
    pub h_min: usize,
    pub h_max: usize,
    pub h_step: usize,
    pub k_neighbors: usize,
    /// Share of micro-series held out for testing.
    pub test_fraction: T,
    pub split_seed: u64,
    /// Lower bound applied to every absolute forecast error before the log.
    pub gmae_floor: T,
    /// Relative SSE reduction a two-segment fit needs to be preferred.
    pub min_two_segment_gain: T,
    /// Redraw the train/test split for every horizon instead of sharing one.
    pub split_per_horizon: bool,
}

impl<T: Real> Default for LleParams<T> {
    fn default() -> Self {
        Self {
            look_back: 5,
            h_min: 1,
            h_max: 5,
            h_step: 1,
            k_neighbors: 3,
            test_fraction: T::lit(0.4),
            split_seed: 0,
            gmae_floor: T::lit(1e-30),
            min_two_segment_gain: T::lit(0.05),
            split_per_horizon: false,
        }
    }
}

impl<T: Real> LleParams<T> {
    /// Micro-series length `look_back + h_max`.
    pub fn micro_len(&self) -> usize {
        self.look_back + self.h_max
    }

    pub fn horizons(&self) -> impl Iterator<Item = usize> {
        (self.h_min..=self.h_max).step_by(self.h_step.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.look_back == 0 || self.h_min == 0 || self.h_step == 0 || self.k_neighbors == 0 {
            return bad("look_back, h_min, h_step and k_neighbors must be at least 1");
        }
        if self.h_max < self.h_min {
            return bad("h_max must not be below h_min");
        }
        if !(self.test_fraction > T::zero() && self.test_fraction < T::one()) {
            return bad("test_fraction must lie in (0, 1)");
        }
        if !(self.gmae_floor > T::zero()) || !self.gmae_floor.is_finite() {
            return bad("gmae_floor must be positive");
        }
        if !(self.min_two_segment_gain >= T::zero() && self.min_two_segment_gain < T::one()) {
            return bad("min_two_segment_gain must lie in [0, 1)");
        }
        Ok(())
    }
}
