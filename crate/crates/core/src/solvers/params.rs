use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    /// Weierstrass–Durand–Kerner.
    Wdk,
    Nourein,
    /// Zhang et al. fifth-order scheme.
    Zhm,
    /// Fractional inverse parallel scheme.
    Invm,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "WDK" => Ok(Method::Wdk),
            "NOUREIN" => Ok(Method::Nourein),
            "ZHM" => Ok(Method::Zhm),
            "INVM" => Ok(Method::Invm),
            other => Err(Error::InvalidParams(format!("unknown method {other:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Method::Wdk => "WDK",
            Method::Nourein => "NOUREIN",
            Method::Zhm => "ZHM",
            Method::Invm => "INVM",
        };
        f.write_str(name)
    }
}

/// When the driver stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stopping {
    /// Stop at the first residual norm `≤ tol`, or on divergence.
    Tolerance,
    /// Always record exactly `max_iters` steps; diverged runs are padded
    /// with the cap value.
    FixedIterations,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverParams<T> {
    pub alpha: T,
    /// Fractional order, `0 < beta ≤ 1`.
    pub beta: T,
    pub max_iters: usize,
    /// Residual-norm threshold.
    pub tol: T,
    /// Component modulus above which a run counts as diverged; also the
    /// value recorded for saturated norms.
    pub divergence_cap: T,
    pub stopping: Stopping,
}

impl<T: Real> SolverParams<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        Self {
            alpha,
            beta,
            max_iters: 50,
            tol: T::lit(1e-12),
            divergence_cap: T::lit(1e12),
            stopping: Stopping::Tolerance,
        }
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_stopping(mut self, stopping: Stopping) -> Self {
        self.stopping = stopping;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::InvalidParams("alpha must be finite".into()));
        }
        if !(self.beta > T::zero() && self.beta <= T::one()) {
            return Err(Error::InvalidParams(format!(
                "beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParams("max_iters must be at least 1".into()));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidParams("tol must be positive".into()));
        }
        if !(self.divergence_cap > self.tol) || !self.divergence_cap.is_finite() {
            return Err(Error::InvalidParams(
                "divergence_cap must be finite and exceed tol".into(),
            ));
        }
        Ok(())
    }
}
