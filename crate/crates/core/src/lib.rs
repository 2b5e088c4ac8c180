//! Fractional-order inverse parallel root finding and data-driven stability
//! profiling.
//!
//! The crate is layered bottom-up:
//!
//! * [`numeric`]: complex helpers, the Gamma function, polynomials and their
//!   classical and Caputo derivatives.
//! * [`solvers`]: one-step updates for the Weierstrass–Durand–Kerner, Nourein,
//!   Zhang (ZHM) and fractional inverse (INVM) schemes, plus an iteration
//!   driver that records step and residual norms.
//! * [`ensemble`]: jittered initial-vector ensembles, parameter scans and the
//!   headerless CSV matrix format.
//! * [`lle`]: sliding-window local Lyapunov exponents from observable matrices
//!   via kNN forecast-error growth and piecewise-affine slope fits.
//! * [`tuning`]: profile features, α classification and selection, and an
//!   online adaptive-α solver.
//!
//! The numeric, solver and estimator layers are generic over [`Real`]; the
//! aliases below pin them to `f64`, which is what the file formats and the
//! command-line driver use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
pub mod error;
pub mod lle;
pub mod numeric;
pub mod presets;
mod scalar;
pub mod solvers;
pub mod tuning;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::Real;

pub type C64 = Complex<f64>;
pub type Poly64 = numeric::Polynomial<f64>;
pub type SolverParams64 = solvers::SolverParams<f64>;
pub type SolverTrace64 = solvers::SolverTrace<f64>;
pub type LleParams64 = lle::LleParams<f64>;
pub type SlopeFit64 = lle::SlopeFit<f64>;
pub type LyapunovProfile64 = lle::LyapunovProfile<f64>;
