//! Simultaneous root-finding schemes and the iteration driver.
//!
//! All schemes update every approximation at once from the full current
//! vector. The Weierstrass corrections use the monic normalisation
//! `f(x)/(aₙ ∏(xᵢ − xⱼ))`; for the monic polynomials used throughout the
//! experiments this is the textbook form.

mod driver;
mod floor;
mod order;
mod params;
mod steps;

pub use driver::{drive, run_solver, SolverTrace, Status};
pub use floor::{separation_floor, FloorGuard, ROOT_HIT_FLOOR, SEPARATION_REL};
pub use order::{coc_from_trace, computational_order, computational_order_above, max_root_error};
pub use params::{Method, SolverParams, Stopping};
pub use steps::{invm_step, invm_step_full_form, invm_substeps, nourein_step, wdk_step, zhm_step, Scheme, Substeps};
