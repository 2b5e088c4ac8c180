//! Scalar and polynomial primitives shared by every solver.

mod complex;
mod gamma;
mod poly;

pub use complex::{format_complex, modulus_max, norm2, parse_complex, parse_complex_list, principal_power};
pub use gamma::gamma;
pub use poly::{caputo_derivative, classical_derivative, poly_eval, CaputoOperator, Polynomial};
