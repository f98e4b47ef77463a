//! Differentiation, exterior calculus, root finding, and small dense linear
//! algebra shared by every other module.

pub mod dual;
pub mod forms;
pub mod matrix;
pub mod solve;

pub use dual::{
    gradient, gradient_complex, hessian2, hessian2_complex, hessian4, hessian4_complex, Dual,
    RealScalar, Scalar,
};
pub use forms::{combinations, cyclic_to_lex, exterior_derivative, lex_to_cyclic, star3_one_form};
pub use matrix::{
    det, invert, mat_mul, mat_vec, wirtinger_form, HermitianForm2, Mat4, SymMat,
};
pub use solve::solve_monotone;

/// Central-difference step heuristic, balancing truncation against rounding
/// for the 1e-6 verification tolerances.
pub fn fd_step(coordinate: f64) -> f64 {
    1e-5 * (1.0 + coordinate.abs())
}
