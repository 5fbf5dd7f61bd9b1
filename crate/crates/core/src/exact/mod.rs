//! Exact scalar and symbolic-expression arithmetic.
//!
//! Every value in this module is immutable after construction and safe to
//! share across threads; there is no floating-point rounding anywhere on the
//! exact paths (`f64` appears only in explicit conversion helpers).

mod affine;
mod polynomial;
mod quadratic;
mod rational;

pub use affine::AffineForm;
pub use polynomial::Polynomial;
pub use quadratic::QuadraticNumber;
pub use rational::Rational;
