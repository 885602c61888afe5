//! Exact arithmetic: rationals, polynomials, balls, algebraic numbers and
//! linear algebra over number-field quotients.

pub mod algebraic;
pub mod ball;
pub mod complex;
pub mod field;
pub mod isolate;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod resultant;

pub use algebraic::{isolate_roots, AlgebraicNumber, DivisionByZero};
pub use complex::{CRational, ComplexBox};
pub use matrix::{RationalMatrix, RationalVector};
pub use poly::Polynomial;
pub use rational::{parse_rational, Rational};
