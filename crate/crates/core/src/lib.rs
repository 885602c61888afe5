//! Certified decision procedure for the approximate orbit problem: given a
//! rational matrix `A`, rational vectors `x`, `y` and a radius `delta`, decide
//! whether some orbit point `A^k x` lies strictly within `delta` of `y`.
//!
//! Pipeline: [`spectral`] computes an exact Jordan decomposition over the
//! algebraic numbers, [`limitset`] describes the set of limit points of the
//! orbit, [`distance`] brackets the distance from `y` to that set, and
//! [`decide`] turns the bracket into a finite, exactly verified search.
//! [`oracle`] is an independent brute-force referee.

pub mod arith;
pub mod decide;
pub mod distance;
pub mod error;
pub mod instance;
pub mod limitset;
pub mod norm;
pub mod oracle;
pub mod report;
pub mod spectral;

pub use arith::{AlgebraicNumber, ComplexBox, Polynomial, Rational, RationalMatrix, RationalVector};
pub use decide::{decide, member_check, DecideOptions, Verdict, VerdictTag};
pub use distance::{DistanceBound, GapOutcome, GapResult};
pub use error::OrbitError;
pub use instance::{ParseError, ProblemInstance};
pub use limitset::{limit_set, LimitSetDescriptor, TorusDescriptor};
pub use norm::Norm;
pub use oracle::{brute_force_decide, OracleAnswer};
