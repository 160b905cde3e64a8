//! Exact symbolic calculus for Adams operations in complex K-theory on model
//! spaces: truncated graded rings, the lambda-ring layer with Chern character
//! and cannibalistic classes, projective-bundle push-forwards with the
//! Riemann-Roch square, and the torsion-side arithmetic (clutching model,
//! e-invariant order bounds, lens-space rho sums).
//!
//! All arithmetic is exact; there is no floating point anywhere. The graded
//! polynomial engine is generic over its coefficient scalar, and the aliases
//! below fix the arbitrary-precision rational instantiation that the rest of
//! the workspace builds on.

pub mod exact;
pub mod fgl;
pub mod graded;
pub mod ktheory;
pub mod pushforward;
pub mod torsion;

pub use exact::{Int, Rational};

/// Graded ring over exact rationals.
pub type Ring = graded::Ring<Rational>;
/// Ring element over exact rationals.
pub type Element = graded::GradedElement<Rational>;
/// Ring presentation over exact rationals.
pub type RingDescriptor = graded::RingDescriptor<Rational>;
/// Monic relation over exact rationals.
pub type Relation = graded::Relation<Rational>;

pub use ktheory::{Bundle, HPClass, KClass, LineExpr, Space, SpaceMap};
pub use pushforward::{Fibration, RRReport, RRStatus};
