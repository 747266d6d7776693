//! Exact evaluation of normalized quadratic Gauss sums
//!
//! ```text
//! Φ(a, b) = a^(-1/2) · Σ_{n=0}^{a-1} exp(πi n² b / a),   a ≥ 1
//! ```
//!
//! The [`evaluator`] computes Φ(a, b) for even `b` in closed form by splitting the
//! modulus into prime powers, stripping common factors, and applying the prime-power
//! evaluations. Every value lands in the algebra of [`ExactGaussValue`], so identities
//! between closed-form paths are checked by structural equality. The [`oracle`] module
//! is the independent ground truth: direct summation with a propagated error bound,
//! exhaustive square-root counting and lattice-point enumeration.

pub mod error;
pub mod evaluator;
pub mod exact_value;
pub mod limits;
pub mod modular;
pub mod oracle;
pub mod selftest;
pub mod sweep;

pub use error::{Error, Result};
pub use evaluator::{DerivationTrace, GaussSumQuery, Rule, TraceStep};
pub use exact_value::{ComplexApprox, ExactGaussValue};
pub use limits::Limits;
pub use modular::{Factorization, PrimePower, SqrtCountQuery};
pub use oracle::{StepCheck, VerificationReport};
pub use sweep::SweepSummary;
