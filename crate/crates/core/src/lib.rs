//! Parameter synthesis for parametric Markov chains.
//!
//! The core is generic over the scalar type; exact rational arithmetic is
//! the default throughout and `f64` is available where numerics suffice.

pub mod error;
pub mod feasibility;
pub mod mccheck;
pub mod model;
pub mod partition;
pub mod polyalg;
pub mod pomdp;
pub mod regionlift;
pub mod scalar;
pub mod solfun;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Multivariate polynomial with exact rational coefficients.
pub type Poly = polyalg::Polynomial<Rational>;
/// Rational function with exact rational coefficients.
pub type RatFunc = polyalg::RationalFunction<Rational>;
/// Markov chain with exact transition probabilities.
pub type ExactMc = mccheck::Mc<Rational>;
/// Markov chain with floating-point transition probabilities.
pub type FloatMc = mccheck::Mc<f64>;
/// MDP with exact transition probabilities.
pub type ExactMdp = mccheck::Mdp<Rational>;
