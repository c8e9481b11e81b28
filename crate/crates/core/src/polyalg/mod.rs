//! Exact multivariate polynomial and rational-function arithmetic.

mod expr;
mod gcd;
mod monomial;
mod polynomial;
mod rational_function;
mod valuation;

pub(crate) use expr::parse_expr_at;
pub use expr::parse_polynomial;
pub use gcd::{content, gcd, monic, primitive_part, pseudo_remainder};
pub use monomial::Monomial;
pub use polynomial::{PolyDisplay, Polynomial};
pub use rational_function::{RatFunDisplay, RationalFunction};
pub use valuation::Valuation;
