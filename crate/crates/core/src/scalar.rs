//! Scalar abstraction shared by the symbolic and numeric layers.
//!
//! Everything that must be exact (solution functions, lifting bounds, LP
//! pivots) is instantiated with [`BigRational`]; the `f64` instantiation
//! backs the heuristic search paths (particle swarm, quick screening).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A field element usable as polynomial coefficient, MC probability, or LP
/// entry.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Whether arithmetic is exact. Inexact scalars skip gcd reduction and
    /// compare against zero with a tolerance.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(v: i64) -> Self;

    fn approx(&self) -> f64;

    /// Exact rational value (binary expansion for floats; NaN and infinities
    /// map to zero).
    fn to_rational(&self) -> BigRational;

    /// Zero test used for pivot selection and sparsity decisions.
    fn is_negligible(&self) -> bool;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn approx(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn approx(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerator/denominator: fall back to a scaled division
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Builds the rational `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `a/b`, or a finite decimal such as `0.45` into an exact
/// rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return None;
        }
        let digits = format!("{int_digits}{frac}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(n, d);
        return Some(if negative { -value } else { value });
    }
    BigInt::from_str(text).ok().map(BigRational::from_integer)
}

/// Renders a rational as `a` or `a/b`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rounds `x` to the nearest multiple of `1/denominator` (ties away from
/// zero).
pub fn round_to_denominator(x: &BigRational, denominator: u64) -> BigRational {
    let d = BigInt::from(denominator);
    let scaled = x * BigRational::from_integer(d.clone());
    BigRational::new(scaled.round().to_integer(), d)
}

/// Exact rational approximation of a finite `f64`, rounded to denominator
/// `denominator`.
pub fn f64_to_rational(x: f64, denominator: u64) -> BigRational {
    let exact = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    round_to_denominator(&exact, denominator)
}

/// Parses a rational literal, panicking on malformed input. Meant for
/// literals in tests and fixtures.
pub fn rational(text: &str) -> BigRational {
    parse_rational(text).unwrap_or_else(|| panic!("invalid rational literal {text:?}"))
}
