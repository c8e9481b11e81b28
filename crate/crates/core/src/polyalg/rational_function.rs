use std::fmt;

use crate::error::{Error, Result};
use crate::polyalg::gcd::numeric_content;
use crate::polyalg::{gcd, Polynomial, Valuation};
use crate::scalar::Scalar;

/// Quotient of two polynomials with a nonzero denominator.
///
/// Arithmetic does not reduce by gcd on its own; call
/// [`RationalFunction::normalize`] (or [`RationalFunction::normalized`] with
/// `reduce = false` for a cheap canonical scaling only). Derived equality
/// is only mathematical equality between normalised values; use
/// [`RationalFunction::equivalent`] otherwise.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction<C> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: Scalar> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the function is the constant 1 (up to an uncancelled
    /// common factor only if both sides are syntactically equal).
    pub fn is_one(&self) -> bool {
        !self.num.is_zero() && self.num == self.den
    }

    /// Number of stored terms in numerator and denominator together.
    pub fn size(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    /// Sum over the product of the denominators, without any gcd work.
    pub fn add_unreduced(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalFunction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        RationalFunction {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalFunction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        let g = if C::EXACT && !self.den.is_constant() && !other.den.is_constant() {
            gcd(&self.den, &other.den)
        } else {
            Polynomial::one()
        };
        if g.is_one() {
            return RationalFunction {
                num: &(&self.num * &other.den) + &(&other.num * &self.den),
                den: &self.den * &other.den,
            };
        }
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = other.den.div_exact(&g).expect("gcd divides");
        RationalFunction {
            num: &(&self.num * &b) + &(&other.num * &a),
            den: &(&a * &b) * &g,
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        })
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        RationalFunction {
            num: &self.den - &self.num,
            den: self.den.clone(),
        }
    }

    pub fn evaluate(&self, valuation: &Valuation<C>) -> Result<C> {
        let den = self.den.evaluate(valuation)?;
        if den.is_negligible() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.evaluate(valuation)? / den)
    }

    /// `a/b == c/d` as functions, by cross multiplication.
    pub fn equivalent(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn normalize(&self) -> Self {
        self.normalized(true)
    }

    /// Canonical form: optionally cancels the gcd of numerator and
    /// denominator, then scales so the denominator has coprime integer
    /// coefficients and a positive coefficient on its smallest monomial.
    /// Zero becomes `0/1`.
    pub fn normalized(&self, reduce: bool) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        if reduce && C::EXACT && !den.is_constant() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        if let Some(c) = den.constant_value() {
            return Self::from_poly(num.scale(&(C::one() / c)));
        }
        let factor = canonical_scale(&den);
        RationalFunction {
            num: num.scale(&factor),
            den: den.scale(&factor),
        }
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> RationalFunction<D> {
        RationalFunction {
            num: self.num.map_coeffs(&f),
            den: self.den.map_coeffs(&f),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> RatFunDisplay<'a, C> {
        RatFunDisplay { f: self, names }
    }
}

/// Factor turning `den` into a primitive integer polynomial whose trailing
/// coefficient is positive.
fn canonical_scale<C: Scalar>(den: &Polynomial<C>) -> C {
    let (_, trailing) = den.trailing_term().expect("nonzero denominator");
    let sign = if trailing.is_negative() {
        -C::one()
    } else {
        C::one()
    };
    if !C::EXACT {
        return sign / trailing.abs();
    }
    sign / numeric_content(den)
}

pub struct RatFunDisplay<'a, C> {
    f: &'a RationalFunction<C>,
    names: &'a [String],
}

impl<C: Scalar> fmt::Display for RatFunDisplay<'_, C> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.f.num.display(self.names).to_string();
        if self.f.den.is_one() {
            return write!(out, "{num}");
        }
        let den = self.f.den.display(self.names).to_string();
        let wrap = |s: String, p: &Polynomial<C>| {
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(
            out,
            "{} / {}",
            wrap(num, &self.f.num),
            wrap(den, &self.f.den)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rational;

    type P = Polynomial<Rational>;
    type F = RationalFunction<Rational>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let f = F::new(&x().pow(2) - &x(), x()).unwrap().normalize();
        assert_eq!(f, F::from_poly(&x() - &P::one()));
    }

    #[test]
    fn coprime_function_is_kept() {
        let num = &x() * &(&P::one() - &y());
        let den = &P::one() - &(&x() * &y());
        let f = F::new(num, den).unwrap().normalize();
        assert_eq!(f.display(&names()).to_string(), "(x - x*y) / (1 - x*y)");
    }

    #[test]
    fn zero_normalizes_to_zero_over_one() {
        let f = F::new(P::zero(), &P::one() - &x()).unwrap().normalize();
        assert!(f.denominator().is_one());
        assert!(f.numerator().is_zero());
    }

    #[test]
    fn evaluation() {
        let num = &(&x() * &(&P::one() - &y())) * &(&P::one() - &x());
        let den = &P::one() - &(&x() * &y());
        let f = F::new(num, den).unwrap();
        let v = Valuation::new(vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(f.evaluate(&v).unwrap(), ratio(1, 6));
        let g = F::new(x(), x()).unwrap();
        let at0 = Valuation::new(vec![ratio(0, 1)]);
        assert!(matches!(g.evaluate(&at0), Err(Error::DivisionByZero)));
    }

    #[test]
    fn scaling_is_canonical() {
        let a = F::new(x(), &P::constant(ratio(2, 1)) - &x().scale(&ratio(2, 1))).unwrap();
        let b = F::new(
            x().scale(&ratio(-3, 1)),
            &x().scale(&ratio(6, 1)) - &P::constant(ratio(6, 1)),
        )
        .unwrap();
        assert_eq!(a.normalize(), b.normalize());
        assert!(a.equivalent(&b));
    }

    #[test]
    fn sums_share_denominator_factors() {
        let d = &P::one() - &(&x() * &y());
        let a = F::new(x(), d.clone()).unwrap();
        let b = F::new(y(), &d * &x()).unwrap();
        let s = a.add(&b);
        assert!(s.equivalent(&F::new(&x().pow(2) + &y(), &d * &x()).unwrap()));
        assert_eq!(s.denominator().num_terms(), 2);
    }
}
