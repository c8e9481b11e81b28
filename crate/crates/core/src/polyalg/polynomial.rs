use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::polyalg::{Monomial, Valuation};
use crate::scalar::Scalar;

/// Multivariate polynomial in canonical sparse form.
///
/// Terms are kept in a map ordered by [`Monomial`]'s graded-lex order and
/// zero coefficients are never stored, so derived equality is mathematical
/// equality.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(var: usize) -> Self {
        Self::term(Monomial::var(var), C::one())
    }

    pub fn term(monomial: Monomial, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, monomial: Monomial, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (`None` if it mentions variables).
    pub fn constant_value(&self) -> Option<C> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    /// Greatest term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Smallest term under graded-lex order.
    pub fn trailing_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next()
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.variables()).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(var))
            .max()
            .unwrap_or(0)
    }

    /// Degree at most one in every variable.
    pub fn is_multilinear(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.powers().iter().all(|&(_, e)| e <= 1))
    }

    /// Total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.total_degree() <= 1
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, monomial: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(monomial), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates with values supplied by `lookup`; fails on the first
    /// variable without a value.
    pub fn evaluate_with<'a>(&self, lookup: impl Fn(usize) -> Option<&'a C>) -> Result<C>
    where
        C: 'a,
    {
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut value = c.clone();
            for &(v, e) in m.powers() {
                let x = lookup(v).ok_or_else(|| Error::MissingParameter(format!("#{v}")))?;
                value = value * num_traits::pow(x.clone(), e as usize);
            }
            total = total + value;
        }
        Ok(total)
    }

    pub fn evaluate(&self, valuation: &Valuation<C>) -> Result<C> {
        self.evaluate_with(|v| valuation.get(v))
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derivative(var) {
                out.add_term(rest, c.clone() * C::from_i64(e as i64));
            }
        }
        out
    }

    /// `∇f` at `valuation`, one entry per parameter slot of the valuation.
    pub fn gradient(&self, valuation: &Valuation<C>) -> Result<Vec<C>> {
        (0..valuation.len())
            .map(|v| self.derivative(v).evaluate(valuation))
            .collect()
    }

    /// Replaces `var` by `replacement`.
    pub fn substitute(&self, var: usize, replacement: &Polynomial<C>) -> Self {
        if self.degree_in(var) == 0 {
            return self.clone();
        }
        let coeffs = self.coefficients_in(var);
        // Horner in `var`
        let mut out = Self::zero();
        for coeff in coeffs.iter().rev() {
            out = &(&out * replacement) + coeff;
        }
        out
    }

    /// Substitutes constants for the variables `lookup` knows about and keeps
    /// the rest symbolic.
    pub fn partial_evaluate<'a>(&self, lookup: impl Fn(usize) -> Option<&'a C>) -> Self
    where
        C: 'a,
    {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.powers() {
                match lookup(v) {
                    Some(x) => coeff = coeff * num_traits::pow(x.clone(), e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_powers(rest), coeff);
        }
        out
    }

    /// Renames variables through `map`.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_powers(m.powers().iter().map(|&(v, e)| (map(v), e))),
                c.clone(),
            )
        }))
    }

    /// Views the polynomial as univariate in `var`: entry `i` is the
    /// coefficient (free of `var`) of `var^i`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial<C>> {
        let mut coeffs = vec![Self::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(var);
            coeffs[e as usize].add_term(rest, c.clone());
        }
        coeffs
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial<C>) -> Option<Polynomial<C>> {
        let (lead_m, lead_c) = divisor.leading_term()?;
        if divisor.num_terms() == 1 && lead_m.is_one() {
            return Some(self.scale(&(C::one() / lead_c.clone())));
        }
        let mut rest = self.clone();
        let mut quotient = Self::zero();
        while let Some((m, c)) = rest.leading_term() {
            let qm = m.div(lead_m)?;
            let qc = c.clone() / lead_c.clone();
            rest = &rest - &divisor.mul_monomial(&qm, &qc);
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }

    /// Converts the coefficient type.
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Adapter rendering the polynomial with the given parameter names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, names }
    }
}

impl<C: Scalar> Add<&Polynomial<C>> for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub<&Polynomial<C>> for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Mul<&Polynomial<C>> for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Scalar> $tr<Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: Polynomial<C>) -> Polynomial<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Scalar> $tr<&Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: &Polynomial<C>) -> Polynomial<C> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

pub struct PolyDisplay<'a, C> {
    poly: &'a Polynomial<C>,
    names: &'a [String],
}

impl<C: Scalar> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if m.is_one() || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
                first = false;
            }
            for &(v, e) in m.powers() {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                match self.names.get(v) {
                    Some(name) => write!(f, "{name}")?,
                    None => write!(f, "x{v}")?,
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
