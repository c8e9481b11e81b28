//! Multivariate gcd by recursive content / primitive-part reduction.
//!
//! A polynomial in `Q[x_1..x_n]` is viewed as univariate in its
//! highest-indexed variable with coefficients in the remaining ones. The
//! gcd is the gcd of the contents (recursively, one variable fewer) times
//! the primitive part of the last nonzero remainder of a primitive
//! pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polyalg::Polynomial;
use crate::scalar::Scalar;

/// Greatest common divisor, normalised to leading coefficient 1.
///
/// Over inexact scalars the result is always `1` (no reduction is
/// attempted).
pub fn gcd<C: Scalar>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if !C::EXACT {
        return Polynomial::one();
    }
    gcd_nonzero(a, b)
}

fn gcd_nonzero<C: Scalar>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a == b {
        return monic(a);
    }
    let va = a.variables();
    let vb = b.variables();
    let main = *va.union(&vb).max().expect("non-constant polynomial");
    let (da, db) = (a.degree_in(main), b.degree_in(main));
    if da == 0 {
        return gcd_nonzero(a, &content(b, main));
    }
    if db == 0 {
        return gcd_nonzero(&content(a, main), b);
    }
    let ca = content(a, main);
    let cb = content(b, main);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_nonzero(&ca, &cb);
    let g = primitive_gcd(pa, pb, main);
    monic(&(&c * &g))
}

/// gcd of the coefficients of `p` viewed as univariate in `var`.
pub fn content<C: Scalar>(p: &Polynomial<C>, var: usize) -> Polynomial<C> {
    let mut acc = Polynomial::zero();
    for coeff in p.coefficients_in(var) {
        if coeff.is_zero() {
            continue;
        }
        acc = if acc.is_zero() {
            monic(&coeff)
        } else {
            gcd_nonzero(&acc, &coeff)
        };
        if acc.is_constant() {
            return Polynomial::one();
        }
    }
    acc
}

pub fn primitive_part<C: Scalar>(p: &Polynomial<C>, var: usize) -> Polynomial<C> {
    if p.is_zero() {
        return Polynomial::zero();
    }
    let c = content(p, var);
    p.div_exact(&c).expect("content divides")
}

fn primitive_gcd<C: Scalar>(
    mut a: Polynomial<C>,
    mut b: Polynomial<C>,
    var: usize,
) -> Polynomial<C> {
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b, var);
        if r.is_zero() {
            return primitive_part(&b, var);
        }
        if r.degree_in(var) == 0 {
            return Polynomial::one();
        }
        a = b;
        let pr = primitive_part(&r, var);
        // constant contents are invisible to `content`; drop them here to
        // keep coefficient growth in check
        b = pr.scale(&(C::one() / numeric_content(&pr)));
    }
}

/// gcd of the numerators over lcm of the denominators of the
/// coefficients; `1` over inexact scalars.
pub(crate) fn numeric_content<C: Scalar>(p: &Polynomial<C>) -> C {
    if !C::EXACT || p.is_zero() {
        return C::one();
    }
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for (_, c) in p.terms() {
        let r = c.to_rational();
        g = g.gcd(r.numer());
        l = l.lcm(r.denom());
    }
    C::from_rational(&BigRational::new(g, l))
}

/// A nonzero multiple of the remainder of `a` by `b` in `var`, computed by
/// repeatedly cancelling leading coefficients without division.
pub fn pseudo_remainder<C: Scalar>(
    a: &Polynomial<C>,
    b: &Polynomial<C>,
    var: usize,
) -> Polynomial<C> {
    let db = b.degree_in(var);
    let lb = b.coefficients_in(var).pop().expect("nonzero divisor");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.coefficients_in(var).pop().expect("nonzero remainder");
        let shift = Polynomial::var(var).pow(dr - db);
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Scales `p` so its graded-lex leading coefficient is 1.
pub fn monic<C: Scalar>(p: &Polynomial<C>) -> Polynomial<C> {
    match p.leading_term() {
        Some((_, c)) if !c.is_one() => p.scale(&(C::one() / c.clone())),
        _ => p.clone(),
    }
}
