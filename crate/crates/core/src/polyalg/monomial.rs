use std::cmp::Ordering;

/// Power product `x_{i1}^{e1} ... x_{ik}^{ek}` stored sparsely as
/// `(variable index, exponent)` pairs sorted by variable index, exponents
/// strictly positive. The empty monomial is the constant `1`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the lowest-indexed variable where the two monomials differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(var: usize) -> Self {
        Monomial {
            powers: vec![(var, 1)],
        }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_powers(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut powers: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        powers.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(usize, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { powers: merged }
    }

    pub fn powers(&self) -> &[(usize, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.powers
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (va, ea) = self.powers[i];
            let (vb, eb) = other.powers[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.powers[i..]);
        out.extend_from_slice(&other.powers[j..]);
        Monomial { powers: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.powers.len());
        let mut j = 0;
        for &(v, e) in &self.powers {
            if j < other.powers.len() && other.powers[j].0 < v {
                return None;
            }
            if j < other.powers.len() && other.powers[j].0 == v {
                let oe = other.powers[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - oe)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.powers.len() {
            return None;
        }
        Some(Monomial { powers: out })
    }

    /// Removes `var` from the monomial, returning its former exponent.
    pub fn split_off(&self, var: usize) -> (u32, Monomial) {
        let mut rest = self.clone();
        match rest.powers.binary_search_by_key(&var, |&(v, _)| v) {
            Ok(i) => {
                let (_, e) = rest.powers.remove(i);
                (e, rest)
            }
            Err(_) => (0, rest),
        }
    }

    /// Partial derivative coefficient and monomial: `d/dx x^e m = e x^(e-1) m`.
    pub fn derivative(&self, var: usize) -> Option<(u32, Monomial)> {
        let i = self.powers.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let mut powers = self.powers.clone();
        let e = powers[i].1;
        if e == 1 {
            powers.remove(i);
        } else {
            powers[i].1 -= 1;
        }
        Some((e, Monomial { powers }))
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.powers.iter().map(|&(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| lex_cmp(&self.powers, &other.powers))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex_cmp(a: &[(usize, u32)], b: &[(usize, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                // `a` has a positive exponent on a variable `b` lacks
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    other => return other,
                },
            },
        }
    }
}
