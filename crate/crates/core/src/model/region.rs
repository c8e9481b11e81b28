use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::Pmc;
use crate::polyalg::Valuation;
use crate::scalar::{format_rational, ratio};
use crate::Rational;

/// Closed axis-aligned box, one interval per parameter slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    bounds: Vec<(Rational, Rational)>,
}

impl Region {
    pub fn new(bounds: Vec<(Rational, Rational)>) -> Result<Self> {
        if let Some(i) = bounds.iter().position(|(lo, hi)| lo > hi) {
            return Err(Error::Model(format!(
                "empty interval for parameter #{i}: lower bound exceeds upper bound"
            )));
        }
        Ok(Region { bounds })
    }

    /// `[margin, 1 - margin]` in every dimension; the closed stand-in for
    /// the open unit box.
    pub fn unit_box_with_margin(dim: usize, margin: &Rational) -> Self {
        let hi = Rational::one() - margin;
        Region {
            bounds: vec![(margin.clone(), hi); dim],
        }
    }

    /// Default closed approximation of `(0, 1)^dim`, margin 1/100.
    pub fn default_box(dim: usize) -> Self {
        Self::unit_box_with_margin(dim, &ratio(1, 100))
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn lower(&self, i: usize) -> &Rational {
        &self.bounds[i].0
    }

    pub fn upper(&self, i: usize) -> &Rational {
        &self.bounds[i].1
    }

    pub fn width(&self, i: usize) -> Rational {
        &self.bounds[i].1 - &self.bounds[i].0
    }

    /// Product of interval widths.
    pub fn volume(&self) -> Rational {
        self.bounds
            .iter()
            .fold(Rational::one(), |acc, (lo, hi)| acc * (hi - lo))
    }

    pub fn is_degenerate(&self) -> bool {
        self.bounds.iter().any(|(lo, hi)| lo == hi)
    }

    pub fn center(&self) -> Valuation<Rational> {
        Valuation::new(
            self.bounds
                .iter()
                .map(|(lo, hi)| (lo + hi) / Rational::from_integer(2.into()))
                .collect(),
        )
    }

    pub fn contains(&self, v: &Valuation<Rational>) -> bool {
        v.len() == self.dim()
            && self
                .bounds
                .iter()
                .zip(v.values())
                .all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    /// Index of the widest interval; ties go to the lowest index.
    pub fn widest_dimension(&self) -> usize {
        let mut best = 0;
        for i in 1..self.dim() {
            if self.width(i) > self.width(best) {
                best = i;
            }
        }
        best
    }

    /// Bisects dimension `dim` at its midpoint.
    pub fn bisect(&self, dim: usize) -> (Region, Region) {
        let (lo, hi) = &self.bounds[dim];
        let mid = (lo + hi) / Rational::from_integer(2.into());
        let mut left = self.clone();
        let mut right = self.clone();
        left.bounds[dim].1 = mid.clone();
        right.bounds[dim].0 = mid;
        (left, right)
    }

    /// Corner selecting the upper bound in dimension `i` iff bit `i` of
    /// `mask` is set, restricted to `dims`; other slots take the lower bound.
    pub fn vertex(&self, dims: &[usize], mask: usize) -> Valuation<Rational> {
        let mut values: Vec<Rational> = self.bounds.iter().map(|(lo, _)| lo.clone()).collect();
        for (bit, &d) in dims.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                values[d] = self.bounds[d].1.clone();
            }
        }
        Valuation::new(values)
    }

    /// All `2^dim` corners.
    pub fn vertices(&self) -> impl Iterator<Item = Valuation<Rational>> + '_ {
        let dims: Vec<usize> = (0..self.dim()).collect();
        (0..1usize << self.dim()).map(move |mask| self.vertex(&dims, mask))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> RegionDisplay<'a> {
        RegionDisplay {
            region: self,
            names,
        }
    }
}

pub struct RegionDisplay<'a> {
    region: &'a Region,
    names: &'a [String],
}

impl fmt::Display for RegionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.region.bounds.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let name = self
                .names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("x{i}"));
            write!(
                f,
                "{name} in [{}, {}]",
                format_rational(lo),
                format_rational(hi)
            )?;
        }
        Ok(())
    }
}

impl Pmc {
    /// Whether every nonzero transition stays strictly positive on `region`.
    ///
    /// Requires multilinear transition functions, whose extrema over a box
    /// are attained at vertices, so checking the corners of each
    /// function's own variables suffices.
    pub fn is_graph_preserving(&self, region: &Region) -> Result<bool> {
        self.check_region_dim(region)?;
        for (s, t, f) in self.transitions() {
            if !f.is_multilinear() {
                return Err(Error::UnsupportedModel(format!(
                    "transition {} -> {} is not multilinear",
                    self.state_name(s),
                    self.state_name(t)
                )));
            }
            let vars: Vec<usize> = f.variables().into_iter().collect();
            for mask in 0..1usize << vars.len() {
                let corner = region.vertex(&vars, mask);
                if f.evaluate(&corner)? <= Rational::zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub(crate) fn check_region_dim(&self, region: &Region) -> Result<()> {
        if region.dim() != self.num_params() {
            return Err(Error::Dimension(format!(
                "region has {} dimensions but the model has {} parameters",
                region.dim(),
                self.num_params()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(b: &[(i64, i64, i64, i64)]) -> Region {
        Region::new(
            b.iter()
                .map(|&(a, b, c, d)| (ratio(a, b), ratio(c, d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(r(&[(1, 10, 4, 5), (2, 5, 7, 10)]).volume(), ratio(21, 100));
        assert_eq!(r(&[(1, 3, 1, 3), (0, 1, 1, 1)]).volume(), ratio(0, 1));
        assert_eq!(r(&[(0, 1, 1, 1), (0, 1, 1, 1)]).volume(), ratio(1, 1));
    }

    #[test]
    fn rejects_inverted_interval() {
        assert!(Region::new(vec![(ratio(1, 2), ratio(1, 3))]).is_err());
    }

    #[test]
    fn widest_dimension_tie_breaks_low() {
        assert_eq!(r(&[(0, 1, 1, 1), (0, 1, 1, 1)]).widest_dimension(), 0);
        assert_eq!(r(&[(0, 1, 1, 4), (0, 1, 1, 1)]).widest_dimension(), 1);
    }

    proptest! {
        #[test]
        fn bisection_conserves_volume(
            bounds in proptest::collection::vec((0i64..50, 1i64..50), 1..4),
            dim_seed in 0usize..8,
        ) {
            let region = Region::new(
                bounds.iter().map(|&(lo, w)| (ratio(lo, 7), ratio(lo + w, 7))).collect()
            ).unwrap();
            let dim = dim_seed % region.dim();
            let (a, b) = region.bisect(dim);
            prop_assert_eq!(a.volume() + b.volume(), region.volume());
        }
    }
}
