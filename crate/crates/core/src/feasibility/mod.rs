//! Feasibility: find an instantiation that satisfies the spec.

mod lp;
mod qcqp;
mod scp;
mod search;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mccheck::reach_prob_at;
use crate::model::{Pmc, Region, Spec};
use crate::polyalg::Valuation;
use crate::scalar::round_to_denominator;
use crate::Rational;

pub use lp::{solve_lp, ConstraintKind, LinearConstraint, LpOutcome, LpProblem};
pub use qcqp::{linearize, QcqpProblem, Successor};
pub use scp::{scp_feasibility, ScpConfig};
pub use search::{pso_search, sample_search, PsoConfig};

/// Denominator bound for valuations handed to the exact model checker.
pub const ANCHOR_DENOMINATOR: u64 = 1_000_000;

/// A feasibility query: a pMC, a spec, the box to search, and optional
/// simplex groups whose parameters must sum to 1.
#[derive(Clone, Copy, Debug)]
pub struct Problem<'a> {
    pub pmc: &'a Pmc,
    pub spec: &'a Spec,
    pub region: &'a Region,
    pub simplex: &'a [Vec<usize>],
}

impl<'a> Problem<'a> {
    pub fn new(pmc: &'a Pmc, spec: &'a Spec, region: &'a Region) -> Self {
        Problem {
            pmc,
            spec,
            region,
            simplex: &[],
        }
    }

    pub fn with_simplex(mut self, groups: &'a [Vec<usize>]) -> Self {
        self.simplex = groups;
        self
    }

    fn validate(&self) -> Result<()> {
        self.pmc.check_region_dim(self.region)?;
        for group in self.simplex {
            if group.iter().any(|&x| x >= self.pmc.num_params()) {
                return Err(Error::InvalidArgument("simplex group out of range".into()));
            }
        }
        Ok(())
    }

    /// Exact probability at `v`, or `None` when `v` is not a valid
    /// instantiation.
    fn probability(&self, v: &Valuation<Rational>) -> Option<Rational> {
        reach_prob_at(self.pmc, v).ok()
    }

    /// Rounds `values` to bounded denominators, clamps into the region and
    /// restores the simplex sums through the last member of each group.
    /// Falls back to `values` unchanged if the repaired point leaves the
    /// region.
    fn round(&self, values: &[Rational]) -> Valuation<Rational> {
        let mut out: Vec<Rational> = values
            .iter()
            .enumerate()
            .map(|(i, v)| self.clamp(i, round_to_denominator(v, ANCHOR_DENOMINATOR)))
            .collect();
        for group in self.simplex {
            if let Some((&last, rest)) = group.split_last() {
                let sum = rest.iter().fold(Rational::zero(), |acc, &x| acc + &out[x]);
                out[last] = Rational::one() - sum;
            }
        }
        let v = Valuation::new(out);
        if self.region.contains(&v) {
            v
        } else {
            Valuation::new(values.to_vec())
        }
    }

    fn clamp(&self, i: usize, v: Rational) -> Rational {
        if v < *self.region.lower(i) {
            self.region.lower(i).clone()
        } else if v > *self.region.upper(i) {
            self.region.upper(i).clone()
        } else {
            v
        }
    }

    /// Uniform point of the region on the `ANCHOR_DENOMINATOR` grid; simplex
    /// groups are rescaled to sum to 1. Gives up after a bounded number of
    /// draws violating the region.
    fn random_point(&self, rng: &mut ChaCha8Rng) -> Option<Valuation<Rational>> {
        for _ in 0..100 {
            let mut values: Vec<Rational> = (0..self.region.dim())
                .map(|i| {
                    let t = rng.gen_range(0..=ANCHOR_DENOMINATOR);
                    let frac = Rational::new(BigInt::from(t), BigInt::from(ANCHOR_DENOMINATOR));
                    self.region.lower(i) + self.region.width(i) * frac
                })
                .collect();
            for group in self.simplex {
                let sum = group
                    .iter()
                    .fold(Rational::zero(), |acc, &x| acc + &values[x]);
                if sum.is_zero() {
                    continue;
                }
                for &x in group {
                    values[x] = &values[x] / &sum;
                }
            }
            let v = self.round(&values);
            if self.region.contains(&v) && self.simplex_ok(&v) {
                return Some(v);
            }
        }
        None
    }

    fn simplex_ok(&self, v: &Valuation<Rational>) -> bool {
        self.simplex.iter().all(|group| {
            group
                .iter()
                .fold(Rational::zero(), |acc, &x| acc + &v.values()[x])
                .is_one()
        })
    }

    fn center(&self) -> Valuation<Rational> {
        let c = self.region.center();
        if self.simplex.is_empty() {
            return c;
        }
        let mut values = c.values().to_vec();
        for group in self.simplex {
            let share = Rational::new(BigInt::one(), BigInt::from(group.len()));
            for &x in group {
                values[x] = share.clone();
            }
        }
        let v = Valuation::new(values);
        if self.region.contains(&v) {
            v
        } else {
            c
        }
    }
}

/// Iteration counters reported with a search result.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Exact model-checking calls.
    pub checks: usize,
    /// LP solves (SCP) or swarm updates (PSO).
    pub iterations: usize,
    pub accepted: usize,
    pub restarts: usize,
}

/// A valuation whose exact probability satisfies the spec.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub valuation: Valuation<Rational>,
    pub probability: Rational,
    pub stats: SearchStats,
}
