use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;
use crate::Poly;

/// Parametric Markov chain with a single target set.
///
/// Rows are sparse, sorted by successor, and never store a zero function.
/// Construction checks that every row sums symbolically to 1, optionally
/// modulo simplex constraints over groups of parameters (used for the
/// policy pMCs of POMDPs).
#[derive(Clone, Debug, PartialEq)]
pub struct Pmc {
    state_names: Vec<String>,
    params: Vec<String>,
    initial: usize,
    rows: Vec<Vec<(usize, Poly)>>,
    targets: BTreeSet<usize>,
}

impl Pmc {
    /// Builds and validates a pMC. Parallel transitions between the same
    /// pair of states are summed.
    pub fn new(
        state_names: Vec<String>,
        params: Vec<String>,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, usize, Poly)>,
        targets: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let pmc = Self::new_unchecked(state_names, params, initial, transitions, targets)?;
        pmc.validate_rows(&[])?;
        Ok(pmc)
    }

    /// Builds a pMC whose rows sum to 1 only once every simplex group
    /// `{z_1..z_m}` is constrained to `z_1 + ... + z_m = 1`.
    pub fn new_with_simplex(
        state_names: Vec<String>,
        params: Vec<String>,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, usize, Poly)>,
        targets: impl IntoIterator<Item = usize>,
        simplex_groups: &[Vec<usize>],
    ) -> Result<Self> {
        let pmc = Self::new_unchecked(state_names, params, initial, transitions, targets)?;
        pmc.validate_rows(simplex_groups)?;
        Ok(pmc)
    }

    fn new_unchecked(
        state_names: Vec<String>,
        params: Vec<String>,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, usize, Poly)>,
        targets: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = state_names.len();
        if initial >= n {
            return Err(Error::Model(format!(
                "initial state index {initial} out of range"
            )));
        }
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        if let Some(&t) = targets.iter().find(|&&t| t >= n) {
            return Err(Error::Model(format!("target state index {t} out of range")));
        }
        let mut maps: Vec<BTreeMap<usize, Poly>> = vec![BTreeMap::new(); n];
        for (s, t, f) in transitions {
            if s >= n || t >= n {
                return Err(Error::Model(format!("transition ({s}, {t}) out of range")));
            }
            if let Some(v) = f.variables().into_iter().find(|&v| v >= params.len()) {
                return Err(Error::Model(format!("undeclared parameter index {v}")));
            }
            let entry = maps[s].entry(t).or_insert_with(Polynomial::zero);
            *entry = &*entry + &f;
        }
        let rows = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, f)| !f.is_zero()).collect())
            .collect();
        Ok(Pmc {
            state_names,
            params,
            initial,
            rows,
            targets,
        })
    }

    fn validate_rows(&self, simplex_groups: &[Vec<usize>]) -> Result<()> {
        for (s, row) in self.rows.iter().enumerate() {
            let mut sum = row
                .iter()
                .fold(Polynomial::zero(), |acc: Poly, (_, f)| &acc + f);
            for group in simplex_groups {
                if let Some((&last, rest)) = group.split_last() {
                    let replacement = rest.iter().fold(Polynomial::one(), |acc: Poly, &v| {
                        &acc - &Polynomial::var(v)
                    });
                    sum = sum.substitute(last, &replacement);
                }
            }
            if !sum.is_one() {
                return Err(Error::Model(format!(
                    "outgoing probabilities of state `{}` sum to {} instead of 1",
                    self.state_names[s],
                    sum.display(&self.params)
                )));
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn targets(&self) -> &BTreeSet<usize> {
        &self.targets
    }

    pub fn is_target(&self, s: usize) -> bool {
        self.targets.contains(&s)
    }

    /// Outgoing transitions of `s`, sorted by successor.
    pub fn row(&self, s: usize) -> &[(usize, Poly)] {
        &self.rows[s]
    }

    pub fn transition(&self, s: usize, t: usize) -> Option<&Poly> {
        self.rows[s]
            .binary_search_by_key(&t, |(u, _)| *u)
            .ok()
            .map(|i| &self.rows[s][i].1)
    }

    pub fn num_transitions(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Parameters mentioned in the outgoing row of `s`, ascending.
    pub fn row_params(&self, s: usize) -> BTreeSet<usize> {
        self.rows[s]
            .iter()
            .flat_map(|(_, f)| f.variables())
            .collect()
    }

    /// Every (state, successor, function) triple.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, &Poly)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |(t, f)| (s, *t, f)))
    }

    pub fn is_multilinear(&self) -> bool {
        self.transitions().all(|(_, _, f)| f.is_multilinear())
    }

    pub fn is_affine(&self) -> bool {
        self.transitions().all(|(_, _, f)| f.is_affine())
    }

    /// States with a path of nonzero transitions to a target state,
    /// targets included.
    pub fn states_reaching_target(&self) -> BTreeSet<usize> {
        backward_reachable(
            self.num_states(),
            self.transitions().map(|(s, t, _)| (s, t)),
            &self.targets,
        )
    }

    /// Returns a copy where the functions are replaced through `f`; the
    /// result is not re-validated.
    pub(crate) fn map_functions(
        &self,
        params: Vec<String>,
        mut f: impl FnMut(usize, usize, &Poly) -> Poly,
    ) -> Pmc {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(s, row)| {
                row.iter()
                    .map(|(t, p)| (*t, f(s, *t, p)))
                    .filter(|(_, p)| !p.is_zero())
                    .collect()
            })
            .collect();
        Pmc {
            state_names: self.state_names.clone(),
            params,
            initial: self.initial,
            rows,
            targets: self.targets.clone(),
        }
    }

    /// Total number of polynomial terms over all transition functions.
    pub fn function_terms(&self) -> usize {
        self.transitions().map(|(_, _, f)| f.num_terms()).sum()
    }
}

/// Backward breadth-first search from `targets` over `edges`.
pub fn backward_reachable(
    n: usize,
    edges: impl Iterator<Item = (usize, usize)>,
    targets: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, t) in edges {
        preds[t].push(s);
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = targets.iter().copied().collect();
    for &t in targets {
        seen[t] = true;
    }
    while let Some(t) = queue.pop_front() {
        for &p in &preds[t] {
            if !seen[p] {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    (0..n).filter(|&s| seen[s]).collect()
}
