use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::mccheck::solve_dense;
use crate::model::{backward_reachable, Pmc, Spec};
use crate::polyalg::Valuation;
use crate::scalar::Scalar;
use crate::Rational;

/// Markov chain with constant transition probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct Mc<C> {
    initial: usize,
    rows: Vec<Vec<(usize, C)>>,
    targets: BTreeSet<usize>,
}

fn row_sum_ok<C: Scalar>(sum: &C) -> bool {
    let diff = sum.clone() - C::one();
    if C::EXACT {
        diff.is_zero()
    } else {
        diff.abs().approx() < 1e-9
    }
}

fn in_unit_interval<C: Scalar>(p: &C) -> bool {
    if C::EXACT {
        *p >= C::zero() && *p <= C::one()
    } else {
        let x = p.approx();
        (-1e-12..=1.0 + 1e-12).contains(&x)
    }
}

impl<C: Scalar> Mc<C> {
    /// Builds an MC, checking that each row is a probability distribution.
    /// Zero entries are dropped.
    pub fn new(
        initial: usize,
        rows: Vec<Vec<(usize, C)>>,
        targets: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = rows.len();
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        if initial >= n || targets.iter().any(|&t| t >= n) {
            return Err(Error::Model("state index out of range".into()));
        }
        let mut clean = Vec::with_capacity(n);
        for (s, row) in rows.into_iter().enumerate() {
            let mut sum = C::zero();
            let mut kept = Vec::with_capacity(row.len());
            for (t, p) in row {
                if t >= n {
                    return Err(Error::Model(format!(
                        "successor {t} of state {s} out of range"
                    )));
                }
                if !in_unit_interval(&p) {
                    return Err(Error::InvalidInstantiation(format!(
                        "probability {p} from state {s} outside [0, 1]"
                    )));
                }
                sum = sum + p.clone();
                if !p.is_zero() {
                    kept.push((t, p));
                }
            }
            if !row_sum_ok(&sum) {
                return Err(Error::InvalidInstantiation(format!(
                    "outgoing probabilities of state {s} sum to {sum}"
                )));
            }
            kept.sort_by_key(|(t, _)| *t);
            clean.push(kept);
        }
        Ok(Mc {
            initial,
            rows: clean,
            targets,
        })
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn targets(&self) -> &BTreeSet<usize> {
        &self.targets
    }

    pub fn row(&self, s: usize) -> &[(usize, C)] {
        &self.rows[s]
    }

    /// States with a positive-probability path to the target set.
    pub fn states_reaching_target(&self) -> BTreeSet<usize> {
        backward_reachable(
            self.num_states(),
            self.rows.iter().enumerate().flat_map(|(s, row)| {
                row.iter()
                    .filter(|(_, p)| !p.is_negligible())
                    .map(move |(t, _)| (s, *t))
            }),
            &self.targets,
        )
    }

    /// Probability of eventually reaching the targets, for every state.
    ///
    /// States outside the backward-reachable set get 0 and targets get 1;
    /// the remaining states solve `p_s = Σ P(s,s') p_s'` exactly.
    pub fn reach_probs(&self) -> Vec<C> {
        let n = self.num_states();
        let reaching = self.states_reaching_target();
        let mut values = vec![C::zero(); n];
        let mut slot = vec![usize::MAX; n];
        let mut unknowns = Vec::new();
        for &s in &reaching {
            if self.targets.contains(&s) {
                values[s] = C::one();
            } else {
                slot[s] = unknowns.len();
                unknowns.push(s);
            }
        }
        let m = unknowns.len();
        if m == 0 {
            return values;
        }
        let mut a = vec![vec![C::zero(); m]; m];
        let mut b = vec![C::zero(); m];
        for (i, &s) in unknowns.iter().enumerate() {
            a[i][i] = C::one();
            for (t, p) in &self.rows[s] {
                if self.targets.contains(t) {
                    b[i] = b[i].clone() + p.clone();
                } else if slot[*t] != usize::MAX {
                    let j = slot[*t];
                    a[i][j] = a[i][j].clone() - p.clone();
                }
            }
        }
        let x = solve_dense(a, b).expect("restricted reachability system is nonsingular");
        for (i, s) in unknowns.into_iter().enumerate() {
            values[s] = x[i].clone();
        }
        values
    }

    pub fn reach_prob(&self) -> C {
        if self.targets.contains(&self.initial) {
            return C::one();
        }
        self.reach_probs().swap_remove(self.initial)
    }
}

impl Mc<Rational> {
    /// Exact check of `spec` on the initial state.
    pub fn check(&self, spec: &Spec) -> bool {
        spec.holds(&self.reach_prob())
    }
}

/// Replaces every transition function `f` of `pmc` by `f[v]`.
pub fn instantiate<C: Scalar>(pmc: &Pmc, valuation: &Valuation<C>) -> Result<Mc<C>> {
    if valuation.len() != pmc.num_params() {
        return Err(Error::InvalidInstantiation(format!(
            "valuation has {} values but the model has {} parameters",
            valuation.len(),
            pmc.num_params()
        )));
    }
    let rows = (0..pmc.num_states())
        .map(|s| {
            pmc.row(s)
                .iter()
                .map(|(t, f)| {
                    let coeffs = f.map_coeffs(C::from_rational);
                    coeffs.evaluate(valuation).map(|p| (*t, p))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Mc::new(pmc.initial(), rows, pmc.targets().iter().copied())
}

/// Exact reachability probability of `pmc` at `valuation`.
pub fn reach_prob_at(pmc: &Pmc, valuation: &Valuation<Rational>) -> Result<Rational> {
    Ok(instantiate(pmc, valuation)?.reach_prob())
}

/// Exact check `pmc[valuation] ⊨ spec`.
pub fn check_at(pmc: &Pmc, valuation: &Valuation<Rational>, spec: &Spec) -> Result<bool> {
    Ok(spec.holds(&reach_prob_at(pmc, valuation)?))
}
