use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::mccheck::Mc;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Action<C> {
    pub name: String,
    pub distribution: Vec<(usize, C)>,
}

/// Finite MDP with a reachability target set.
#[derive(Clone, Debug, PartialEq)]
pub struct Mdp<C> {
    state_names: Vec<String>,
    initial: usize,
    actions: Vec<Vec<Action<C>>>,
    targets: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Optimal value with a deterministic memoryless policy attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult<C> {
    pub value: C,
    /// Per-state optimal values.
    pub values: Vec<C>,
    /// Chosen action index per state.
    pub policy: Vec<usize>,
    pub iterations: usize,
}

impl<C: Scalar> Mdp<C> {
    pub fn new(
        state_names: Vec<String>,
        initial: usize,
        actions: Vec<Vec<Action<C>>>,
        targets: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = state_names.len();
        if actions.len() != n {
            return Err(Error::Model("one action list per state required".into()));
        }
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        if initial >= n || targets.iter().any(|&t| t >= n) {
            return Err(Error::Model("state index out of range".into()));
        }
        for (s, acts) in actions.iter().enumerate() {
            if acts.is_empty() {
                return Err(Error::Model(format!(
                    "state `{}` has no action",
                    state_names[s]
                )));
            }
            for a in acts {
                // reuse the MC row validation on a one-row chain
                let mut row = a.distribution.clone();
                if row.iter().any(|(t, _)| *t >= n) {
                    return Err(Error::Model(format!(
                        "action `{}` of `{}` leads out of range",
                        a.name, state_names[s]
                    )));
                }
                row.iter_mut().for_each(|(t, _)| *t = 0);
                Mc::new(0, vec![row], [0usize]).map_err(|e| {
                    Error::Model(format!("action `{}` of `{}`: {e}", a.name, state_names[s]))
                })?;
            }
        }
        Ok(Mdp {
            state_names,
            initial,
            actions,
            targets,
        })
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn targets(&self) -> &BTreeSet<usize> {
        &self.targets
    }

    pub fn actions(&self, s: usize) -> &[Action<C>] {
        &self.actions[s]
    }

    pub fn num_choices(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    /// The MC obtained by fixing `policy[s]` in every state.
    pub fn induced_mc(&self, policy: &[usize]) -> Mc<C> {
        let rows = self
            .actions
            .iter()
            .zip(policy)
            .map(|(acts, &a)| acts[a].distribution.clone())
            .collect();
        Mc::new(self.initial, rows, self.targets.iter().copied())
            .expect("actions were validated at construction")
    }

    fn q_value(&self, s: usize, a: usize, values: &[C]) -> C {
        self.actions[s][a]
            .distribution
            .iter()
            .fold(C::zero(), |acc, (t, p)| {
                acc + p.clone() * values[*t].clone()
            })
    }

    /// States from which the target set can be avoided forever under some
    /// policy (minimal reachability probability 0), and for each such
    /// state an action that keeps it outside the complement set.
    fn min_zero_states(&self) -> (Vec<bool>, Vec<Option<usize>>) {
        let n = self.num_states();
        let mut must_reach = vec![false; n];
        for &t in &self.targets {
            must_reach[t] = true;
        }
        loop {
            let mut changed = false;
            for s in 0..n {
                if must_reach[s] {
                    continue;
                }
                let all_actions_hit = self.actions[s].iter().all(|a| {
                    a.distribution
                        .iter()
                        .any(|(t, p)| !p.is_negligible() && must_reach[*t])
                });
                if all_actions_hit {
                    must_reach[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let avoid = (0..n)
            .map(|s| {
                (!must_reach[s]).then(|| {
                    self.actions[s]
                        .iter()
                        .position(|a| {
                            a.distribution
                                .iter()
                                .all(|(t, p)| p.is_negligible() || !must_reach[*t])
                        })
                        .expect("state outside the must-reach set has an avoiding action")
                })
            })
            .collect();
        (must_reach.iter().map(|&m| !m).collect(), avoid)
    }

    /// Extremal probability of reaching the targets, by policy iteration
    /// with an exact linear solve per induced MC.
    ///
    /// Improvement switches a state's action only on strict improvement and
    /// picks the lowest-indexed optimal action.
    pub fn extremal_reach(&self, direction: Direction) -> ExtremalResult<C> {
        let n = self.num_states();
        let mut policy = vec![0usize; n];
        let mut frozen = vec![false; n];
        if direction == Direction::Min {
            let (zero, avoid) = self.min_zero_states();
            for s in 0..n {
                if zero[s] {
                    policy[s] = avoid[s].expect("avoiding action");
                    frozen[s] = true;
                }
            }
        }
        for &t in &self.targets {
            frozen[t] = true;
        }
        let better = |candidate: &C, current: &C| -> bool {
            let diff = match direction {
                Direction::Max => candidate.clone() - current.clone(),
                Direction::Min => current.clone() - candidate.clone(),
            };
            diff.is_positive() && !diff.is_negligible()
        };
        let mut iterations = 0;
        loop {
            iterations += 1;
            let values = self.induced_mc(&policy).reach_probs();
            let mut changed = false;
            for s in 0..n {
                if frozen[s] || self.actions[s].len() == 1 {
                    continue;
                }
                let qs: Vec<C> = (0..self.actions[s].len())
                    .map(|a| self.q_value(s, a, &values))
                    .collect();
                let mut best = 0;
                for a in 1..qs.len() {
                    if better(&qs[a], &qs[best]) {
                        best = a;
                    }
                }
                if better(&qs[best], &qs[policy[s]]) {
                    policy[s] = best;
                    changed = true;
                }
            }
            if !changed {
                let value = values[self.initial].clone();
                return ExtremalResult {
                    value,
                    values,
                    policy,
                    iterations,
                };
            }
        }
    }
}
