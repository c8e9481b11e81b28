//! Closed-form solution functions by state elimination.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::Pmc;
use crate::{Poly, RatFunc};

/// Order in which non-initial, non-target states are eliminated.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum EliminationOrder {
    /// Fixed sequence of state indices.
    Static(Vec<usize>),
    /// Fewest predecessor-successor pairs first, recomputed every step.
    #[default]
    MinDegree,
    /// Smallest total size of incident functions first.
    MinFunctionSize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolfunConfig {
    pub order: EliminationOrder,
    /// Cancel common factors after every step.
    pub gcd: bool,
}

impl Default for SolfunConfig {
    fn default() -> Self {
        SolfunConfig {
            order: EliminationOrder::MinDegree,
            gcd: true,
        }
    }
}

/// Mutable transition graph over rational functions, restricted to the
/// states that can reach the target. Edges into other states are dropped.
#[derive(Clone, Debug)]
pub struct EliminationGraph {
    succ: BTreeMap<usize, BTreeMap<usize, RatFunc>>,
    pred: BTreeMap<usize, BTreeSet<usize>>,
    targets: BTreeSet<usize>,
    names: Vec<String>,
    gcd: bool,
}

impl EliminationGraph {
    pub fn new(pmc: &Pmc, gcd: bool) -> Self {
        let relevant = pmc.states_reaching_target();
        let mut succ: BTreeMap<usize, BTreeMap<usize, RatFunc>> = BTreeMap::new();
        let mut pred: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &s in &relevant {
            succ.insert(s, BTreeMap::new());
            pred.insert(s, BTreeSet::new());
        }
        for &s in &relevant {
            if pmc.is_target(s) {
                continue;
            }
            for (t, f) in pmc.row(s) {
                if relevant.contains(t) {
                    succ.get_mut(&s)
                        .unwrap()
                        .insert(*t, RatFunc::from_poly(f.clone()));
                    pred.get_mut(t).unwrap().insert(s);
                }
            }
        }
        EliminationGraph {
            succ,
            pred,
            targets: pmc.targets().clone(),
            names: pmc.state_names().to_vec(),
            gcd,
        }
    }

    /// Remaining states.
    pub fn states(&self) -> impl Iterator<Item = usize> + '_ {
        self.succ.keys().copied()
    }

    pub fn transition(&self, s: usize, t: usize) -> Option<&RatFunc> {
        self.succ.get(&s).and_then(|row| row.get(&t))
    }

    fn tidy(&self, f: RatFunc) -> RatFunc {
        f.normalized(self.gcd)
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if self.gcd {
            a.add(b)
        } else {
            a.add_unreduced(b)
        }
    }

    /// Removes the self-loop of `s` by rescaling its other outgoing
    /// functions with `1/(1 - z)`.
    fn remove_self_loop(&mut self, s: usize) -> Result<()> {
        let Some(z) = self.succ.get_mut(&s).unwrap().remove(&s) else {
            return Ok(());
        };
        self.pred.get_mut(&s).unwrap().remove(&s);
        let rest = z.one_minus();
        if rest.is_zero() || rest.normalize().is_zero() {
            return Err(Error::DegenerateLoop(self.names[s].clone()));
        }
        let row = std::mem::take(self.succ.get_mut(&s).unwrap());
        let mut scaled = BTreeMap::new();
        for (t, f) in row {
            let g = f.div(&rest)?;
            scaled.insert(t, self.tidy(g));
        }
        *self.succ.get_mut(&s).unwrap() = scaled;
        Ok(())
    }

    /// Eliminates `s`: self-loop removal followed by short-cuts from each
    /// predecessor to each successor.
    pub fn eliminate_state(&mut self, s: usize) -> Result<()> {
        if !self.succ.contains_key(&s) {
            return Err(Error::InvalidArgument(format!(
                "state index {s} is not present"
            )));
        }
        if self.targets.contains(&s) {
            return Err(Error::InvalidArgument(format!(
                "target state index {s} cannot be eliminated"
            )));
        }
        self.remove_self_loop(s)?;
        let out = self.succ.remove(&s).unwrap();
        let preds = self.pred.remove(&s).unwrap();
        for t in out.keys() {
            self.pred.get_mut(t).unwrap().remove(&s);
        }
        for p in preds {
            let via = self
                .succ
                .get_mut(&p)
                .unwrap()
                .remove(&s)
                .expect("edge to s");
            for (t, f) in &out {
                let shortcut = via.mul(f);
                let updated = match self.succ[&p].get(t) {
                    Some(old) => self.add(old, &shortcut),
                    None => shortcut,
                };
                let updated = self.tidy(updated);
                let row = self.succ.get_mut(&p).unwrap();
                if updated.is_zero() {
                    row.remove(t);
                    self.pred.get_mut(t).unwrap().remove(&p);
                } else {
                    row.insert(*t, updated);
                    self.pred.get_mut(t).unwrap().insert(p);
                }
            }
        }
        Ok(())
    }

    fn degree_cost(&self, s: usize) -> usize {
        let preds = self.pred[&s].iter().filter(|&&p| p != s).count();
        let succs = self.succ[&s].keys().filter(|&&t| t != s).count();
        preds * succs
    }

    fn size_cost(&self, s: usize) -> usize {
        let out: usize = self.succ[&s].values().map(RatFunc::size).sum();
        let inc: usize = self.pred[&s]
            .iter()
            .filter(|&&p| p != s)
            .map(|p| self.succ[p][&s].size())
            .sum();
        out + inc
    }
}

/// Solution function of the reachability objective of `pmc`, with the
/// default configuration.
pub fn solution_function(pmc: &Pmc, order: EliminationOrder) -> Result<RatFunc> {
    solution_function_with(
        pmc,
        &SolfunConfig {
            order,
            ..SolfunConfig::default()
        },
    )
}

pub fn solution_function_with(pmc: &Pmc, config: &SolfunConfig) -> Result<RatFunc> {
    let init = pmc.initial();
    if pmc.is_target(init) {
        return Ok(RatFunc::one());
    }
    let mut graph = EliminationGraph::new(pmc, config.gcd);
    if !graph.succ.contains_key(&init) {
        return Ok(RatFunc::zero());
    }
    let eliminable: BTreeSet<usize> = graph
        .states()
        .filter(|&s| s != init && !pmc.is_target(s))
        .collect();
    match &config.order {
        EliminationOrder::Static(list) => {
            let given: BTreeSet<usize> = list.iter().copied().collect();
            if given.len() != list.len() || given != eliminable {
                return Err(Error::InvalidArgument(
                    "static order must list every eliminable state exactly once".into(),
                ));
            }
            for &s in list {
                graph.eliminate_state(s)?;
            }
        }
        dynamic => {
            let mut remaining = eliminable;
            while !remaining.is_empty() {
                let pick = remaining
                    .iter()
                    .copied()
                    .min_by_key(|&s| match dynamic {
                        EliminationOrder::MinFunctionSize => graph.size_cost(s),
                        _ => graph.degree_cost(s),
                    })
                    .unwrap();
                graph.eliminate_state(pick)?;
                remaining.remove(&pick);
            }
        }
    }
    graph.remove_self_loop(init)?;
    let result = graph.succ[&init]
        .iter()
        .filter(|(t, _)| pmc.is_target(**t))
        .fold(RatFunc::zero(), |acc, (_, f)| graph.add(&acc, f));
    Ok(result.normalize())
}

/// `prod (1 - x_i)` chain of the blow-up family: states `s0..s_n`, a sink,
/// `s_{i-1} -> s_i` with `1 - x_i` and `s_{i-1} -> sink` with `x_i`.
pub fn blowup_chain(n: usize) -> Pmc {
    let mut names: Vec<String> = (0..=n).map(|i| format!("s{i}")).collect();
    names.push("sink".into());
    let sink = n + 1;
    let params: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut trans = Vec::new();
    for i in 1..=n {
        let x = Poly::var(i - 1);
        trans.push((i - 1, i, &Poly::one() - &x));
        trans.push((i - 1, sink, x));
    }
    trans.push((n, n, Poly::one()));
    trans.push((sink, sink, Poly::one()));
    Pmc::new(names, params, 0, trans, [n]).expect("well-formed chain")
}
