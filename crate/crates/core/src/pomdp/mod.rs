//! POMDPs, their policy pMCs, and finite-state controller unfolding.
//!
//! ```text
//! pomdp
//! state s0 init
//! state s2 target
//! obs s0 : blue
//! obs s2 : white
//! act s0 a1 : s2 1/2, s0 1/2
//! act s2 a1 : s2 1
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::mccheck::{Action, Mdp};
use crate::model::{
    expect_header, parse_pmc_parts, significant_lines, write_pmc, Line, Pmc, StateTable,
};
use crate::polyalg::Polynomial;
use crate::scalar::{format_rational, parse_rational};
use crate::{Poly, Rational};

/// An MDP whose states carry observations. States sharing an observation
/// enable the same action names.
#[derive(Clone, Debug, PartialEq)]
pub struct Pomdp {
    pub mdp: Mdp<Rational>,
    pub observations: Vec<String>,
}

impl Pomdp {
    pub fn new(mdp: Mdp<Rational>, observations: Vec<String>) -> Result<Self> {
        if observations.len() != mdp.num_states() {
            return Err(Error::Model("one observation per state required".into()));
        }
        let mut seen: HashMap<&str, (usize, Vec<&str>)> = HashMap::new();
        for (s, o) in observations.iter().enumerate() {
            let mut names: Vec<&str> = mdp.actions(s).iter().map(|a| a.name.as_str()).collect();
            names.sort_unstable();
            if names.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Model(format!(
                    "state `{}` has two actions with the same name",
                    mdp.state_names()[s]
                )));
            }
            match seen.get(o.as_str()) {
                Some((first, expected)) if *expected != names => {
                    return Err(Error::Model(format!(
                        "states `{}` and `{}` share observation `{o}` but enable different actions",
                        mdp.state_names()[*first],
                        mdp.state_names()[s]
                    )));
                }
                Some(_) => {}
                None => {
                    seen.insert(o, (s, names));
                }
            }
        }
        Ok(Pomdp { mdp, observations })
    }

    /// Observations in order of first occurrence, each with the action
    /// names of its first state.
    pub fn observation_classes(&self) -> Vec<(String, Vec<String>)> {
        let mut out: Vec<(String, Vec<String>)> = Vec::new();
        for (s, o) in self.observations.iter().enumerate() {
            if !out.iter().any(|(p, _)| p == o) {
                let acts = self.mdp.actions(s).iter().map(|a| a.name.clone()).collect();
                out.push((o.clone(), acts));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Pomdp> {
        parse_pomdp(text)
    }

    pub fn to_text(&self) -> String {
        write_pomdp(self)
    }
}

fn parse_distribution(
    line: &Line<'_>,
    states: &StateTable,
    text: &str,
    column: usize,
) -> Result<Vec<(usize, Rational)>> {
    let mut out = Vec::new();
    let mut offset = column;
    for piece in text.split(',') {
        let words: Vec<&str> = piece.split_whitespace().collect();
        if words.len() != 2 {
            return Err(line.error(offset, "expected `STATE PROB` pairs separated by commas"));
        }
        let t = states.lookup(line, words[0])?;
        let p = parse_rational(words[1])
            .ok_or_else(|| line.error(offset, format!("invalid probability `{}`", words[1])))?;
        out.push((t, p));
        offset += piece.len() + 1;
    }
    Ok(out)
}

pub fn parse_pomdp(text: &str) -> Result<Pomdp> {
    let mut lines = significant_lines(text);
    expect_header(&mut lines, "pomdp")?;
    let mut states = StateTable::default();
    let mut obs: BTreeMap<usize, String> = BTreeMap::new();
    let mut actions: BTreeMap<usize, Vec<Action<Rational>>> = BTreeMap::new();
    for line in lines {
        let words = line.words();
        let colon = line.text.find(':');
        match words[0].1 {
            "state" => states.declare(&line, &words)?,
            "obs" => {
                let colon =
                    colon.ok_or_else(|| line.error(words[0].0, "expected `obs STATE : NAME`"))?;
                let head: Vec<&str> = line.text[..colon].split_whitespace().collect();
                let name = line.text[colon + 1..].trim();
                if head.len() != 2 || name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(line.error(words[0].0, "expected `obs STATE : NAME`"));
                }
                let s = states.lookup(&line, head[1])?;
                if obs.insert(s, name.to_string()).is_some() {
                    return Err(Error::Model(format!(
                        "line {}: second observation for `{}`",
                        line.number, head[1]
                    )));
                }
            }
            "act" => {
                let colon = colon
                    .ok_or_else(|| line.error(words[0].0, "expected `act STATE ACTION : DIST`"))?;
                let head: Vec<&str> = line.text[..colon].split_whitespace().collect();
                if head.len() != 3 {
                    return Err(line.error(words[0].0, "expected `act STATE ACTION : DIST`"));
                }
                let s = states.lookup(&line, head[1])?;
                let distribution =
                    parse_distribution(&line, &states, &line.text[colon + 1..], colon + 2)?;
                let list = actions.entry(s).or_default();
                if list.iter().any(|a| a.name == head[2]) {
                    return Err(Error::Model(format!(
                        "line {}: action `{}` of `{}` defined twice",
                        line.number, head[2], head[1]
                    )));
                }
                list.push(Action {
                    name: head[2].to_string(),
                    distribution,
                });
            }
            other => return Err(line.error(words[0].0, format!("unknown directive `{other}`"))),
        }
    }
    let initial = states.finish()?;
    let n = states.names.len();
    let mut observations = Vec::with_capacity(n);
    let mut action_lists = Vec::with_capacity(n);
    for s in 0..n {
        observations.push(obs.remove(&s).ok_or_else(|| {
            Error::Model(format!("state `{}` has no observation", states.names[s]))
        })?);
        action_lists.push(actions.remove(&s).unwrap_or_default());
    }
    let mdp = Mdp::new(states.names, initial, action_lists, states.targets)?;
    Pomdp::new(mdp, observations)
}

pub fn write_pomdp(pomdp: &Pomdp) -> String {
    let mdp = &pomdp.mdp;
    let mut out = String::from("pomdp\n");
    for s in 0..mdp.num_states() {
        let _ = write!(out, "state {}", mdp.state_names()[s]);
        if s == mdp.initial() {
            out.push_str(" init");
        }
        if mdp.targets().contains(&s) {
            out.push_str(" target");
        }
        out.push('\n');
    }
    for s in 0..mdp.num_states() {
        let _ = writeln!(
            out,
            "obs {} : {}",
            mdp.state_names()[s],
            pomdp.observations[s]
        );
    }
    for s in 0..mdp.num_states() {
        for a in mdp.actions(s) {
            let dist: Vec<String> = a
                .distribution
                .iter()
                .map(|(t, p)| format!("{} {}", mdp.state_names()[*t], format_rational(p)))
                .collect();
            let _ = writeln!(
                out,
                "act {} {} : {}",
                mdp.state_names()[s],
                a.name,
                dist.join(", ")
            );
        }
    }
    out
}

/// A pMC whose parameters are action probabilities, grouped into simplex
/// constraints (one group per observation with several actions).
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyPmc {
    pub pmc: Pmc,
    pub simplex: Vec<Vec<usize>>,
}

impl PolicyPmc {
    pub fn parse(text: &str) -> Result<PolicyPmc> {
        let (pmc, simplex) = parse_pmc_parts(text)?;
        Ok(PolicyPmc { pmc, simplex })
    }

    pub fn to_text(&self) -> String {
        write_pmc(&self.pmc, &self.simplex)
    }
}

/// Translates a POMDP under randomized memoryless observation-based
/// policies into a pMC. Observation `o` with actions `a_1..a_m` (m ≥ 2)
/// gets parameters `o_a1..o_am` summing to one, and
/// `P(s,t) = Σ_i o_ai · P(s, a_i)(t)`.
pub fn pomdp_to_pmc(pomdp: &Pomdp) -> Result<PolicyPmc> {
    let mdp = &pomdp.mdp;
    let mut params = Vec::new();
    let mut simplex = Vec::new();
    let mut param_of: HashMap<(String, String), usize> = HashMap::new();
    for (o, acts) in pomdp.observation_classes() {
        if acts.len() < 2 {
            continue;
        }
        let mut group = Vec::new();
        for a in acts {
            param_of.insert((o.clone(), a.clone()), params.len());
            group.push(params.len());
            params.push(format!("{o}_{a}"));
        }
        simplex.push(group);
    }
    let mut transitions = Vec::new();
    for s in 0..mdp.num_states() {
        let o = &pomdp.observations[s];
        for a in mdp.actions(s) {
            let weight = match param_of.get(&(o.clone(), a.name.clone())) {
                Some(&z) => Polynomial::var(z),
                None => Poly::one(),
            };
            for (t, p) in &a.distribution {
                transitions.push((s, *t, weight.scale(p)));
            }
        }
    }
    let pmc = Pmc::new_with_simplex(
        mdp.state_names().to_vec(),
        params,
        mdp.initial(),
        transitions,
        mdp.targets().iter().copied(),
        &simplex,
    )?;
    Ok(PolicyPmc { pmc, simplex })
}

/// Eliminates two-parameter simplex groups by substituting the second
/// parameter with one minus the first.
pub fn desimplex(policy: &PolicyPmc) -> Result<Pmc> {
    let pmc = &policy.pmc;
    let mut replacement: BTreeMap<usize, Poly> = BTreeMap::new();
    for group in &policy.simplex {
        match group.as_slice() {
            [only] => {
                replacement.insert(*only, Poly::one());
            }
            [first, second] => {
                replacement.insert(*second, &Poly::one() - &Polynomial::var(*first));
            }
            _ => {
                return Err(Error::UnsupportedModel(format!(
                    "simplex group of {} parameters cannot be replaced by a box",
                    group.len()
                )))
            }
        }
    }
    let kept: Vec<usize> = (0..pmc.num_params())
        .filter(|x| !replacement.contains_key(x))
        .collect();
    let mut new_index = vec![usize::MAX; pmc.num_params()];
    for (i, &x) in kept.iter().enumerate() {
        new_index[x] = i;
    }
    let params: Vec<String> = kept.iter().map(|&x| pmc.params()[x].clone()).collect();
    let transitions: Vec<(usize, usize, Poly)> = pmc
        .transitions()
        .map(|(s, t, f)| {
            let g = replacement
                .iter()
                .fold(f.clone(), |acc, (x, r)| acc.substitute(*x, r));
            (s, t, g.rename(|x| new_index[x]))
        })
        .collect();
    Pmc::new(
        pmc.state_names().to_vec(),
        params,
        pmc.initial(),
        transitions,
        pmc.targets().iter().copied(),
    )
}

/// Product of the POMDP with a `k`-node finite-state controller (Moore
/// style). State `(s, m)` is named `s_m` and observes `o_m`; action
/// `a_n` plays `a` and moves the controller to node `n`.
pub fn unfold_fsc(pomdp: &Pomdp, k: usize) -> Result<Pomdp> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "controller needs at least one node".into(),
        ));
    }
    let mdp = &pomdp.mdp;
    let n = mdp.num_states();
    let id = |s: usize, m: usize| s * k + m;
    let mut names = Vec::with_capacity(n * k);
    let mut observations = Vec::with_capacity(n * k);
    let mut actions = Vec::with_capacity(n * k);
    for s in 0..n {
        for m in 0..k {
            names.push(format!("{}_{m}", mdp.state_names()[s]));
            observations.push(format!("{}_{m}", pomdp.observations[s]));
            let mut acts = Vec::new();
            for a in mdp.actions(s) {
                for next in 0..k {
                    acts.push(Action {
                        name: format!("{}_{next}", a.name),
                        distribution: a
                            .distribution
                            .iter()
                            .map(|(t, p)| (id(*t, next), p.clone()))
                            .collect(),
                    });
                }
            }
            actions.push(acts);
        }
    }
    let targets: Vec<usize> = mdp
        .targets()
        .iter()
        .flat_map(|&t| (0..k).map(move |m| id(t, m)))
        .collect();
    let unfolded = Mdp::new(names, id(mdp.initial(), 0), actions, targets)?;
    Pomdp::new(unfolded, observations)
}
