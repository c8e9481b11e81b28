use std::collections::BTreeMap;

use crate::model::Pmc;
use crate::Poly;

/// A pMC in which every parameter occurrence is local to one state.
#[derive(Clone, Debug, PartialEq)]
pub struct RelaxedPmc {
    pub pmc: Pmc,
    /// For each fresh parameter, the original parameter and the state
    /// whose row it lives in.
    pub origin: Vec<(usize, usize)>,
}

/// Replaces each parameter `x` in the row of state `s` by a fresh copy
/// `x_s`. Copies are numbered by state, then by original parameter.
pub fn relax(pmc: &Pmc) -> RelaxedPmc {
    let mut copies: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut origin = Vec::new();
    let mut names = Vec::new();
    for s in 0..pmc.num_states() {
        for x in pmc.row_params(s) {
            copies.insert((s, x), origin.len());
            origin.push((x, s));
            names.push(format!("{}_{}", pmc.params()[x], pmc.state_name(s)));
        }
    }
    let relaxed = pmc.map_functions(names, |s, _, f| f.rename(|x| copies[&(s, x)]));
    RelaxedPmc {
        pmc: relaxed,
        origin,
    }
}

impl RelaxedPmc {
    pub fn num_fresh(&self) -> usize {
        self.origin.len()
    }

    /// Substitutes every copy by its original parameter.
    pub fn unrelax(&self, params: Vec<String>) -> Pmc {
        let origin = &self.origin;
        self.pmc
            .map_functions(params, |_, _, f: &Poly| f.rename(|c| origin[c].0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PING_PONG: &str =
        "pmc\nparams x y\nstate s0 init\nstate s1\nstate s2\nstate s3 target\nstate s4\n\
        trans s0 s1 : x\ntrans s0 s2 : 1 - x\ntrans s1 s2 : y\ntrans s1 s3 : 1 - y\n\
        trans s2 s1 : y\ntrans s2 s4 : 1 - y\ntrans s3 s3 : 1\ntrans s4 s4 : 1\n";

    #[test]
    fn ping_pong_relaxation_has_three_copies() {
        let pmc = Pmc::parse(PING_PONG).unwrap();
        let r = relax(&pmc);
        assert_eq!(r.pmc.params(), ["x_s0", "y_s1", "y_s2"]);
        assert_eq!(r.origin, vec![(0, 0), (1, 1), (1, 2)]);
        assert_eq!(r.unrelax(pmc.params().to_vec()), pmc);
    }

    #[test]
    fn each_copy_lives_in_one_row() {
        let pmc = Pmc::parse(PING_PONG).unwrap();
        let r = relax(&pmc);
        for (c, &(_, s)) in r.origin.iter().enumerate() {
            for t in 0..r.pmc.num_states() {
                assert_eq!(r.pmc.row_params(t).contains(&c), t == s);
            }
        }
    }
}
