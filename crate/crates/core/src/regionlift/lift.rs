use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::mccheck::{reach_prob_at, Action, Direction, Mdp};
use crate::model::{Pmc, Region, Spec, Verdict};
use crate::scalar::format_rational;
use crate::Rational;

/// Largest number of distinct parameters a single row may mention.
pub const DEFAULT_ACTION_CAP: usize = 10;

/// MDP over-approximating a pMC on a region: each state has one action per
/// vertex of the sub-box spanned by the parameters of its row.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedMdp {
    pub mdp: Mdp<Rational>,
    /// Parameters of each row, in ascending order. Bit `i` of an action
    /// index selects the upper bound of `row_params[s][i]`.
    pub row_params: Vec<Vec<usize>>,
}

impl LiftedMdp {
    /// Parameter values substituted by action `a` of state `s`.
    pub fn vertex(&self, region: &Region, s: usize, a: usize) -> Vec<(usize, Rational)> {
        self.row_params[s]
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let v = if a >> i & 1 == 1 {
                    region.upper(x)
                } else {
                    region.lower(x)
                };
                (x, v.clone())
            })
            .collect()
    }
}

pub fn lift(pmc: &Pmc, region: &Region) -> Result<LiftedMdp> {
    lift_with_cap(pmc, region, DEFAULT_ACTION_CAP)
}

pub fn lift_with_cap(pmc: &Pmc, region: &Region, cap: usize) -> Result<LiftedMdp> {
    if !pmc.is_graph_preserving(region)? {
        return Err(Error::NotGraphPreserving(
            region.display(pmc.params()).to_string(),
        ));
    }
    let mut actions = Vec::with_capacity(pmc.num_states());
    let mut row_params = Vec::with_capacity(pmc.num_states());
    for s in 0..pmc.num_states() {
        let params: Vec<usize> = pmc.row_params(s).into_iter().collect();
        if params.len() > cap {
            return Err(Error::UnsupportedModel(format!(
                "state `{}` mentions {} parameters, more than the cap of {cap}",
                pmc.state_name(s),
                params.len()
            )));
        }
        let mut state_actions = Vec::with_capacity(1 << params.len());
        let mut values: Vec<Option<&Rational>> = vec![None; pmc.num_params()];
        for mask in 0..1usize << params.len() {
            let mut name = Vec::new();
            for (i, &x) in params.iter().enumerate() {
                let upper = mask >> i & 1 == 1;
                values[x] = Some(if upper {
                    region.upper(x)
                } else {
                    region.lower(x)
                });
                name.push(format!(
                    "{}={}",
                    pmc.params()[x],
                    if upper { "hi" } else { "lo" }
                ));
            }
            let distribution = pmc
                .row(s)
                .iter()
                .map(|(t, f)| Ok((*t, f.evaluate_with(|x| values[x])?)))
                .collect::<Result<Vec<_>>>()?;
            let name = if name.is_empty() {
                "const".to_string()
            } else {
                name.join(",")
            };
            state_actions.push(Action { name, distribution });
        }
        actions.push(state_actions);
        row_params.push(params);
    }
    let mdp = Mdp::new(
        pmc.state_names().to_vec(),
        pmc.initial(),
        actions,
        pmc.targets().iter().copied(),
    )?;
    Ok(LiftedMdp { mdp, row_params })
}

/// Minimal and maximal reachability probability of the lifted MDP.
pub fn region_bounds(pmc: &Pmc, region: &Region) -> Result<(Rational, Rational)> {
    let lifted = lift(pmc, region)?;
    let min = lifted.mdp.extremal_reach(Direction::Min).value;
    let max = lifted.mdp.extremal_reach(Direction::Max).value;
    Ok((min, max))
}

impl LiftedMdp {
    /// True when every instantiation in the lifted region satisfies
    /// `spec`, judged by the worst-case extremal value.
    pub fn satisfies(&self, spec: &Spec) -> bool {
        let direction = if spec.comparison.is_upper_bound() {
            Direction::Max
        } else {
            Direction::Min
        };
        spec.holds(&self.mdp.extremal_reach(direction).value)
    }
}

/// Checks only whether the region has verdict `side`; `Inconclusive`
/// always fails.
pub fn verify_side(pmc: &Pmc, region: &Region, spec: &Spec, side: Verdict) -> Result<bool> {
    let lifted = lift(pmc, region)?;
    Ok(match side {
        Verdict::Accepting => lifted.satisfies(spec),
        Verdict::Rejecting => lifted.satisfies(&spec.negate()),
        Verdict::Inconclusive => false,
    })
}

pub fn verify_region(pmc: &Pmc, region: &Region, spec: &Spec) -> Result<Verdict> {
    let lifted = lift(pmc, region)?;
    Ok(if lifted.satisfies(spec) {
        Verdict::Accepting
    } else if lifted.satisfies(&spec.negate()) {
        Verdict::Rejecting
    } else {
        Verdict::Inconclusive
    })
}

/// Verdict together with both bounds, as reported by the CLI.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionReport {
    pub verdict: Verdict,
    pub min: Rational,
    pub max: Rational,
}

impl RegionReport {
    pub fn compute(pmc: &Pmc, region: &Region, spec: &Spec) -> Result<Self> {
        let (min, max) = region_bounds(pmc, region)?;
        let upper = spec.comparison.is_upper_bound();
        let (worst, best) = if upper { (&max, &min) } else { (&min, &max) };
        let verdict = if spec.holds(worst) {
            Verdict::Accepting
        } else if !spec.holds(best) {
            Verdict::Rejecting
        } else {
            Verdict::Inconclusive
        };
        Ok(RegionReport { verdict, min, max })
    }
}

/// Region checks spent by [`RegionReport::refine`] before giving up.
pub const DEFAULT_REFINE_BUDGET: usize = 1000;

impl RegionReport {
    /// Like [`RegionReport::compute`], but an inconclusive region is bisected
    /// until every piece carries the verdict suggested by the region's center,
    /// a piece's center contradicts it, or `budget` lifted checks are spent.
    /// Bounds of a conclusive answer are the hull of the pieces' bounds.
    pub fn refine(pmc: &Pmc, region: &Region, spec: &Spec, budget: usize) -> Result<Self> {
        let root = Self::compute(pmc, region, spec)?;
        if root.verdict != Verdict::Inconclusive {
            return Ok(root);
        }
        let center_holds =
            |r: &Region| -> Result<bool> { Ok(spec.holds(&reach_prob_at(pmc, &r.center())?)) };
        let goal = center_holds(region)?;
        let side = if goal {
            Verdict::Accepting
        } else {
            Verdict::Rejecting
        };
        let (mut min, mut max) = (root.max.clone(), root.min.clone());
        let mut pending = VecDeque::from([(region.clone(), root.clone())]);
        let mut checks = 1;
        while let Some((r, piece)) = pending.pop_front() {
            if piece.verdict == side {
                min = min.min(piece.min);
                max = max.max(piece.max);
                continue;
            }
            if piece.verdict != Verdict::Inconclusive
                || checks + 2 > budget
                || center_holds(&r)? != goal
            {
                return Ok(root);
            }
            let (lo, hi) = r.bisect(r.widest_dimension());
            for half in [lo, hi] {
                let report = Self::compute(pmc, &half, spec)?;
                pending.push_back((half, report));
            }
            checks += 2;
        }
        Ok(RegionReport {
            verdict: side,
            min,
            max,
        })
    }
}

impl std::fmt::Display for RegionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (bounds [{}, {}])",
            self.verdict,
            format_rational(&self.min),
            format_rational(&self.max)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_region;
    use crate::scalar::ratio;

    const PING_PONG: &str =
        "pmc\nparams x y\nstate s0 init\nstate s1\nstate s2\nstate s3 target\nstate s4\n\
        trans s0 s1 : x\ntrans s0 s2 : 1 - x\ntrans s1 s2 : y\ntrans s1 s3 : 1 - y\n\
        trans s2 s1 : y\ntrans s2 s4 : 1 - y\ntrans s3 s3 : 1\ntrans s4 s4 : 1\n";

    fn ping_pong() -> (Pmc, Region) {
        let pmc = Pmc::parse(PING_PONG).unwrap();
        let r = parse_region("x in [1/10, 4/5]; y in [2/5, 7/10]", pmc.params()).unwrap();
        (pmc, r)
    }

    #[test]
    fn ping_pong_bounds_and_policy() {
        let (pmc, r) = ping_pong();
        let lifted = lift(&pmc, &r).unwrap();
        assert_eq!(lifted.mdp.actions(0).len(), 2);
        assert_eq!(lifted.mdp.actions(3).len(), 1);
        let max = lifted.mdp.extremal_reach(Direction::Max);
        assert_eq!(max.value, ratio(47, 60));
        // upper bound at s0 and s2, lower bound at s1
        assert_eq!(&max.policy[..3], &[1, 0, 1]);
        assert_eq!(
            lifted.mdp.extremal_reach(Direction::Min).value,
            ratio(23, 120)
        );
    }

    #[test]
    fn ping_pong_verdicts() {
        let (pmc, r) = ping_pong();
        let le = |t: &str| Spec::parse(&format!("reach <= {t}")).unwrap();
        assert_eq!(
            verify_region(&pmc, &r, &le("4/5")).unwrap(),
            Verdict::Accepting
        );
        assert_eq!(
            verify_region(&pmc, &r, &le("1/4")).unwrap(),
            Verdict::Inconclusive
        );
        assert_eq!(
            verify_region(&pmc, &r, &le("1/10")).unwrap(),
            Verdict::Rejecting
        );
        let report = RegionReport::compute(&pmc, &r, &le("4/5")).unwrap();
        assert_eq!(report.to_string(), "ACCEPTING (bounds [23/120, 47/60])");
    }

    #[test]
    fn point_region_actions_coincide() {
        let (pmc, _) = ping_pong();
        let r = parse_region("x in [1/2, 1/2]; y in [1/3, 1/3]", pmc.params()).unwrap();
        let lifted = lift(&pmc, &r).unwrap();
        let acts = lifted.mdp.actions(0);
        assert_eq!(acts[0].distribution, acts[1].distribution);
    }

    #[test]
    fn boundary_regions_are_refused() {
        let (pmc, _) = ping_pong();
        let r = parse_region("x in [0, 1/2]; y in [1/3, 1/2]", pmc.params()).unwrap();
        assert!(matches!(lift(&pmc, &r), Err(Error::NotGraphPreserving(_))));
    }

    #[test]
    fn refinement_settles_straddling_regions() {
        // on this box the exact function (x + y - xy)/(1 + y) ranges over [23/70, 22/35]
        let (pmc, r) = ping_pong();
        let le = |t: &str| Spec::parse(&format!("reach <= {t}")).unwrap();
        for (threshold, verdict) in [
            ("1/4", Verdict::Rejecting),
            ("13/20", Verdict::Accepting),
            ("1/2", Verdict::Inconclusive),
        ] {
            let coarse = RegionReport::compute(&pmc, &r, &le(threshold)).unwrap();
            assert_eq!(coarse.verdict, Verdict::Inconclusive);
            let refined = RegionReport::refine(&pmc, &r, &le(threshold), 2000).unwrap();
            assert_eq!(refined.verdict, verdict, "threshold {threshold}");
            assert!(refined.min >= coarse.min && refined.max <= coarse.max);
            assert!(refined.min <= ratio(23, 70) && refined.max >= ratio(22, 35));
        }
    }

    #[test]
    fn refinement_without_budget_keeps_coarse_answer() {
        let (pmc, r) = ping_pong();
        let spec = Spec::parse("reach <= 1/2").unwrap();
        let coarse = RegionReport::compute(&pmc, &r, &spec).unwrap();
        assert_eq!(RegionReport::refine(&pmc, &r, &spec, 1).unwrap(), coarse);
    }
}
