use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mccheck::instantiate;
use crate::polyalg::Valuation;
use crate::scalar::{ratio, round_to_denominator};
use crate::Rational;

use super::lp::{solve_lp, LpOutcome};
use super::qcqp::{linearize, QcqpProblem};
use super::{Problem, SearchStats, Witness, ANCHOR_DENOMINATOR};

#[derive(Clone, Debug, PartialEq)]
pub struct ScpConfig {
    /// Penalty weight.
    pub tau: Rational,
    /// Initial trust radius.
    pub delta0: Rational,
    /// Contraction factor in (0, 1).
    pub gamma: Rational,
    /// Restart once the radius drops below this.
    pub omega: Rational,
    pub max_iters: usize,
    pub restarts: usize,
    /// Restarts run concurrently in groups of this size; the witness of the
    /// lowest-numbered successful restart wins either way.
    pub threads: usize,
}

impl Default for ScpConfig {
    fn default() -> Self {
        ScpConfig {
            tau: ratio(10_000, 1),
            delta0: ratio(1, 1),
            gamma: ratio(1, 2),
            omega: ratio(1, 10_000),
            max_iters: 100,
            restarts: 10,
            threads: 1,
        }
    }
}

impl ScpConfig {
    fn validate(&self) -> Result<()> {
        let gamma_ok = self.gamma > Rational::zero() && self.gamma < Rational::one();
        let omega_ok = self.omega > Rational::zero() && self.omega < self.delta0;
        if !gamma_ok || !omega_ok {
            return Err(Error::InvalidArgument(
                "SCP needs 0 < gamma < 1 and 0 < omega < delta0".into(),
            ));
        }
        Ok(())
    }
}

enum Attempt {
    Found(Valuation<Rational>, Rational),
    Exhausted,
}

struct Anchor {
    v: Valuation<Rational>,
    /// Model-checked probabilities of the QCQP states.
    p: Vec<Rational>,
    /// Probability of the initial state.
    init: Rational,
}

fn model_check(problem: &Problem<'_>, q: &QcqpProblem, v: Valuation<Rational>) -> Option<Anchor> {
    let probs = instantiate(problem.pmc, &v).ok()?.reach_probs();
    let init = probs[problem.pmc.initial()].clone();
    let p = q
        .states
        .iter()
        .map(|&s| {
            let r = round_to_denominator(&probs[s], ANCHOR_DENOMINATOR);
            if r.is_zero() {
                Rational::new(1.into(), ANCHOR_DENOMINATOR.into())
            } else {
                r
            }
        })
        .collect();
    Some(Anchor { v, p, init })
}

fn attempt(
    problem: &Problem<'_>,
    q: &QcqpProblem,
    config: &ScpConfig,
    start: Valuation<Rational>,
    stats: &mut SearchStats,
) -> Attempt {
    let minimizing = q.minimizing();
    // objective to minimize: p_init, or -p_init when maximizing
    let objective = |p: &Rational| if minimizing { p.clone() } else { -p.clone() };
    stats.checks += 1;
    let Some(mut anchor) = model_check(problem, q, start) else {
        return Attempt::Exhausted;
    };
    if problem.spec.holds(&anchor.init) {
        return Attempt::Found(anchor.v, anchor.init);
    }
    let mut beta = objective(&anchor.init);
    let mut delta = config.delta0.clone();
    for _ in 0..config.max_iters {
        if delta < config.omega {
            break;
        }
        stats.iterations += 1;
        let lp = match linearize(q, &anchor.v, &anchor.p, &delta, &config.tau) {
            Ok(lp) => lp,
            Err(_) => return Attempt::Exhausted,
        };
        let point = match solve_lp(&lp) {
            LpOutcome::Optimal { point, .. } => point,
            _ => {
                delta *= &config.gamma;
                continue;
            }
        };
        let v = problem.round(&point[..q.num_params]);
        stats.checks += 1;
        let Some(candidate) = model_check(problem, q, v) else {
            delta *= &config.gamma;
            continue;
        };
        if problem.spec.holds(&candidate.init) {
            return Attempt::Found(candidate.v, candidate.init);
        }
        let value = objective(&candidate.init);
        if value < beta {
            stats.accepted += 1;
            beta = value;
            anchor = candidate;
            delta /= &config.gamma;
        } else {
            delta *= &config.gamma;
        }
    }
    Attempt::Exhausted
}

fn start_point(problem: &Problem<'_>, seed: u64, restart: usize) -> Option<Valuation<Rational>> {
    if restart == 0 {
        return Some(problem.center());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    problem.random_point(&mut rng)
}

/// Sequential convex programming with integrated exact model checking.
///
/// Each restart starts from an anchor (the region center first, random
/// points afterwards), solves the linearized penalty LP inside the trust
/// region, model checks the LP's parameter point, and either accepts it
/// as the new anchor (expanding the radius by `1/γ`) or rejects it
/// (contracting by `γ`). A restart ends when the radius falls below `ω`
/// or after `max_iters` LPs. Only exactly verified valuations are
/// returned.
pub fn scp_feasibility(problem: &Problem<'_>, config: &ScpConfig, seed: u64) -> Result<Witness> {
    problem.validate()?;
    config.validate()?;
    if !problem.pmc.is_affine() {
        return Err(Error::UnsupportedModel(
            "SCP needs transition functions that are affine in the parameters".into(),
        ));
    }
    let q = match QcqpProblem::new(problem.pmc, problem.spec, problem.region, problem.simplex) {
        Ok(q) => q,
        Err(Error::InvalidArgument(_)) => {
            // the probability is constant; decide at the center
            let v = problem.center();
            let p = problem.probability(&v).ok_or(Error::NotFound)?;
            return if problem.spec.holds(&p) {
                Ok(Witness {
                    valuation: v,
                    probability: p,
                    stats: SearchStats {
                        checks: 1,
                        ..SearchStats::default()
                    },
                })
            } else {
                Err(Error::NotFound)
            };
        }
        Err(e) => return Err(e),
    };
    let restarts = config.restarts.max(1);
    let threads = config.threads.max(1);
    let mut total = SearchStats::default();
    let mut next = 0;
    while next < restarts {
        let group: Vec<usize> = (next..restarts.min(next + threads)).collect();
        next += group.len();
        let run = |r: usize| {
            let mut stats = SearchStats::default();
            let outcome = match start_point(problem, seed, r) {
                Some(start) => attempt(problem, &q, config, start, &mut stats),
                None => Attempt::Exhausted,
            };
            (outcome, stats)
        };
        let results: Vec<(Attempt, SearchStats)> = if group.len() == 1 {
            vec![run(group[0])]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = group.iter().map(|&r| scope.spawn(move || run(r))).collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("SCP restart panicked"))
                    .collect()
            })
        };
        for (outcome, stats) in results {
            total.checks += stats.checks;
            total.iterations += stats.iterations;
            total.accepted += stats.accepted;
            total.restarts += 1;
            if let Attempt::Found(valuation, probability) = outcome {
                return Ok(Witness {
                    valuation,
                    probability,
                    stats: total,
                });
            }
        }
    }
    Err(Error::NotFound)
}
