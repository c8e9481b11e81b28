use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mccheck::instantiate;
use crate::polyalg::Valuation;
use crate::scalar::{f64_to_rational, Scalar};
use crate::Rational;

use super::{Problem, SearchStats, Witness, ANCHOR_DENOMINATOR};

/// Draws `n` uniform valuations and returns the first that satisfies the
/// spec under exact model checking.
pub fn sample_search(problem: &Problem<'_>, n: usize, seed: u64) -> Result<Witness> {
    problem.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SearchStats::default();
    for _ in 0..n {
        let Some(v) = problem.random_point(&mut rng) else {
            break;
        };
        stats.checks += 1;
        if let Some(p) = problem.probability(&v) {
            if problem.spec.holds(&p) {
                return Ok(Witness {
                    valuation: v,
                    probability: p,
                    stats,
                });
            }
        }
    }
    Err(Error::NotFound)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsoConfig {
    pub particles: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            particles: 20,
            iterations: 100,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
        }
    }
}

/// Global-best particle swarm over the region in double precision. The
/// swarm minimizes the probability for upper-bound specs and maximizes it
/// otherwise; every new global best is re-checked exactly and only an
/// exact success is returned.
pub fn pso_search(problem: &Problem<'_>, config: &PsoConfig, seed: u64) -> Result<Witness> {
    problem.validate()?;
    let dim = problem.region.dim();
    let lo: Vec<f64> = (0..dim).map(|i| problem.region.lower(i).approx()).collect();
    let hi: Vec<f64> = (0..dim).map(|i| problem.region.upper(i).approx()).collect();
    let minimizing = problem.spec.comparison.is_upper_bound();
    let project = |x: &mut Vec<f64>| {
        for i in 0..dim {
            x[i] = x[i].clamp(lo[i], hi[i]);
        }
        for group in problem.simplex {
            let sum: f64 = group.iter().map(|&g| x[g]).sum();
            if sum > 0.0 {
                group.iter().for_each(|&g| x[g] /= sum);
            }
        }
    };
    let score = |x: &[f64]| -> f64 {
        let v = Valuation::new(x.to_vec());
        match instantiate(problem.pmc, &v) {
            Ok(mc) => {
                let p = mc.reach_prob();
                if minimizing {
                    p
                } else {
                    -p
                }
            }
            Err(_) => f64::INFINITY,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SearchStats::default();
    let mut pos: Vec<Vec<f64>> = Vec::with_capacity(config.particles);
    let mut vel: Vec<Vec<f64>> = Vec::with_capacity(config.particles);
    for _ in 0..config.particles {
        let mut x: Vec<f64> = (0..dim).map(|i| rng.gen_range(lo[i]..=hi[i])).collect();
        project(&mut x);
        pos.push(x);
        vel.push(
            (0..dim)
                .map(|i| rng.gen_range(-1.0..=1.0) * 0.1 * (hi[i] - lo[i]))
                .collect(),
        );
    }
    let mut best_pos = pos.clone();
    let mut best_val: Vec<f64> = pos.iter().map(|x| score(x)).collect();
    let mut global = 0;
    for i in 1..best_val.len() {
        if best_val[i] < best_val[global] {
            global = i;
        }
    }
    let mut last_checked: Option<Vec<f64>> = None;
    for _ in 0..=config.iterations {
        if config.particles == 0 {
            break;
        }
        let candidate = best_pos[global].clone();
        if last_checked.as_ref() != Some(&candidate) {
            let exact: Vec<Rational> = candidate
                .iter()
                .map(|&x| f64_to_rational(x, ANCHOR_DENOMINATOR))
                .collect();
            let v = problem.round(&exact);
            stats.checks += 1;
            if let Some(p) = problem.probability(&v) {
                if problem.spec.holds(&p) {
                    return Ok(Witness {
                        valuation: v,
                        probability: p,
                        stats,
                    });
                }
            }
            last_checked = Some(candidate);
        }
        stats.iterations += 1;
        for k in 0..config.particles {
            for i in 0..dim {
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                vel[k][i] = config.inertia * vel[k][i]
                    + config.cognitive * r1 * (best_pos[k][i] - pos[k][i])
                    + config.social * r2 * (best_pos[global][i] - pos[k][i]);
                pos[k][i] += vel[k][i];
            }
            project(&mut pos[k]);
            let s = score(&pos[k]);
            if s < best_val[k] {
                best_val[k] = s;
                best_pos[k] = pos[k].clone();
                if s < best_val[global] {
                    global = k;
                }
            }
        }
    }
    Err(Error::NotFound)
}
