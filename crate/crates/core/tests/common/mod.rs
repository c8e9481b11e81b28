//! Random models shared by the integration suites.
#![allow(dead_code)]

use std::fmt::Write;

use pmc_synth::mccheck::Mc;
use pmc_synth::model::{Pmc, Region};
use pmc_synth::polyalg::Valuation;
use pmc_synth::pomdp::Pomdp;
use pmc_synth::scalar::ratio;
use pmc_synth::Rational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn model(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

pub fn load(name: &str) -> Pmc {
    Pmc::parse(&model(name)).unwrap()
}

/// Rational strictly between 0 and 1 with a small denominator.
pub fn open_unit(rng: &mut impl Rng) -> Rational {
    let d = rng.gen_range(2..=24);
    ratio(rng.gen_range(1..d), d)
}

/// Positive weights summing to one.
pub fn distribution(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    weights.iter().map(|&w| ratio(w, total)).collect()
}

/// Random multilinear pMC text with 3 to `max_states` states and 1 or 2
/// parameters. Every transition function is positive on the open unit box,
/// so any box inside it is graph preserving.
pub fn random_pmc_text(rng: &mut impl Rng, max_states: usize) -> String {
    let n = rng.gen_range(3..=max_states.max(3));
    let params: Vec<&str> = if rng.gen_bool(0.5) {
        vec!["x"]
    } else {
        vec!["x", "y"]
    };
    let mut text = format!("pmc\nparams {}\n", params.join(" "));
    // s{n-2} is the target and s{n-1} a sink; both absorbing
    for s in 0..n {
        let tag = match s {
            0 => " init",
            _ if s == n - 2 => " target",
            _ => "",
        };
        writeln!(text, "state s{s}{tag}").unwrap();
    }
    for s in 0..n {
        if s >= n - 2 {
            writeln!(text, "trans s{s} s{s} : 1").unwrap();
            continue;
        }
        let mut succ: Vec<usize> = (0..n).collect();
        succ.shuffle(rng);
        let p = params[rng.gen_range(0..params.len())];
        let q = params[rng.gen_range(0..params.len())];
        let c = rational_text(&open_unit(rng));
        let funcs: Vec<String> = match rng.gen_range(0..6) {
            0 => vec![p.into(), format!("1 - {p}")],
            1 => vec![format!("{c}*{p}"), format!("1 - {c}*{p}")],
            2 if p != q => vec![
                format!("{p}*{q}"),
                format!("{p} - {p}*{q}"),
                format!("1 - {p}"),
            ],
            3 => vec![format!("1/2*{p}"), "1/2".into(), format!("1/2 - 1/2*{p}")],
            4 => vec!["1".into()],
            _ => {
                let d = distribution(rng, 2);
                d.iter().map(rational_text).collect()
            }
        };
        for (t, f) in succ.iter().zip(&funcs) {
            writeln!(text, "trans s{s} s{t} : {f}").unwrap();
        }
    }
    text
}

pub fn random_pmc(rng: &mut impl Rng, max_states: usize) -> Pmc {
    let text = random_pmc_text(rng, max_states);
    Pmc::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

pub fn rational_text(r: &Rational) -> String {
    pmc_synth::scalar::format_rational(r)
}

/// Valuation strictly inside the unit box.
pub fn random_valuation(rng: &mut impl Rng, dim: usize) -> Valuation<Rational> {
    Valuation::new((0..dim).map(|_| open_unit(rng)).collect())
}

/// Box strictly inside the unit box.
pub fn random_box(rng: &mut impl Rng, dim: usize) -> Region {
    let bounds = (0..dim)
        .map(|_| {
            let a = open_unit(rng);
            let b = open_unit(rng);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    Region::new(bounds).unwrap()
}

/// Uniform-ish rational point of `region` on a grid of 1/1000 steps.
pub fn random_point(rng: &mut impl Rng, region: &Region) -> Valuation<Rational> {
    Valuation::new(
        region
            .bounds()
            .iter()
            .map(|(lo, hi)| lo + (hi - lo) * ratio(rng.gen_range(0..=1000), 1000))
            .collect(),
    )
}

/// Random POMDP text with at most `max_states` states over observations
/// `o0..o2`; states sharing an observation share their action names.
pub fn random_pomdp_text(rng: &mut impl Rng, max_states: usize) -> String {
    let n = rng.gen_range(2..=max_states.max(2));
    let num_obs = rng.gen_range(1..=3);
    let actions_of: Vec<usize> = (0..num_obs).map(|_| rng.gen_range(1..=3)).collect();
    let mut text = String::from("pomdp\n");
    for s in 0..n {
        let tag = match s {
            0 => " init",
            _ if s == n - 1 => " target",
            _ => "",
        };
        writeln!(text, "state s{s}{tag}").unwrap();
    }
    let obs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..num_obs)).collect();
    for (s, o) in obs.iter().enumerate() {
        writeln!(text, "obs s{s} : o{o}").unwrap();
    }
    for (s, &o) in obs.iter().enumerate() {
        for a in 0..actions_of[o] {
            let k = rng.gen_range(1..=2);
            let mut succ: Vec<usize> = (0..n).collect();
            succ.shuffle(rng);
            let probs = distribution(rng, k);
            let dist: Vec<String> = succ
                .iter()
                .zip(&probs)
                .map(|(t, p)| format!("s{t} {}", rational_text(p)))
                .collect();
            writeln!(text, "act s{s} a{a} : {}", dist.join(", ")).unwrap();
        }
    }
    text
}

pub fn random_pomdp(rng: &mut impl Rng, max_states: usize) -> Pomdp {
    let text = random_pomdp_text(rng, max_states);
    Pomdp::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

/// Valuation with each simplex group drawn from a random distribution and
/// any other parameter inside the unit interval.
pub fn random_simplex_valuation(
    rng: &mut impl Rng,
    pmc: &Pmc,
    groups: &[Vec<usize>],
) -> Valuation<Rational> {
    let mut values: Vec<Rational> = (0..pmc.num_params()).map(|_| open_unit(rng)).collect();
    for g in groups {
        for (&z, w) in g.iter().zip(distribution(rng, g.len())) {
            values[z] = w;
        }
    }
    Valuation::new(values)
}

/// MC induced on the POMDP by the memoryless randomized policy that plays
/// action `a` under observation `o` with weight `v(o_a)`.
pub fn randomized_policy_mc(
    pomdp: &pmc_synth::pomdp::Pomdp,
    pmc: &Pmc,
    v: &Valuation<Rational>,
) -> Mc<Rational> {
    let mdp = &pomdp.mdp;
    let rows = (0..mdp.num_states())
        .map(|s| {
            let actions = mdp.actions(s);
            let mut row: Vec<(usize, Rational)> = Vec::new();
            for a in actions {
                let weight = match pmc.param_index(&format!("{}_{}", pomdp.observations[s], a.name))
                {
                    Some(z) => v.values()[z].clone(),
                    None => ratio(1, 1),
                };
                for (t, p) in &a.distribution {
                    match row.iter_mut().find(|(u, _)| u == t) {
                        Some((_, q)) => *q += &weight * p,
                        None => row.push((*t, &weight * p)),
                    }
                }
            }
            row
        })
        .collect();
    Mc::new(mdp.initial(), rows, mdp.targets().iter().copied()).unwrap()
}
