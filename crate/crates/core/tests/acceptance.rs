//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use pmc_synth::feasibility::{scp_feasibility, Problem, ScpConfig};
use pmc_synth::mccheck::{check_at, reach_prob_at};
use pmc_synth::model::{parse_region, Pmc, Region, Spec, Verdict};
use pmc_synth::partition::{partition, PartitionConfig};
use pmc_synth::polyalg::{parse_polynomial, RationalFunction, Valuation};
use pmc_synth::pomdp::{pomdp_to_pmc, Pomdp};
use pmc_synth::regionlift::{emit_etr, region_bounds, relax, RegionReport, DEFAULT_REFINE_BUDGET};
use pmc_synth::scalar::{format_rational, ratio};
use pmc_synth::solfun::{blowup_chain, solution_function, EliminationOrder};
use pmc_synth::{RatFunc, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{what} took {took:.2?}, limit {limit:?}"));
    }
    Ok(())
}

fn ratfunc(num: &str, den: &str, params: &[String]) -> RatFunc {
    RationalFunction::new(
        parse_polynomial(num, params).unwrap(),
        parse_polynomial(den, params).unwrap(),
    )
    .unwrap()
    .normalize()
}

fn point(x: Rational, y: Rational) -> Valuation<Rational> {
    Valuation::new(vec![x, y])
}

/// Knuth-Yao die with face `face` as the only target.
fn ky_face(face: usize) -> Pmc {
    let text = model("knuth_yao.pmc")
        .replace("state f2 target", "state f2")
        .replace(
            &format!("state f{face}\n"),
            &format!("state f{face} target\n"),
        );
    Pmc::parse(&text).unwrap()
}

fn solution_exactness() -> Outcome {
    let mut notes = Vec::new();
    for (file, num, den) in [
        ("coupled_coins.pmc", "x*(1-y)", "1-x*y"),
        ("knuth_yao.pmc", "x*(1-y)*(1-x)", "1-x*y"),
    ] {
        let pmc = load(file);
        let start = Instant::now();
        let f = solution_function(&pmc, EliminationOrder::MinDegree).map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(1), file)?;
        let expected = ratfunc(num, den, pmc.params());
        ensure!(f == expected, "{file}: got {}", f.display(pmc.params()));
        notes.push(f.display(pmc.params()).to_string());
    }
    Ok(notes.join("; "))
}

fn fair_die() -> Outcome {
    let half = point(ratio(1, 2), ratio(1, 2));
    for face in 1..=6 {
        let pmc = ky_face(face);
        let p = reach_prob_at(&pmc, &half).map_err(|e| e.to_string())?;
        ensure!(p == ratio(1, 6), "face {face}: {p}");
        let f = solution_function(&pmc, EliminationOrder::MinDegree).map_err(|e| e.to_string())?;
        let e = f.evaluate(&half).map_err(|e| e.to_string())?;
        ensure!(e == p, "face {face}: function gives {e}");
    }
    Ok("all six faces 1/6".into())
}

fn lifting_oracle() -> Outcome {
    let pmc = load("ping_pong.pmc");
    let region = parse_region(&model("ping_pong.region"), pmc.params()).unwrap();
    // independent oracle: every corner of the relaxed parameter box
    let relaxed = relax(&pmc);
    let k = relaxed.num_fresh();
    ensure!(k == 3, "relaxation has {k} fresh parameters");
    let mut corners = Vec::new();
    for mask in 0..1usize << k {
        let v = Valuation::new(
            relaxed
                .origin
                .iter()
                .enumerate()
                .map(|(i, &(param, _))| {
                    let (lo, hi) = &region.bounds()[param];
                    if mask >> i & 1 == 1 {
                        hi.clone()
                    } else {
                        lo.clone()
                    }
                })
                .collect(),
        );
        corners.push(reach_prob_at(&relaxed.pmc, &v).map_err(|e| e.to_string())?);
    }
    let oracle_min = corners.iter().min().unwrap().clone();
    let oracle_max = corners.iter().max().unwrap().clone();
    ensure!(oracle_max == ratio(47, 60), "corner max {oracle_max}");
    ensure!(oracle_min == ratio(23, 120), "corner min {oracle_min}");

    let start = Instant::now();
    let spec = Spec::parse("reach <= 4/5").unwrap();
    let report = RegionReport::refine(&pmc, &region, &spec, DEFAULT_REFINE_BUDGET)
        .map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1), "verify")?;
    ensure!(
        report.verdict == Verdict::Accepting,
        "verdict {}",
        report.verdict
    );
    ensure!(
        report.max == oracle_max && report.min == oracle_min,
        "bounds {report}"
    );
    Ok(report.to_string())
}

fn region_rejection() -> Outcome {
    let pmc = load("knuth_yao.pmc");
    let region = parse_region(&model("knuth_yao_reject.region"), pmc.params()).unwrap();
    let spec = Spec::parse("reach >= 3/20").unwrap();
    let start = Instant::now();
    let report = RegionReport::refine(&pmc, &region, &spec, DEFAULT_REFINE_BUDGET)
        .map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5), "verify")?;
    ensure!(report.verdict == Verdict::Rejecting, "{report}");
    ensure!(report.max < ratio(3, 20), "{report}");
    Ok(report.to_string())
}

fn partitioning() -> Outcome {
    let pmc = load("knuth_yao.pmc");
    let spec = Spec::parse("reach < 3/20").unwrap();
    let region = parse_region("x in [1/100, 99/100]; y in [1/100, 99/100]", pmc.params()).unwrap();
    let start = Instant::now();
    let res =
        partition(&pmc, &spec, &region, &PartitionConfig::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    within(start, Duration::from_secs(60), "partition")?;
    ensure!(res.coverage >= ratio(95, 100), "coverage {}", res.coverage);
    ensure!(
        !res.accepted.is_empty() && !res.rejected.is_empty(),
        "a verdict list is empty"
    );
    let mut rng = rng(5);
    for (list, expected) in [(&res.accepted, true), (&res.rejected, false)] {
        for r in list {
            for _ in 0..50 {
                let v = random_point(&mut rng, r);
                let holds = check_at(&pmc, &v, &spec).map_err(|e| e.to_string())?;
                ensure!(
                    holds == expected,
                    "audit failed in {}",
                    r.display(pmc.params())
                );
            }
        }
    }
    Ok(format!(
        "coverage {} ({} accepted, {} rejected, {} checks, {took:.2?})",
        format_rational(&res.coverage),
        res.accepted.len(),
        res.rejected.len(),
        res.checks
    ))
}

fn blowup_law() -> Outcome {
    for n in 2..=10 {
        let start = Instant::now();
        let f = solution_function(&blowup_chain(n), EliminationOrder::MinDegree)
            .map_err(|e| e.to_string())?;
        if n == 10 {
            within(start, Duration::from_secs(10), "n = 10")?;
        }
        let terms = f.numerator().num_terms();
        ensure!(terms == 1 << n, "n = {n}: {terms} monomials");
    }
    Ok("2^n monomials for n = 2..10".into())
}

/// Grid points of `region` with `per_dim` cell centers per dimension.
fn grid(region: &Region, per_dim: i64) -> Vec<Valuation<Rational>> {
    let mut points = vec![Vec::new()];
    for (lo, hi) in region.bounds() {
        let mut next = Vec::new();
        for p in &points {
            for i in 0..per_dim {
                let mut q = p.clone();
                q.push(lo + (hi - lo) * ratio(2 * i + 1, 2 * per_dim));
                next.push(q);
            }
        }
        points = next;
    }
    points.into_iter().map(Valuation::new).collect()
}

fn scp_feasibility_check() -> Outcome {
    let mut notes = Vec::new();
    for (file, spec, per_dim) in [
        ("triple_toss.pmc", "reach <= 1/10", 100),
        ("coupled_coins.pmc", "reach >= 3/4", 10),
    ] {
        let pmc = load(file);
        let spec = Spec::parse(spec).unwrap();
        let region = Region::default_box(pmc.num_params());
        let config = ScpConfig::default();
        ensure!(
            config.restarts <= 10,
            "{} restarts configured",
            config.restarts
        );
        let start = Instant::now();
        let w = scp_feasibility(&Problem::new(&pmc, &spec, &region), &config, 0)
            .map_err(|e| format!("{file}: {e}"))?;
        within(start, Duration::from_secs(30), file)?;
        ensure!(
            w.stats.restarts <= 10,
            "{file}: {} restarts",
            w.stats.restarts
        );
        let exact = reach_prob_at(&pmc, &w.valuation).map_err(|e| e.to_string())?;
        ensure!(
            exact == w.probability && spec.holds(&exact),
            "{file}: witness gives {exact}"
        );
        ensure!(
            region.contains(&w.valuation),
            "{file}: witness outside region"
        );
        // the 100-point grid must agree that the problem is feasible
        let points = grid(&region, per_dim);
        let mut feasible = 0;
        for v in &points {
            if check_at(&pmc, v, &spec).map_err(|e| e.to_string())? {
                feasible += 1;
            }
        }
        ensure!(feasible > 0, "{file}: grid oracle finds no feasible point");
        notes.push(format!(
            "{file}: {} -> {} ({feasible}/{} grid points feasible)",
            pmc_synth::model::format_valuation(&w.valuation, pmc.params()),
            format_rational(&exact),
            points.len()
        ));
    }
    Ok(notes.join("; "))
}

fn pomdp_translation() -> Outcome {
    let pomdp = Pomdp::parse(&model("colors.pomdp")).unwrap();
    let policy = pomdp_to_pmc(&pomdp).map_err(|e| e.to_string())?;
    let pmc = &policy.pmc;
    let groups: Vec<Vec<&str>> = policy
        .simplex
        .iter()
        .map(|g| g.iter().map(|&z| pmc.params()[z].as_str()).collect())
        .collect();
    ensure!(
        groups
            == vec![
                vec!["blue_a1", "blue_a2", "blue_a3"],
                vec!["red_a1", "red_a2"]
            ],
        "simplex groups {groups:?}"
    );
    let expected = [
        ("s0", "s1", "blue_a1"),
        ("s0", "s2", "1/2*blue_a2"),
        ("s0", "s3", "1/2*blue_a2 + blue_a3"),
        ("s1", "s0", "1/2*red_a2"),
        ("s1", "s2", "red_a1 + 1/2*red_a2"),
        ("s2", "s2", "1"),
        ("s3", "s2", "red_a1"),
        ("s3", "s3", "red_a2"),
    ];
    ensure!(
        pmc.num_transitions() == expected.len(),
        "{} edges",
        pmc.num_transitions()
    );
    for (s, t, f) in expected {
        let (s, t) = (pmc.state_index(s).unwrap(), pmc.state_index(t).unwrap());
        let want = parse_polynomial(f, pmc.params()).unwrap();
        ensure!(pmc.transition(s, t) == Some(&want), "edge {s} -> {t}");
    }

    let mut rng = rng(12);
    for _ in 0..20 {
        let pomdp = random_pomdp(&mut rng, 6);
        let policy = pomdp_to_pmc(&pomdp).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let v = random_simplex_valuation(&mut rng, &policy.pmc, &policy.simplex);
            let translated = reach_prob_at(&policy.pmc, &v).map_err(|e| e.to_string())?;
            let direct = randomized_policy_mc(&pomdp, &policy.pmc, &v).reach_prob();
            ensure!(
                translated == direct,
                "policy mismatch {translated} vs {direct}"
            );
        }
    }
    Ok("expected edges and 100 policy checks".into())
}

fn random_suite() -> Vec<Pmc> {
    let mut rng = rng(909);
    (0..50).map(|_| random_pmc(&mut rng, 8)).collect()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng(31);
    for pmc in random_suite() {
        let f = solution_function(&pmc, EliminationOrder::MinDegree).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let v = random_valuation(&mut rng, pmc.num_params());
            let exact = reach_prob_at(&pmc, &v).map_err(|e| e.to_string())?;
            ensure!(
                f.evaluate(&v).unwrap() == exact,
                "mismatch on\n{}",
                pmc.to_text()
            );
        }
    }
    Ok("50 models x 20 valuations".into())
}

fn lifting_soundness() -> Outcome {
    let mut rng = rng(32);
    for pmc in random_suite() {
        let region = random_box(&mut rng, pmc.num_params());
        let (min, max) = region_bounds(&pmc, &region).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let p = reach_prob_at(&pmc, &random_point(&mut rng, &region)).unwrap();
            ensure!(min <= p && p <= max, "{p} outside [{min}, {max}]");
        }
    }
    Ok("50 boxes x 100 samples".into())
}

fn etr_emission() -> Outcome {
    let pmc = load("coupled_coins.pmc");
    let text = emit_etr(&pmc, None, &Spec::parse("reach >= 3/4").unwrap());
    let mut depth = 0i64;
    for c in text.chars() {
        depth += match c {
            '(' => 1,
            ')' => -1,
            _ => 0,
        };
        ensure!(depth >= 0, "unbalanced parentheses");
    }
    ensure!(depth == 0, "unbalanced parentheses");
    for needle in [
        "(set-logic QF_NRA)",
        "(assert (and (< 0 x) (< x 1)))",
        "(assert (and (< 0 y) (< y 1)))",
        "(assert (>= p_s1 (/ 3 4)))",
        "(assert (= p_s3 1))",
        "(assert (= p_s0 0))",
        "(assert (= p_s1 (+ (* (+ 1 (- x)) p_s0) (* x p_s2))))",
        "(assert (= p_s2 (+ (* y p_s1) (* (+ 1 (- y)) p_s3))))",
        "(check-sat)",
    ] {
        ensure!(text.contains(needle), "missing {needle}");
    }
    let declared = text.matches("(declare-const").count();
    ensure!(declared == 6, "{declared} constants declared");
    match solve_with_z3(&text, pmc.params())? {
        None => Ok("well-formed; no external solver on PATH".into()),
        Some(v) => {
            let p = reach_prob_at(&pmc, &v).map_err(|e| e.to_string())?;
            ensure!(p >= ratio(3, 4), "solver witness gives {p}");
            Ok(format!(
                "well-formed; z3 witness {} gives {}",
                pmc_synth::model::format_valuation(&v, pmc.params()),
                format_rational(&p)
            ))
        }
    }
}

/// Runs `z3` on the formula when it is installed and extracts the
/// parameter values of a `sat` model.
fn solve_with_z3(formula: &str, params: &[String]) -> Result<Option<Valuation<Rational>>, String> {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let child = Command::new("z3")
        .args(["-in", "-T:20"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn();
    let Ok(mut child) = child else {
        return Ok(None);
    };
    child
        .stdin
        .take()
        .unwrap()
        .write_all(formula.as_bytes())
        .map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure!(
        text.trim_start().starts_with("sat"),
        "solver answered {}",
        text.trim()
    );
    let values = params
        .iter()
        .map(|name| {
            let head = format!("(define-fun {name} () Real");
            let start = text.find(&head).ok_or(format!("no value for {name}"))? + head.len();
            let mut rest = text[start..].trim_start();
            parse_smt_value(&mut rest).ok_or(format!("cannot read value of {name}"))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Some(Valuation::new(values)))
}

/// Reads a real literal, `(/ a b)` or `(- a)` from the front of `input`.
fn parse_smt_value(input: &mut &str) -> Option<Rational> {
    *input = input.trim_start();
    if let Some(rest) = input.strip_prefix('(') {
        *input = rest.trim_start();
        let op = input.chars().next()?;
        *input = input[1..].trim_start();
        let first = parse_smt_value(input)?;
        let value = match op {
            '-' if input.trim_start().starts_with(')') => -first,
            '-' => first - parse_smt_value(input)?,
            '/' => first / parse_smt_value(input)?,
            _ => return None,
        };
        *input = input.trim_start().strip_prefix(')')?;
        return Some(value);
    }
    let end = input
        .find(|c: char| !(c.is_ascii_digit() || c == '.'))
        .unwrap_or(input.len());
    let (literal, rest) = input.split_at(end);
    *input = rest;
    pmc_synth::scalar::parse_rational(literal)
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("solution-function exactness", solution_exactness),
        ("fair-die oracle", fair_die),
        ("lifting oracle", lifting_oracle),
        ("region rejection", region_rejection),
        ("partitioning", partitioning),
        ("blow-up law", blowup_law),
        ("SCP feasibility", scp_feasibility_check),
        ("POMDP translation", pomdp_translation),
        ("oracle equivalence", oracle_equivalence),
        ("lifting soundness", lifting_soundness),
        ("ETR emission", etr_emission),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(note) => println!("PASS {:>2} {name} [{took:.2?}]: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{took:.2?}]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
