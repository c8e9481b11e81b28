use std::collections::BTreeSet;
use std::fmt::Write;

use num_traits::{One, Signed};

use crate::model::{Comparison, Pmc, Region, Spec};
use crate::{Poly, Rational};

fn smt_rational(r: &Rational) -> String {
    let abs = r.abs();
    let body = if abs.is_integer() {
        abs.numer().to_string()
    } else {
        format!("(/ {} {})", abs.numer(), abs.denom())
    };
    if r.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

fn smt_poly(p: &Poly, params: &[String]) -> String {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let mut factors = Vec::new();
        for &(v, e) in m.powers() {
            for _ in 0..e {
                factors.push(params[v].clone());
            }
        }
        let term = if factors.is_empty() {
            smt_rational(c)
        } else {
            let product = if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            };
            if c.is_one() {
                product
            } else if (-c).is_one() {
                format!("(- {product})")
            } else {
                format!("(* {} {product})", smt_rational(c))
            }
        };
        terms.push(term);
    }
    match terms.len() {
        0 => "0".into(),
        1 => terms.pop().unwrap(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

fn state_var(pmc: &Pmc, s: usize) -> String {
    format!("p_{}", pmc.state_name(s))
}

/// SMT-LIB 2 (QF_NRA) encoding of "some instantiation in the region
/// satisfies `spec`". Without a region every parameter ranges over the
/// open interval (0, 1).
pub fn emit_etr(pmc: &Pmc, region: Option<&Region>, spec: &Spec) -> String {
    let relevant = pmc.states_reaching_target();
    let mut zero: BTreeSet<usize> = BTreeSet::new();
    for &s in &relevant {
        if pmc.is_target(s) {
            continue;
        }
        zero.extend(
            pmc.row(s)
                .iter()
                .map(|(t, _)| *t)
                .filter(|t| !relevant.contains(t)),
        );
    }
    if !relevant.contains(&pmc.initial()) {
        zero.insert(pmc.initial());
    }
    let mut out = String::new();
    out.push_str("(set-logic QF_NRA)\n");
    for x in pmc.params() {
        writeln!(out, "(declare-const {x} Real)").unwrap();
    }
    let declared: BTreeSet<usize> = relevant.union(&zero).copied().collect();
    for &s in &declared {
        writeln!(out, "(declare-const {} Real)", state_var(pmc, s)).unwrap();
    }
    for (i, x) in pmc.params().iter().enumerate() {
        match region {
            Some(r) => writeln!(
                out,
                "(assert (and (<= {} {x}) (<= {x} {})))",
                smt_rational(r.lower(i)),
                smt_rational(r.upper(i))
            ),
            None => writeln!(out, "(assert (and (< 0 {x}) (< {x} 1)))"),
        }
        .unwrap();
    }
    let op = match spec.comparison {
        Comparison::Le => "<=",
        Comparison::Lt => "<",
        Comparison::Ge => ">=",
        Comparison::Gt => ">",
    };
    writeln!(
        out,
        "(assert ({op} {} {}))",
        state_var(pmc, pmc.initial()),
        smt_rational(&spec.threshold)
    )
    .unwrap();
    for &t in pmc.targets().intersection(&declared) {
        writeln!(out, "(assert (= {} 1))", state_var(pmc, t)).unwrap();
    }
    for &s in &zero {
        writeln!(out, "(assert (= {} 0))", state_var(pmc, s)).unwrap();
    }
    for &s in &relevant {
        if pmc.is_target(s) {
            continue;
        }
        let summands: Vec<String> = pmc
            .row(s)
            .iter()
            .map(|(t, f)| {
                let var = state_var(pmc, *t);
                if f.is_one() {
                    var
                } else {
                    format!("(* {} {var})", smt_poly(f, pmc.params()))
                }
            })
            .collect();
        let rhs = if summands.len() == 1 {
            summands[0].clone()
        } else {
            format!("(+ {})", summands.join(" "))
        };
        writeln!(out, "(assert (= {} {rhs}))", state_var(pmc, s)).unwrap();
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}
