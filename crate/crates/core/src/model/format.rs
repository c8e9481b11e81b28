//! Line-oriented text formats for pMCs, regions, and valuations.
//!
//! ```text
//! pmc
//! params x y
//! state s0 init
//! state s1
//! state s3 target
//! trans s0 s1 : x
//! trans s0 s2 : 1 - x
//! ```
//!
//! `#` starts a comment. Pairs without a `trans` line have probability 0.
//! Policy pMCs obtained from POMDPs may additionally carry
//! `simplex z1 z2 z3` lines naming parameters that sum to one.

use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{Pmc, Region};
use crate::polyalg::{parse_expr_at, Valuation};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

/// A significant line: 1-based line number, text with comments removed.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    /// Whitespace-separated words with their 1-based columns.
    pub fn words(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((s + 1, &self.text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &self.text[s..]));
        }
        out
    }

    pub fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.number, column, message)
    }
}

pub(crate) fn significant_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("");
        (!text.trim().is_empty()).then_some(Line {
            number: i + 1,
            text,
        })
    })
}

/// Expects the first significant line to be exactly `keyword`.
pub(crate) fn expect_header<'a>(
    lines: &mut impl Iterator<Item = Line<'a>>,
    keyword: &str,
) -> Result<()> {
    match lines.next() {
        Some(line) if line.text.trim() == keyword => Ok(()),
        Some(line) => Err(line.error(1, format!("expected `{keyword}` header"))),
        None => Err(Error::parse(
            1,
            1,
            format!("empty input, expected `{keyword}` header"),
        )),
    }
}

pub(crate) fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// State declarations shared by the pMC and POMDP formats.
#[derive(Default)]
pub(crate) struct StateTable {
    pub names: Vec<String>,
    pub index: HashMap<String, usize>,
    pub initial: Option<usize>,
    pub targets: Vec<usize>,
}

impl StateTable {
    /// Handles `state NAME [init] [target]`.
    pub fn declare(&mut self, line: &Line<'_>, words: &[(usize, &str)]) -> Result<()> {
        let &(col, name) = words
            .get(1)
            .ok_or_else(|| line.error(words[0].0, "expected state name"))?;
        if !is_identifier(name) {
            return Err(line.error(col, format!("invalid state name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Model(format!(
                "line {}: state `{name}` declared twice",
                line.number
            )));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        for &(c, attr) in &words[2..] {
            match attr {
                "init" => {
                    if self.initial.is_some() {
                        return Err(Error::Model(format!(
                            "line {}: second initial state `{name}`",
                            line.number
                        )));
                    }
                    self.initial = Some(id);
                }
                "target" => self.targets.push(id),
                other => return Err(line.error(c, format!("unknown state attribute `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn lookup(&self, line: &Line<'_>, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Model(format!("line {}: undeclared state `{name}`", line.number)))
    }

    pub fn finish(&self) -> Result<usize> {
        if self.names.is_empty() {
            return Err(Error::Model("no states declared".into()));
        }
        if self.targets.is_empty() {
            return Err(Error::Model("no target state declared".into()));
        }
        self.initial
            .ok_or_else(|| Error::Model("no initial state declared".into()))
    }
}

/// Handles `params a b c`, appending to `params`.
pub(crate) fn declare_params(
    line: &Line<'_>,
    words: &[(usize, &str)],
    params: &mut Vec<String>,
) -> Result<()> {
    for &(col, p) in &words[1..] {
        if !is_identifier(p) {
            return Err(line.error(col, format!("invalid parameter name `{p}`")));
        }
        if params.iter().any(|q| q == p) {
            return Err(line.error(col, format!("parameter `{p}` declared twice")));
        }
        params.push(p.to_string());
    }
    Ok(())
}

/// pMC file contents together with any simplex groups.
pub(crate) fn parse_pmc_parts(text: &str) -> Result<(Pmc, Vec<Vec<usize>>)> {
    let mut lines = significant_lines(text);
    expect_header(&mut lines, "pmc")?;
    let mut params: Vec<String> = Vec::new();
    let mut states = StateTable::default();
    let mut transitions = Vec::new();
    let mut seen_pairs = std::collections::HashSet::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for line in lines {
        let words = line.words();
        match words[0].1 {
            "params" => declare_params(&line, &words, &mut params)?,
            "state" => states.declare(&line, &words)?,
            "trans" => {
                let colon = line
                    .text
                    .find(':')
                    .ok_or_else(|| line.error(words[0].0, "expected `trans FROM TO : EXPR`"))?;
                let head = Line {
                    number: line.number,
                    text: &line.text[..colon],
                };
                let hw = head.words();
                if hw.len() != 3 {
                    return Err(line.error(words[0].0, "expected `trans FROM TO : EXPR`"));
                }
                let from = states.lookup(&line, hw[1].1)?;
                let to = states.lookup(&line, hw[2].1)?;
                if !seen_pairs.insert((from, to)) {
                    return Err(Error::Model(format!(
                        "line {}: duplicate transition {} -> {}",
                        line.number, hw[1].1, hw[2].1
                    )));
                }
                let expr = &line.text[colon + 1..];
                let f = parse_expr_at(expr, line.number, colon + 1, |n| {
                    params.iter().position(|p| p == n)
                })?;
                transitions.push((from, to, f));
            }
            "simplex" => {
                let mut group = Vec::new();
                for &(col, p) in &words[1..] {
                    let idx = params
                        .iter()
                        .position(|q| q == p)
                        .ok_or_else(|| line.error(col, format!("unknown parameter `{p}`")))?;
                    if groups
                        .iter()
                        .flatten()
                        .chain(group.iter())
                        .any(|&q| q == idx)
                    {
                        return Err(
                            line.error(col, format!("parameter `{p}` in two simplex groups"))
                        );
                    }
                    group.push(idx);
                }
                if group.is_empty() {
                    return Err(line.error(words[0].0, "empty simplex group"));
                }
                groups.push(group);
            }
            other => return Err(line.error(words[0].0, format!("unknown directive `{other}`"))),
        }
    }
    let initial = states.finish()?;
    let pmc = Pmc::new_with_simplex(
        states.names,
        params,
        initial,
        transitions,
        states.targets,
        &groups,
    )?;
    Ok((pmc, groups))
}

/// Parses a pMC file. Files carrying `simplex` lines are policy pMCs and
/// must be read with [`crate::pomdp::PolicyPmc::parse`].
pub fn parse_pmc(text: &str) -> Result<Pmc> {
    let (pmc, groups) = parse_pmc_parts(text)?;
    if !groups.is_empty() {
        return Err(Error::Model(
            "file declares simplex groups; load it as a policy pMC".into(),
        ));
    }
    Ok(pmc)
}

/// Renders a pMC (and optional simplex groups) in the file format.
pub fn write_pmc(pmc: &Pmc, simplex_groups: &[Vec<usize>]) -> String {
    let mut out = String::from("pmc\n");
    if pmc.num_params() > 0 {
        let _ = writeln!(out, "params {}", pmc.params().join(" "));
    }
    for group in simplex_groups {
        let names: Vec<&str> = group.iter().map(|&p| pmc.params()[p].as_str()).collect();
        let _ = writeln!(out, "simplex {}", names.join(" "));
    }
    for s in 0..pmc.num_states() {
        let _ = write!(out, "state {}", pmc.state_name(s));
        if s == pmc.initial() {
            out.push_str(" init");
        }
        if pmc.is_target(s) {
            out.push_str(" target");
        }
        out.push('\n');
    }
    for (s, t, f) in pmc.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} : {}",
            pmc.state_name(s),
            pmc.state_name(t),
            f.display(pmc.params())
        );
    }
    out
}

impl Pmc {
    pub fn parse(text: &str) -> Result<Pmc> {
        parse_pmc(text)
    }

    pub fn to_text(&self) -> String {
        write_pmc(self, &[])
    }
}

/// Parses `x in [1/10, 4/5]; y in [2/5, 7/10]` (separators `;` or
/// newlines). Every parameter needs exactly one bound.
pub fn parse_region(text: &str, params: &[String]) -> Result<Region> {
    let mut bounds: Vec<Option<(Rational, Rational)>> = vec![None; params.len()];
    for (line_no, raw) in text.lines().enumerate() {
        let line_text = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for piece in line_text.split(';') {
            let col = offset + piece.len() - piece.trim_start().len() + 1;
            offset += piece.len() + 1;
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let err = |m: String| Error::parse(line_no + 1, col, m);
            let (name, interval) = piece
                .split_once(" in ")
                .ok_or_else(|| err(format!("expected `NAME in [LO, HI]`, found `{piece}`")))?;
            let name = name.trim();
            let idx = params
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| err(format!("unknown parameter `{name}`")))?;
            let inner = interval
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err("interval must be written `[LO, HI]`".into()))?;
            let (lo, hi) = inner
                .split_once(',')
                .ok_or_else(|| err("interval must be written `[LO, HI]`".into()))?;
            let lo =
                parse_rational(lo).ok_or_else(|| err(format!("invalid bound `{}`", lo.trim())))?;
            let hi =
                parse_rational(hi).ok_or_else(|| err(format!("invalid bound `{}`", hi.trim())))?;
            if bounds[idx].is_some() {
                return Err(err(format!("parameter `{name}` bounded twice")));
            }
            bounds[idx] = Some((lo, hi));
        }
    }
    let bounds = bounds
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| Error::Model(format!("no bound for parameter `{}`", params[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    Region::new(bounds)
}

/// Parses `x=1/2,y=1/2`. Every parameter needs a value.
pub fn parse_valuation(text: &str, params: &[String]) -> Result<Valuation<Rational>> {
    let mut values: Vec<Option<Rational>> = vec![None; params.len()];
    let mut col = 1;
    for piece in text.split(',') {
        let here = col;
        col += piece.len() + 1;
        if piece.trim().is_empty() {
            continue;
        }
        let err = |m: String| Error::parse(1, here, m);
        let (name, value) = piece
            .split_once('=')
            .ok_or_else(|| err(format!("expected `NAME=VALUE`, found `{}`", piece.trim())))?;
        let name = name.trim();
        let idx = params
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| err(format!("unknown parameter `{name}`")))?;
        let v = parse_rational(value)
            .ok_or_else(|| err(format!("invalid value `{}`", value.trim())))?;
        values[idx] = Some(v);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::MissingParameter(params[i].clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Valuation::new(values))
}

/// Renders `x=1/2,y=1/2`.
pub fn format_valuation(v: &Valuation<Rational>, params: &[String]) -> String {
    params
        .iter()
        .zip(v.values())
        .map(|(p, x)| format!("{p}={}", format_rational(x)))
        .collect::<Vec<_>>()
        .join(",")
}
