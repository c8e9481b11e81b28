use std::path::Path;
use std::time::Instant;

use pmc_synth::feasibility::{
    pso_search, sample_search, scp_feasibility, Problem, PsoConfig, ScpConfig, Witness,
};
use pmc_synth::mccheck::reach_prob_at;
use pmc_synth::model::{format_valuation, parse_region, parse_valuation, Pmc, Region, Spec};
use pmc_synth::partition::{
    partition, PartitionConfig, PartitionResult, SplitPolicy, SplitStrategy,
};
use pmc_synth::pomdp::{desimplex, pomdp_to_pmc, unfold_fsc, PolicyPmc, Pomdp};
use pmc_synth::regionlift::{emit_etr, RegionReport};
use pmc_synth::scalar::{format_rational, parse_rational, Scalar};
use pmc_synth::solfun::{solution_function_with, EliminationOrder, SolfunConfig};
use pmc_synth::{Error, Rational};
use serde_json::{json, Value};

use crate::args::*;
use crate::report::Report;

pub struct Failure {
    pub error: Error,
    /// Report for partial results, printed after the error message.
    pub partial: Option<Report>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            error,
            partial: None,
        }
    }
}

type Outcome = Result<Report, Failure>;

/// 2 for bad input, 3 when a search or budget ran out.
pub fn exit_code(error: &Error) -> u8 {
    match error {
        Error::NotFound | Error::BudgetExhausted(_) => 3,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check(a) => check(a),
        Command::Solfun(a) => solfun(a),
        Command::Verify(a) => verify(a),
        Command::Partition(a) => partition_cmd(a),
        Command::Feasible(a) => feasible(a),
        Command::Etr(a) => etr(a),
        Command::PomdpTranslate(a) => translate(a),
        Command::PomdpUnfold(a) => unfold(a),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

/// Loads a pMC, accepting policy pMCs with simplex groups.
fn load_model(path: &Path) -> Result<(Pmc, Vec<Vec<usize>>), Error> {
    let policy = PolicyPmc::parse(&read(path)?)?;
    Ok((policy.pmc, policy.simplex))
}

fn load_plain_model(path: &Path) -> Result<Pmc, Error> {
    let (pmc, groups) = load_model(path)?;
    if !groups.is_empty() {
        return Err(Error::UnsupportedModel(
            "model has simplex groups; convert it with `pomdp-translate --desimplex`".into(),
        ));
    }
    Ok(pmc)
}

/// Region from a file path or inline text; the default box when absent.
fn load_region(arg: Option<&str>, pmc: &Pmc) -> Result<Region, Error> {
    match arg {
        None => Ok(Region::default_box(pmc.num_params())),
        Some(text) => {
            let path = Path::new(text);
            let content = if path.is_file() {
                read(path)?
            } else {
                text.to_string()
            };
            parse_region(&content, pmc.params())
        }
    }
}

fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn valuation_json(v: &pmc_synth::polyalg::Valuation<Rational>, params: &[String]) -> Value {
    let map = params
        .iter()
        .zip(v.values())
        .map(|(p, x)| (p.clone(), rat(x)))
        .collect();
    Value::Object(map)
}

fn write_or_return(out: Option<&Path>, text: String, report: Report) -> Outcome {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(Error::from)?;
            Ok(report.field("written", path.display().to_string()))
        }
        None => Ok(report.body(text)),
    }
}

fn check(a: CheckArgs) -> Outcome {
    let pmc = load_plain_model(&a.model)?;
    let spec = Spec::parse(&a.spec)?;
    let v = parse_valuation(&a.valuation, pmc.params())?;
    let p = reach_prob_at(&pmc, &v)?;
    let sat = spec.holds(&p);
    let verdict = if sat { "SAT" } else { "UNSAT" };
    Ok(Report::new()
        .body(format!("{}, {verdict}", format_rational(&p)))
        .json_field("probability", rat(&p))
        .json_field("approx", p.approx())
        .json_field("result", verdict)
        .code(if sat { 0 } else { 1 }))
}

fn solfun(a: SolfunArgs) -> Outcome {
    let pmc = load_plain_model(&a.model)?;
    let config = SolfunConfig {
        order: match a.order {
            OrderArg::Mindeg => EliminationOrder::MinDegree,
            OrderArg::Minsize => EliminationOrder::MinFunctionSize,
        },
        gcd: !a.no_gcd,
    };
    let start = Instant::now();
    let f = solution_function_with(&pmc, &config)?;
    let text = f.display(pmc.params()).to_string();
    Ok(Report::new()
        .body(text.clone())
        .json_field("function", text)
        .json_field("numerator_terms", f.numerator().num_terms())
        .json_field("denominator_terms", f.denominator().num_terms())
        .elapsed(start.elapsed()))
}

fn verify(a: VerifyArgs) -> Outcome {
    let pmc = load_plain_model(&a.region.model)?;
    let spec = Spec::parse(&a.region.spec)?;
    let region = load_region(a.region.region.as_deref(), &pmc)?;
    let start = Instant::now();
    let report = RegionReport::refine(&pmc, &region, &spec, a.budget)?;
    let code = match report.verdict {
        pmc_synth::model::Verdict::Accepting => 0,
        pmc_synth::model::Verdict::Rejecting => 1,
        pmc_synth::model::Verdict::Inconclusive => 3,
    };
    Ok(Report::new()
        .body(report.to_string())
        .json_field("verdict", report.verdict.to_string())
        .json_field("min", rat(&report.min))
        .json_field("max", rat(&report.max))
        .elapsed(start.elapsed())
        .code(code))
}

fn parse_fraction(text: &str, what: &str) -> Result<Rational, Error> {
    parse_rational(text).ok_or_else(|| Error::InvalidArgument(format!("invalid {what} `{text}`")))
}

fn partition_report(
    res: &PartitionResult,
    pmc: &Pmc,
    a: &PartitionArgs,
    start: Instant,
) -> Result<Report, Error> {
    let mut report = Report::new()
        .field("coverage", format_rational(&res.coverage))
        .field("coverage_approx", format!("{:.6}", res.coverage.approx()))
        .field("accepted", res.accepted.len())
        .field("rejected", res.rejected.len())
        .field("unknown", res.unknown.len())
        .field("checks", res.checks);
    if let Some(prefix) = &a.out {
        let mut formats = a.format.clone();
        if formats.is_empty() {
            formats.push(FormatArg::Csv);
            if pmc.num_params() == 2 {
                formats.push(FormatArg::Svg);
            }
        }
        for f in formats {
            let (ext, text) = match f {
                FormatArg::Csv => ("csv", res.to_csv(pmc.params())),
                FormatArg::Svg => ("svg", res.to_svg(pmc.params())?),
                FormatArg::Json => ("json", partition_json(res, pmc)),
            };
            let path = prefix.with_extension(ext);
            std::fs::write(&path, text)?;
            report = report.field("written", path.display().to_string());
        }
    }
    Ok(report.elapsed(start.elapsed()))
}

fn partition_json(res: &PartitionResult, pmc: &Pmc) -> String {
    let boxes = |list: &[Region]| -> Value {
        list.iter()
            .map(|r| {
                Value::Array(
                    r.bounds()
                        .iter()
                        .map(|(lo, hi)| json!([format_rational(lo), format_rational(hi)]))
                        .collect(),
                )
            })
            .collect()
    };
    let value = json!({
        "params": pmc.params(),
        "coverage": format_rational(&res.coverage),
        "accepted": boxes(&res.accepted),
        "rejected": boxes(&res.rejected),
        "unknown": boxes(&res.unknown),
        "checks": res.checks,
    });
    serde_json::to_string_pretty(&value).expect("serializable result")
}

fn partition_cmd(a: PartitionArgs) -> Outcome {
    let pmc = load_plain_model(&a.region.model)?;
    let spec = Spec::parse(&a.region.spec)?;
    let region = load_region(a.region.region.as_deref(), &pmc)?;
    let config = PartitionConfig {
        eta: parse_fraction(&a.eta, "eta")?,
        policy: SplitPolicy {
            strategy: match a.split {
                SplitArg::Widest => SplitStrategy::WidestDimension,
                SplitArg::Disagree => SplitStrategy::SampleDisagreement,
            },
            max_depth: a.max_depth,
        },
        budget: a.budget,
        threads: a.threads.max(1),
        ..PartitionConfig::default()
    };
    let start = Instant::now();
    match partition(&pmc, &spec, &region, &config) {
        Ok(res) => Ok(partition_report(&res, &pmc, &a, start)?),
        Err(Error::BudgetExhausted(res)) => {
            let partial = partition_report(&res, &pmc, &a, start)?;
            Err(Failure {
                error: Error::BudgetExhausted(res),
                partial: Some(partial),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn feasible(a: FeasibleArgs) -> Outcome {
    let (pmc, groups) = load_model(&a.region.model)?;
    let spec = Spec::parse(&a.region.spec)?;
    let region = load_region(a.region.region.as_deref(), &pmc)?;
    let problem = Problem::new(&pmc, &spec, &region).with_simplex(&groups);
    let start = Instant::now();
    let witness: Witness = match a.method {
        MethodArg::Sample => sample_search(&problem, a.samples, a.seed)?,
        MethodArg::Pso => pso_search(
            &problem,
            &PsoConfig {
                iterations: a.iterations,
                ..PsoConfig::default()
            },
            a.seed,
        )?,
        MethodArg::Scp => {
            let mut config = ScpConfig {
                restarts: a.restarts,
                threads: a.threads.max(1),
                ..ScpConfig::default()
            };
            if let Some(tau) = &a.tau {
                config.tau = parse_fraction(tau, "tau")?;
            }
            scp_feasibility(&problem, &config, a.seed)?
        }
    };
    Ok(Report::new()
        .field(
            "witness",
            format_valuation(&witness.valuation, pmc.params()),
        )
        .field("probability", format_rational(&witness.probability))
        .field("checks", witness.stats.checks)
        .field("iterations", witness.stats.iterations)
        .field("accepted_steps", witness.stats.accepted)
        .field("restarts", witness.stats.restarts)
        .json_field(
            "valuation",
            valuation_json(&witness.valuation, pmc.params()),
        )
        .elapsed(start.elapsed()))
}

fn etr(a: EtrArgs) -> Outcome {
    let pmc = load_plain_model(&a.model)?;
    let spec = Spec::parse(&a.spec)?;
    let region = match &a.region {
        Some(r) => Some(load_region(Some(r), &pmc)?),
        None => None,
    };
    let text = emit_etr(&pmc, region.as_ref(), &spec);
    write_or_return(a.out.as_deref(), text, Report::new())
}

fn translate(a: TranslateArgs) -> Outcome {
    let pomdp = Pomdp::parse(&read(&a.model)?)?;
    let policy = pomdp_to_pmc(&pomdp)?;
    let (text, params) = if a.desimplex {
        let plain = desimplex(&policy)?;
        let n = plain.num_params();
        (plain.to_text(), n)
    } else {
        (policy.to_text(), policy.pmc.num_params())
    };
    let report = Report::new().json_field("params", params).json_field(
        "simplex_groups",
        if a.desimplex { 0 } else { policy.simplex.len() },
    );
    write_or_return(a.out.as_deref(), text, report)
}

fn unfold(a: UnfoldArgs) -> Outcome {
    let pomdp = Pomdp::parse(&read(&a.model)?)?;
    let unfolded = unfold_fsc(&pomdp, a.k)?;
    let report = Report::new().json_field("states", unfolded.mdp.num_states());
    write_or_return(a.out.as_deref(), unfolded.to_text(), report)
}
