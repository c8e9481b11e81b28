//! Approximate parameter-space partitioning into accepting and rejecting
//! boxes.

mod export;
mod sampling;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::mccheck::check_at;
use crate::model::{Pmc, Region, Spec, Verdict};
use crate::regionlift::lift;
use crate::Rational;

pub use export::ExportFormat;
pub use sampling::{sample_grid, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitStrategy {
    #[default]
    WidestDimension,
    SampleDisagreement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitPolicy {
    pub strategy: SplitStrategy,
    /// Regions at this depth are not split further.
    pub max_depth: usize,
}

impl Default for SplitPolicy {
    fn default() -> Self {
        SplitPolicy {
            strategy: SplitStrategy::WidestDimension,
            max_depth: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionConfig {
    /// Required covered fraction of the input volume.
    pub eta: Rational,
    pub policy: SplitPolicy,
    /// Maximal number of region checks.
    pub budget: usize,
    /// Grid resolution per dimension for the initial samples.
    pub grid: usize,
    /// Regions taken from the queue per round. Results depend on this
    /// value but not on `threads`.
    pub wave_size: usize,
    pub threads: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            eta: crate::scalar::ratio(95, 100),
            policy: SplitPolicy::default(),
            budget: 10_000,
            grid: 5,
            wave_size: 1,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionResult {
    /// The input region.
    pub region: Region,
    pub accepted: Vec<Region>,
    pub rejected: Vec<Region>,
    pub unknown: Vec<Region>,
    /// Labelled volume over input volume.
    pub coverage: Rational,
    pub samples: Vec<Sample>,
    /// Number of region checks performed.
    pub checks: usize,
    /// Number of extremal MDP analyses over all checks.
    pub verifications: usize,
    /// Coverage after each region check.
    pub trace: Vec<Rational>,
}

/// Splits `region` in two along the dimension picked by `policy`.
pub fn split(region: &Region, policy: &SplitPolicy, samples: &[Sample]) -> Vec<Region> {
    let dim = match policy.strategy {
        SplitStrategy::WidestDimension => region.widest_dimension(),
        SplitStrategy::SampleDisagreement => {
            disagreement_dimension(region, samples).unwrap_or_else(|| region.widest_dimension())
        }
    };
    let (a, b) = region.bisect(dim);
    vec![a, b]
}

/// Dimension with the largest width-relative spread among pairs of
/// samples inside `region` that disagree; `None` without disagreement.
fn disagreement_dimension(region: &Region, samples: &[Sample]) -> Option<usize> {
    let inside: Vec<&Sample> = samples.iter().filter(|(v, _)| region.contains(v)).collect();
    let mut score = vec![Rational::zero(); region.dim()];
    for (i, (a, ok_a)) in inside.iter().enumerate() {
        for (b, ok_b) in &inside[i + 1..] {
            if ok_a == ok_b {
                continue;
            }
            for (d, s) in score.iter_mut().enumerate() {
                let w = region.width(d);
                if !w.is_zero() {
                    *s += (&a.values()[d] - &b.values()[d]).abs() / w;
                }
            }
        }
    }
    let mut best: Option<usize> = None;
    for d in 0..score.len() {
        if score[d].is_positive() && best.is_none_or(|b| score[d] > score[b]) {
            best = Some(d);
        }
    }
    best
}

struct Pending {
    region: Region,
    volume: Rational,
    depth: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // max-heap: larger volume first, then lexicographically smaller bounds
    fn cmp(&self, other: &Self) -> Ordering {
        self.volume
            .cmp(&other.volume)
            .then_with(|| other.region.cmp(&self.region))
    }
}

struct Outcome {
    verdict: Verdict,
    center: Sample,
    verifications: usize,
}

fn check_region(pmc: &Pmc, spec: &Spec, region: &Region) -> Result<Outcome> {
    let center = region.center();
    let hypothesis = check_at(pmc, &center, spec)?;
    let lifted = lift(pmc, region)?;
    let (first, second) = if hypothesis {
        (Verdict::Accepting, Verdict::Rejecting)
    } else {
        (Verdict::Rejecting, Verdict::Accepting)
    };
    let holds = |side: Verdict| match side {
        Verdict::Accepting => lifted.satisfies(spec),
        _ => lifted.satisfies(&spec.negate()),
    };
    let (verdict, verifications) = if holds(first) {
        (first, 1)
    } else if holds(second) {
        (second, 2)
    } else {
        (Verdict::Inconclusive, 2)
    };
    Ok(Outcome {
        verdict,
        center: (center, hypothesis),
        verifications,
    })
}

fn check_wave(pmc: &Pmc, spec: &Spec, wave: &[Pending], threads: usize) -> Vec<Result<Outcome>> {
    if threads <= 1 || wave.len() <= 1 {
        return wave
            .iter()
            .map(|p| check_region(pmc, spec, &p.region))
            .collect();
    }
    let chunk = wave.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = wave
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|p| check_region(pmc, spec, &p.region))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("region check panicked"))
            .collect()
    })
}

/// Partitions `region` until the labelled fraction reaches `config.eta`.
///
/// Each popped region is model checked at its center; the verdict that
/// sample suggests is verified first by lifting, then the opposite one.
/// Inconclusive regions are bisected and requeued, up to the maximal
/// depth. Fails with `BudgetExhausted` (carrying the partial result) when
/// the budget or the depth limit stops the loop short of `eta`.
pub fn partition(
    pmc: &Pmc,
    spec: &Spec,
    region: &Region,
    config: &PartitionConfig,
) -> Result<PartitionResult> {
    pmc.check_region_dim(region)?;
    if config.eta.is_negative() || config.eta > Rational::from_integer(1.into()) {
        return Err(Error::InvalidArgument("eta must lie in [0, 1]".into()));
    }
    if config.policy.max_depth == 0 {
        return Err(Error::InvalidArgument(
            "max_depth must be at least 1".into(),
        ));
    }
    let total = region.volume();
    let mut result = PartitionResult {
        region: region.clone(),
        accepted: Vec::new(),
        rejected: Vec::new(),
        unknown: Vec::new(),
        coverage: Rational::zero(),
        samples: Vec::new(),
        checks: 0,
        verifications: 0,
        trace: Vec::new(),
    };
    if config.eta.is_zero() {
        result.unknown.push(region.clone());
        return Ok(result);
    }
    if total.is_zero() {
        return Err(Error::InvalidArgument("region has zero volume".into()));
    }
    if !pmc.is_graph_preserving(region)? {
        return Err(Error::NotGraphPreserving(
            region.display(pmc.params()).to_string(),
        ));
    }
    result.samples = sample_grid(pmc, spec, region, config.grid)?;
    let mut queue = BinaryHeap::new();
    queue.push(Pending {
        region: region.clone(),
        volume: total.clone(),
        depth: 0,
    });
    let mut stuck: Vec<Region> = Vec::new();
    let mut labelled = Rational::zero();
    let wave_size = config.wave_size.max(1);
    'outer: while !queue.is_empty() && result.checks < config.budget {
        let take = wave_size.min(config.budget - result.checks);
        let mut wave = Vec::with_capacity(take);
        while wave.len() < take {
            match queue.pop() {
                Some(p) => wave.push(p),
                None => break,
            }
        }
        let outcomes = check_wave(pmc, spec, &wave, config.threads);
        let mut items = wave.into_iter().zip(outcomes);
        while let Some((pending, outcome)) = items.next() {
            let outcome = outcome?;
            result.checks += 1;
            result.verifications += outcome.verifications;
            result.samples.push(outcome.center);
            match outcome.verdict {
                Verdict::Accepting => {
                    labelled += &pending.volume;
                    result.accepted.push(pending.region);
                }
                Verdict::Rejecting => {
                    labelled += &pending.volume;
                    result.rejected.push(pending.region);
                }
                Verdict::Inconclusive => {
                    if pending.depth + 1 >= config.policy.max_depth
                        || pending.region.is_degenerate()
                    {
                        stuck.push(pending.region);
                    } else {
                        for child in split(&pending.region, &config.policy, &result.samples) {
                            queue.push(Pending {
                                volume: child.volume(),
                                region: child,
                                depth: pending.depth + 1,
                            });
                        }
                    }
                }
            }
            result.coverage = &labelled / &total;
            result.trace.push(result.coverage.clone());
            if result.coverage >= config.eta {
                for (rest, _) in items {
                    queue.push(rest);
                }
                break 'outer;
            }
        }
    }
    let mut remaining: Vec<Pending> = queue.into_vec();
    remaining.sort_by(|a, b| b.cmp(a));
    result.unknown = remaining.into_iter().map(|p| p.region).collect();
    result.unknown.extend(stuck);
    if result.coverage >= config.eta {
        Ok(result)
    } else {
        Err(Error::BudgetExhausted(Box::new(result)))
    }
}
