use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Pmc, Region, Spec};
use crate::polyalg::Valuation;
use crate::{Poly, Rational};

use super::lp::{ConstraintKind, LpProblem};

/// Successor reference inside a QCQP constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Successor {
    /// Probability variable of the unknown state with this index.
    State(usize),
    /// A target state, whose probability is the constant 1.
    Target,
}

/// Reachability constraints `p_s >= Σ f(x)·p_t` (or `<=` when maximizing)
/// over the states that can reach the target without being targets.
#[derive(Clone, Debug, PartialEq)]
pub struct QcqpProblem {
    /// pMC state of each probability variable.
    pub states: Vec<usize>,
    pub rows: Vec<Vec<(Successor, Poly)>>,
    /// Variable index of the initial state.
    pub initial: usize,
    pub num_params: usize,
    pub param_names: Vec<String>,
    pub region: Region,
    pub simplex: Vec<Vec<usize>>,
    pub spec: Spec,
}

impl QcqpProblem {
    /// Fails with `InvalidArgument` when the initial state is a target or
    /// cannot reach one, since the spec is then decided without search.
    pub fn new(pmc: &Pmc, spec: &Spec, region: &Region, simplex: &[Vec<usize>]) -> Result<Self> {
        pmc.check_region_dim(region)?;
        let relevant = pmc.states_reaching_target();
        let states: Vec<usize> = relevant
            .iter()
            .copied()
            .filter(|&s| !pmc.is_target(s))
            .collect();
        let mut slot = vec![usize::MAX; pmc.num_states()];
        for (i, &s) in states.iter().enumerate() {
            slot[s] = i;
        }
        let initial = slot[pmc.initial()];
        if initial == usize::MAX {
            return Err(Error::InvalidArgument(
                "initial state is a target or cannot reach one".into(),
            ));
        }
        let rows = states
            .iter()
            .map(|&s| {
                pmc.row(s)
                    .iter()
                    .filter_map(|(t, f)| {
                        if pmc.is_target(*t) {
                            Some((Successor::Target, f.clone()))
                        } else if slot[*t] != usize::MAX {
                            Some((Successor::State(slot[*t]), f.clone()))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(QcqpProblem {
            states,
            rows,
            initial,
            num_params: pmc.num_params(),
            param_names: pmc.params().to_vec(),
            region: region.clone(),
            simplex: simplex.to_vec(),
            spec: spec.clone(),
        })
    }

    /// True when the objective is to minimize the initial probability.
    pub fn minimizing(&self) -> bool {
        self.spec.comparison.is_upper_bound()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// LP variable index of `p_i`.
    pub fn p_var(&self, i: usize) -> usize {
        self.num_params + i
    }

    /// LP variable index of the penalty of state `i`.
    pub fn k_var(&self, i: usize) -> usize {
        self.num_params + self.num_states() + i
    }

    /// LP variable index of the penalty on the spec constraint.
    pub fn spec_penalty_var(&self) -> usize {
        self.num_params + 2 * self.num_states()
    }

    /// Value of `Σ f(x)·p_t` for state `i`.
    pub fn bilinear_sum(
        &self,
        i: usize,
        v: &Valuation<Rational>,
        p: &[Rational],
    ) -> Result<Rational> {
        self.rows[i]
            .iter()
            .try_fold(Rational::zero(), |acc, (succ, f)| {
                let fv = f.evaluate(v)?;
                Ok(acc
                    + match succ {
                        Successor::Target => fv,
                        Successor::State(j) => fv * &p[*j],
                    })
            })
    }
}

fn trust_bounds(
    anchor: &Rational,
    radius: &Rational,
    lo: &Rational,
    hi: &Rational,
) -> (Rational, Rational) {
    let (mut l, mut u) = if anchor.is_zero() {
        (lo.clone(), hi.clone())
    } else {
        (anchor / radius, anchor * radius)
    };
    if l < *lo {
        l = lo.clone();
    }
    if u > *hi {
        u = hi.clone();
    }
    (l, u)
}

/// Penalty LP around the anchor `(vhat, phat)`.
///
/// Every product `f(x)·p_t` becomes `f(v̂)·p_t + p̂_t·∇f(v̂)·(x - v̂)`, which
/// is exact at the anchor. Each state constraint gets a nonnegative
/// penalty `k_s`, the spec bound on the initial state gets its own, and
/// the objective is `±p_init + τ·Σ k`. All variables are confined to the
/// trust region `ẑ/δ' <= z <= ẑ·δ'` with `δ' = δ + 1`, intersected with the
/// region box and `[0, 1]`.
pub fn linearize(
    q: &QcqpProblem,
    vhat: &Valuation<Rational>,
    phat: &[Rational],
    delta: &Rational,
    tau: &Rational,
) -> Result<LpProblem> {
    if vhat.len() != q.num_params || phat.len() != q.num_states() {
        return Err(Error::Dimension("anchor does not match the QCQP".into()));
    }
    let radius = delta + Rational::one();
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut lp = LpProblem::new();
    for (x, name) in q.param_names.iter().enumerate() {
        let (l, u) = trust_bounds(
            &vhat.values()[x],
            &radius,
            q.region.lower(x),
            q.region.upper(x),
        );
        lp.add_variable(name.clone(), Some(l), Some(u));
    }
    for (i, &s) in q.states.iter().enumerate() {
        let (l, u) = trust_bounds(&phat[i], &radius, &zero, &one);
        lp.add_variable(format!("p{s}"), Some(l), Some(u));
    }
    for &s in &q.states {
        lp.add_variable(format!("k{s}"), Some(zero.clone()), None);
    }
    let spec_k = lp.add_variable("k_spec", Some(zero.clone()), None);
    let minimizing = q.minimizing();

    for i in 0..q.num_states() {
        // p_i ± k_i - Σ f(v̂) p_j - Σ g_l x_l  (>= or <=)  rhs
        let mut coeffs = vec![Rational::zero(); lp.num_vars()];
        coeffs[q.p_var(i)] += &one;
        coeffs[q.k_var(i)] = if minimizing {
            one.clone()
        } else {
            -one.clone()
        };
        let mut rhs = Rational::zero();
        for (succ, f) in &q.rows[i] {
            let fv = f.evaluate(vhat)?;
            let grad = f.gradient(vhat)?;
            let weight = match succ {
                Successor::Target => {
                    rhs += &fv;
                    one.clone()
                }
                Successor::State(j) => {
                    coeffs[q.p_var(*j)] -= &fv;
                    phat[*j].clone()
                }
            };
            for (l, g) in grad.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let c = &weight * g;
                rhs -= &c * &vhat.values()[l];
                coeffs[l] -= c;
            }
        }
        let sparse = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let kind = if minimizing {
            ConstraintKind::Ge
        } else {
            ConstraintKind::Le
        };
        lp.add_constraint(sparse, kind, rhs);
    }

    let pi = q.p_var(q.initial);
    if minimizing {
        lp.add_constraint(
            vec![(pi, one.clone()), (spec_k, -one.clone())],
            ConstraintKind::Le,
            q.spec.threshold.clone(),
        );
    } else {
        lp.add_constraint(
            vec![(pi, one.clone()), (spec_k, one.clone())],
            ConstraintKind::Ge,
            q.spec.threshold.clone(),
        );
    }
    for group in &q.simplex {
        lp.add_constraint(
            group.iter().map(|&x| (x, one.clone())).collect(),
            ConstraintKind::Eq,
            one.clone(),
        );
    }
    lp.objective[pi] = if minimizing {
        one.clone()
    } else {
        -one.clone()
    };
    for i in 0..q.num_states() {
        lp.objective[q.k_var(i)] = tau.clone();
    }
    lp.objective[spec_k] = tau.clone();
    Ok(lp)
}
