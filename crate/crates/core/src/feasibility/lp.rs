use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Le,
    Ge,
    Eq,
}

/// `Σ coeff·x (kind) rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub kind: ConstraintKind,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &point[*j])
    }

    pub fn holds(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.kind {
            ConstraintKind::Le => lhs <= self.rhs,
            ConstraintKind::Ge => lhs >= self.rhs,
            ConstraintKind::Eq => lhs == self.rhs,
        }
    }
}

/// Linear program `minimize objective·x` over bounded variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpProblem {
    pub names: Vec<String>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
    pub objective: Vec<Rational>,
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    Unbounded,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Adds a variable with zero objective coefficient.
    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> usize {
        self.names.push(name.into());
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(Rational::zero());
        self.names.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, Rational)>,
        kind: ConstraintKind,
        rhs: Rational,
    ) {
        self.constraints
            .push(LinearConstraint { coeffs, kind, rhs });
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (c, x)| acc + c * x)
    }

    /// Bounds and constraints all hold at `point`.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars()
            && point.iter().enumerate().all(|(j, x)| {
                self.lower[j].as_ref().is_none_or(|l| x >= l)
                    && self.upper[j].as_ref().is_none_or(|u| x <= u)
            })
            && self.constraints.iter().all(|c| c.holds(point))
    }
}

/// `x_j = offset + Σ sign·y_col` over nonnegative columns.
struct Substitution {
    offset: Rational,
    columns: Vec<(usize, bool)>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` with Bland's rule over columns allowed by
    /// `enterable`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], enterable: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.width {
                if !enterable[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[b] * &self.rows[i][j];
                    }
                }
                if d.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Sparse coefficients, relation and right-hand side.
type Row = (Vec<(usize, Rational)>, ConstraintKind, Rational);

/// Exact two-phase simplex with Bland's anti-cycling rule.
pub fn solve_lp(lp: &LpProblem) -> LpOutcome {
    let n = lp.num_vars();
    for j in 0..n {
        if let (Some(l), Some(u)) = (&lp.lower[j], &lp.upper[j]) {
            if l > u {
                return LpOutcome::Infeasible;
            }
        }
    }
    // shift and split variables onto nonnegative columns
    let mut subs = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut rows: Vec<Row> = Vec::new();
    for j in 0..n {
        let sub = match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), u) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = u {
                    rows.push((vec![(col, Rational::one())], ConstraintKind::Le, u - l));
                }
                Substitution {
                    offset: l.clone(),
                    columns: vec![(col, true)],
                }
            }
            (None, Some(u)) => {
                ncols += 1;
                Substitution {
                    offset: u.clone(),
                    columns: vec![(ncols - 1, false)],
                }
            }
            (None, None) => {
                ncols += 2;
                Substitution {
                    offset: Rational::zero(),
                    columns: vec![(ncols - 2, true), (ncols - 1, false)],
                }
            }
        };
        subs.push(sub);
    }
    let expand = |coeffs: &[(usize, Rational)]| {
        let mut dense = vec![Rational::zero(); ncols];
        let mut constant = Rational::zero();
        for (j, c) in coeffs {
            constant += c * &subs[*j].offset;
            for &(col, positive) in &subs[*j].columns {
                if positive {
                    dense[col] += c;
                } else {
                    dense[col] -= c;
                }
            }
        }
        (dense, constant)
    };
    let mut dense_rows = Vec::new();
    for (sparse, kind, rhs) in rows {
        let mut dense = vec![Rational::zero(); ncols];
        for (c, v) in sparse {
            dense[c] = v;
        }
        dense_rows.push((dense, kind, rhs));
    }
    for c in &lp.constraints {
        let (dense, constant) = expand(&c.coeffs);
        dense_rows.push((dense, c.kind, &c.rhs - constant));
    }
    let objective: Vec<(usize, Rational)> = lp
        .objective
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, c.clone()))
        .collect();
    let (obj_dense, obj_constant) = expand(&objective);

    // normalize to nonnegative right-hand sides
    for (dense, kind, rhs) in dense_rows.iter_mut() {
        if rhs.is_negative() {
            dense.iter_mut().for_each(|v| *v = -v.clone());
            *rhs = -rhs.clone();
            *kind = match *kind {
                ConstraintKind::Le => ConstraintKind::Ge,
                ConstraintKind::Ge => ConstraintKind::Le,
                ConstraintKind::Eq => ConstraintKind::Eq,
            };
        }
    }
    let m = dense_rows.len();
    let slack_count = dense_rows
        .iter()
        .filter(|(_, k, _)| *k != ConstraintKind::Eq)
        .count();
    let art_count = dense_rows
        .iter()
        .filter(|(_, k, _)| *k != ConstraintKind::Le)
        .count();
    let width = ncols + slack_count + art_count;
    let first_art = ncols + slack_count;
    let mut table = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        width,
    };
    let (mut slack, mut art) = (ncols, first_art);
    for (dense, kind, rhs) in dense_rows {
        let mut row = dense;
        row.resize(width + 1, Rational::zero());
        row[width] = rhs;
        match kind {
            ConstraintKind::Le => {
                row[slack] = Rational::one();
                table.basis.push(slack);
                slack += 1;
            }
            ConstraintKind::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
                row[art] = Rational::one();
                table.basis.push(art);
                art += 1;
            }
            ConstraintKind::Eq => {
                row[art] = Rational::one();
                table.basis.push(art);
                art += 1;
            }
        }
        table.rows.push(row);
    }

    if art_count > 0 {
        let mut cost = vec![Rational::zero(); width];
        for c in cost.iter_mut().skip(first_art) {
            *c = Rational::one();
        }
        let all = vec![true; width];
        table.optimize(&cost, &all);
        let infeasibility = table
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= first_art)
            .fold(Rational::zero(), |acc, (i, _)| acc + table.rhs(i));
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis
        let mut i = 0;
        while i < table.rows.len() {
            if table.basis[i] >= first_art {
                match (0..first_art).find(|&j| !table.rows[i][j].is_zero()) {
                    Some(j) => table.pivot(i, j),
                    None => {
                        table.rows.remove(i);
                        table.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Rational::zero(); width];
    cost[..ncols].clone_from_slice(&obj_dense);
    let enterable: Vec<bool> = (0..width).map(|j| j < first_art).collect();
    if !table.optimize(&cost, &enterable) {
        return LpOutcome::Unbounded;
    }
    let mut y = vec![Rational::zero(); width];
    for (i, &b) in table.basis.iter().enumerate() {
        y[b] = table.rhs(i).clone();
    }
    let point: Vec<Rational> = subs
        .iter()
        .map(|s| {
            s.columns
                .iter()
                .fold(s.offset.clone(), |acc, &(col, positive)| {
                    if positive {
                        acc + &y[col]
                    } else {
                        acc - &y[col]
                    }
                })
        })
        .collect();
    let value = obj_dense
        .iter()
        .zip(&y)
        .fold(obj_constant, |acc, (c, v)| acc + c * v);
    LpOutcome::Optimal { point, value }
}
