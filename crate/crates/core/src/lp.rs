//! Exact linear programming over the rationals.
//!
//! Dense two-phase simplex with Bland's pivoting rule. Variables with a lower bound
//! `l` are shifted (`x = l + y`, `y >= 0`); free variables are split into a
//! difference of two nonnegative columns. The instances built by the decision
//! procedures have a few dozen columns at most, so a dense tableau is adequate.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    /// `None` means the variable is free.
    pub lower: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Feasibility,
    Optimize {
        terms: Vec<(usize, Rational)>,
        direction: Direction,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        assignment: Vec<Rational>,
    },
    Feasible {
        assignment: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn assignment(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { assignment, .. } | LpOutcome::Feasible { assignment } => {
                Some(assignment)
            }
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl Default for LinearProgram {
    fn default() -> Self {
        Self::new()
    }
}

impl LinearProgram {
    pub fn new() -> Self {
        LinearProgram {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Objective::Feasibility,
        }
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: Option<Rational>) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            lower,
        });
        self.variables.len() - 1
    }

    pub fn add_nonneg(&mut self, name: impl Into<String>) -> usize {
        self.add_variable(name, Some(Rational::zero()))
    }

    pub fn add_free(&mut self, name: impl Into<String>) -> usize {
        self.add_variable(name, None)
    }

    /// Adds `Σ coef·x rel rhs`. Repeated indices are summed.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) {
        let terms: Vec<(usize, Rational)> = terms.into_iter().collect();
        debug_assert!(terms.iter().all(|(v, _)| *v < self.variables.len()));
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
        });
    }

    pub fn set_objective(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        direction: Direction,
    ) {
        self.objective = Objective::Optimize {
            terms: terms.into_iter().collect(),
            direction,
        };
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    /// Dense coefficient row of constraint `i`.
    pub fn row(&self, i: usize) -> Vec<Rational> {
        densify(&self.constraints[i].terms, self.variables.len())
    }

    /// Checks an assignment against every constraint and bound, exactly.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.variables.len() {
            return false;
        }
        let bounds_ok = self
            .variables
            .iter()
            .zip(x)
            .all(|(v, val)| v.lower.as_ref().is_none_or(|l| val >= l));
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs = eval(&c.terms, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Option<Rational> {
        match &self.objective {
            Objective::Feasibility => None,
            Objective::Optimize { terms, .. } => Some(eval(terms, x)),
        }
    }
}

fn densify(terms: &[(usize, Rational)], n: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); n];
    for (v, c) in terms {
        row[*v] += c;
    }
    row
}

fn eval(terms: &[(usize, Rational)], x: &[Rational]) -> Rational {
    terms
        .iter()
        .fold(Rational::zero(), |acc, (v, c)| acc + c * &x[*v])
}

/// How an original variable maps onto tableau columns.
enum ColumnMap {
    Shifted { col: usize, lower: Rational },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize, objective: &mut [Rational]) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.cols).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &k in &nz {
                let delta = &factor * &pivot_row[k];
                row[k] -= delta;
            }
        }
        if !objective[c].is_zero() {
            let factor = objective[c].clone();
            for &k in &nz {
                let delta = &factor * &pivot_row[k];
                objective[k] -= delta;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for minimizing `cost · x` in the current basis.
    fn objective_row(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let factor = cost[b].clone();
            for (k, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    obj[k] -= &factor * v;
                }
            }
        }
        obj
    }

    /// Minimizes with Bland's rule over the `allowed` columns.
    /// Returns `false` if the objective is unbounded below.
    fn minimize(&mut self, objective: &mut [Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| allowed[j] && objective[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, objective);
        }
    }

    fn values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(i).clone();
        }
        x
    }
}

/// Solves `lp` exactly. Deterministic for a fixed input.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.variables.len();
    let mut maps = Vec::with_capacity(n);
    let mut structural = 0usize;
    for v in &lp.variables {
        match &v.lower {
            Some(l) => {
                maps.push(ColumnMap::Shifted {
                    col: structural,
                    lower: l.clone(),
                });
                structural += 1;
            }
            None => {
                maps.push(ColumnMap::Split {
                    pos: structural,
                    neg: structural + 1,
                });
                structural += 2;
            }
        }
    }

    // Rows over structural columns with nonnegative right-hand sides.
    struct Row {
        coefs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    }
    let mut rows = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        let mut coefs = vec![Rational::zero(); structural];
        let mut rhs = c.rhs.clone();
        for (v, a) in &c.terms {
            match &maps[*v] {
                ColumnMap::Shifted { col, lower } => {
                    coefs[*col] += a;
                    rhs -= a * lower;
                }
                ColumnMap::Split { pos, neg } => {
                    coefs[*pos] += a;
                    coefs[*neg] -= a;
                }
            }
        }
        let mut relation = c.relation;
        if rhs.is_negative() {
            for v in coefs.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push(Row {
            coefs,
            relation,
            rhs,
        });
    }

    let slack_count = rows
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();
    let artificial_count = rows
        .iter()
        .filter(|r| r.relation != Relation::Le)
        .count();
    let cols = structural + slack_count + artificial_count;
    let first_artificial = structural + slack_count;

    let mut tableau = Tableau {
        rows: Vec::with_capacity(rows.len()),
        basis: Vec::with_capacity(rows.len()),
        cols,
    };
    let mut next_slack = structural;
    let mut next_art = first_artificial;
    for r in rows {
        let mut line = r.coefs;
        line.resize(cols + 1, Rational::zero());
        line[cols] = r.rhs;
        match r.relation {
            Relation::Le => {
                line[next_slack] = Rational::from_integer(1.into());
                tableau.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                line[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                line[next_art] = Rational::from_integer(1.into());
                tableau.basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                line[next_art] = Rational::from_integer(1.into());
                tableau.basis.push(next_art);
                next_art += 1;
            }
        }
        tableau.rows.push(line);
    }

    let mut allowed = vec![true; cols];
    if artificial_count > 0 {
        let mut cost = vec![Rational::zero(); cols];
        for c in cost.iter_mut().skip(first_artificial) {
            *c = Rational::from_integer(1.into());
        }
        let mut obj = tableau.objective_row(&cost);
        tableau.minimize(&mut obj, &allowed);
        let infeasibility: Rational = tableau
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= first_artificial)
            .map(|(i, _)| tableau.rhs(i).clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tableau.rows.len() {
            if tableau.basis[i] >= first_artificial {
                let replacement =
                    (0..first_artificial).find(|&j| !tableau.rows[i][j].is_zero());
                match replacement {
                    Some(j) => {
                        let mut dummy = vec![Rational::zero(); cols + 1];
                        tableau.pivot(i, j, &mut dummy);
                    }
                    None => {
                        tableau.rows.remove(i);
                        tableau.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for a in allowed.iter_mut().skip(first_artificial) {
            *a = false;
        }
    }

    let (terms, direction) = match &lp.objective {
        Objective::Feasibility => {
            return LpOutcome::Feasible {
                assignment: recover(&maps, &tableau.values()),
            }
        }
        Objective::Optimize { terms, direction } => (terms, *direction),
    };

    let mut cost = vec![Rational::zero(); cols];
    for (v, a) in terms {
        let a = match direction {
            Direction::Min => a.clone(),
            Direction::Max => -a.clone(),
        };
        match &maps[*v] {
            ColumnMap::Shifted { col, .. } => cost[*col] += &a,
            ColumnMap::Split { pos, neg } => {
                cost[*pos] += &a;
                cost[*neg] -= &a;
            }
        }
    }
    let mut obj = tableau.objective_row(&cost);
    if !tableau.minimize(&mut obj, &allowed) {
        return LpOutcome::Unbounded;
    }
    let assignment = recover(&maps, &tableau.values());
    let value = eval(terms, &assignment);
    LpOutcome::Optimal { value, assignment }
}

fn recover(maps: &[ColumnMap], y: &[Rational]) -> Vec<Rational> {
    maps.iter()
        .map(|m| match m {
            ColumnMap::Shifted { col, lower } => lower + &y[*col],
            ColumnMap::Split { pos, neg } => &y[*pos] - &y[*neg],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn maximize_single_bound() {
        let mut lp = LinearProgram::new();
        let x = lp.add_nonneg("x");
        lp.add_constraint([(x, int(1))], Relation::Le, int(3));
        lp.set_objective([(x, int(1))], Direction::Max);
        let out = solve_lp(&lp);
        assert_eq!(out.value(), Some(&int(3)));
        assert_eq!(out.assignment().unwrap(), &[int(3)]);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new();
        let x = lp.add_free("x");
        lp.add_constraint([(x, int(1))], Relation::Ge, int(1));
        lp.add_constraint([(x, int(1))], Relation::Le, int(0));
        assert_eq!(solve_lp(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn single_self_loop_mean_payoff_lp() {
        // minimize x s.t. z >= -x + (-1) + z
        let mut lp = LinearProgram::new();
        let x = lp.add_free("x");
        let z = lp.add_free("z");
        lp.add_constraint([(z, int(1)), (x, int(1)), (z, int(-1))], Relation::Ge, int(-1));
        lp.set_objective([(x, int(1))], Direction::Min);
        assert_eq!(solve_lp(&lp).value(), Some(&int(-1)));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new();
        let x = lp.add_free("x");
        lp.add_constraint([(x, int(1))], Relation::Ge, int(0));
        lp.set_objective([(x, int(1))], Direction::Max);
        assert_eq!(solve_lp(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 1 (twice), x - y = 1/2
        let mut lp = LinearProgram::new();
        let x = lp.add_nonneg("x");
        let y = lp.add_nonneg("y");
        lp.add_constraint([(x, int(1)), (y, int(1))], Relation::Eq, int(1));
        lp.add_constraint([(x, int(2)), (y, int(2))], Relation::Eq, int(2));
        lp.add_constraint([(x, int(1)), (y, int(-1))], Relation::Eq, ratio(1, 2));
        let out = solve_lp(&lp);
        assert_eq!(out.assignment().unwrap(), &[ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn lower_bounds_shift() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Some(int(2)));
        let y = lp.add_variable("y", Some(int(-3)));
        lp.add_constraint([(x, int(1)), (y, int(1))], Relation::Le, int(10));
        lp.set_objective([(x, int(1)), (y, int(2))], Direction::Min);
        let out = solve_lp(&lp);
        assert_eq!(out.value(), Some(&int(-4)));
    }

    /// Independent oracle: enumerate every basic solution of a box-bounded LP
    /// with `<=` constraints and keep the best feasible one.
    fn vertex_enumeration(
        a: &[Vec<Rational>],
        b: &[Rational],
        c: &[Rational],
        upper: &Rational,
    ) -> Option<Rational> {
        let n = c.len();
        // hyperplanes: constraint rows, x_j = 0, x_j = upper
        let mut planes: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for (row, rhs) in a.iter().zip(b) {
            planes.push((row.clone(), rhs.clone()));
        }
        for j in 0..n {
            let mut e = vec![int(0); n];
            e[j] = int(1);
            planes.push((e.clone(), int(0)));
            planes.push((e, upper.clone()));
        }
        let feasible = |x: &[Rational]| {
            x.iter().all(|v| *v >= int(0) && v <= upper)
                && a.iter().zip(b).all(|(row, rhs)| {
                    row.iter().zip(x).fold(int(0), |s, (p, q)| s + p * q) <= *rhs
                })
        };
        let mut best: Option<Rational> = None;
        let m = planes.len();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let mat: Vec<Vec<Rational>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
            let rhs: Vec<Rational> = idx.iter().map(|&i| planes[i].1.clone()).collect();
            if let Some(x) = crate::linalg::solve(mat, rhs) {
                if feasible(&x) {
                    let val = c.iter().zip(&x).fold(int(0), |s, (p, q)| s + p * q);
                    if best.as_ref().is_none_or(|bv| val > *bv) {
                        best = Some(val);
                    }
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                if idx[k] < m - n + k {
                    idx[k] += 1;
                    for t in k + 1..n {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-4i64..=4, 1i64..=3).prop_map(|(a, b)| ratio(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn simplex_matches_vertex_enumeration(
            n in 1usize..=4,
            rows in proptest::collection::vec((proptest::collection::vec(small_rat(), 4), small_rat()), 0..4),
            c in proptest::collection::vec(small_rat(), 4),
        ) {
            let upper = int(5);
            let a: Vec<Vec<Rational>> = rows.iter().map(|(r, _)| r[..n].to_vec()).collect();
            let b: Vec<Rational> = rows.iter().map(|(_, rhs)| rhs.clone()).collect();
            let c = c[..n].to_vec();
            let mut lp = LinearProgram::new();
            let vars: Vec<usize> = (0..n).map(|j| lp.add_nonneg(format!("x{j}"))).collect();
            for &v in &vars {
                lp.add_constraint([(v, int(1))], Relation::Le, upper.clone());
            }
            for (row, rhs) in a.iter().zip(&b) {
                lp.add_constraint(vars.iter().map(|&v| (v, row[v].clone())), Relation::Le, rhs.clone());
            }
            lp.set_objective(vars.iter().map(|&v| (v, c[v].clone())), Direction::Max);
            let out = solve_lp(&lp);
            let oracle = vertex_enumeration(&a, &b, &c, &upper);
            match (&out, oracle) {
                (LpOutcome::Optimal { value, assignment }, Some(best)) => {
                    prop_assert_eq!(value, &best);
                    prop_assert!(lp.is_satisfied_by(assignment));
                }
                (LpOutcome::Infeasible, None) => {}
                (o, b) => prop_assert!(false, "simplex {:?} vs oracle {:?}", o, b),
            }
            // determinism
            prop_assert_eq!(solve_lp(&lp), out);
        }
    }
}
