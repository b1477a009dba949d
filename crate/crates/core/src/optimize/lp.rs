//! Linear programs and a two-phase simplex solver.
//!
//! The dense solver uses Bland's rule and runs over `f64` or exact
//! rationals. Large programs go to the sparse `minilp` backend.

use num_traits::Signed;

use crate::algebra::{Field, Rational};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Variable bounds; `None` means unbounded on that side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Bound {
    pub const FREE: Bound = Bound { lower: None, upper: None };
    pub const NON_NEGATIVE: Bound = Bound { lower: Some(0.0), upper: None };

    pub fn boxed(lower: f64, upper: f64) -> Bound {
        Bound { lower: Some(lower), upper: Some(upper) }
    }
}

/// `minimize objective · x` subject to the constraints and bounds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn add_variable(&mut self, cost: f64, bound: Bound) -> usize {
        self.objective.push(cost);
        self.bounds.push(bound);
        self.objective.len() - 1
    }

    pub fn add_constraint(&mut self, coefficients: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint { coefficients, sense, rhs });
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.coefficients.iter().map(|&(j, a)| a * x[j]).sum();
            let v = match c.sense {
                Sense::Le => lhs - c.rhs,
                Sense::Ge => c.rhs - lhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (b, &v) in self.bounds.iter().zip(x) {
            if let Some(l) = b.lower {
                worst = worst.max(l - v);
            }
            if let Some(u) = b.upper {
                worst = worst.max(v - u);
            }
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return invalid(format!("{} bounds for {n} variables", self.bounds.len()));
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return invalid("objective coefficients must be finite");
        }
        for b in &self.bounds {
            if b.lower.is_some_and(|v| !v.is_finite()) || b.upper.is_some_and(|v| !v.is_finite()) {
                return invalid("bounds must be finite or absent");
            }
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return invalid("constraint right-hand sides must be finite");
            }
            for &(j, a) in &c.coefficients {
                if j >= n {
                    return invalid(format!("constraint refers to variable {j} of {n}"));
                }
                if !a.is_finite() {
                    return invalid("constraint coefficients must be finite");
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; NaN unless optimal.
    pub value: f64,
    pub x: Vec<f64>,
    /// Whether `x` is a basic solution.
    pub vertex: bool,
    /// Exact optimum and point when solved in rational arithmetic.
    pub exact: Option<(Rational, Vec<Rational>)>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        LpSolution { status, value: f64::NAN, x: Vec::new(), vertex: false, exact: None }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LpBackend {
    /// Dense simplex for small programs, sparse backend otherwise.
    #[default]
    Auto,
    Dense,
    Exact,
    Sparse,
}

/// Dense tableau size above which [`LpBackend::Auto`] uses the sparse backend.
pub const DENSE_LIMIT: usize = 400_000;

pub fn solve_lp(lp: &LinearProgram, backend: LpBackend) -> Result<LpSolution> {
    lp.validate()?;
    match backend {
        LpBackend::Dense => solve_dense::<f64>(lp),
        LpBackend::Exact => solve_dense::<Rational>(lp),
        LpBackend::Sparse => solve_sparse(lp),
        LpBackend::Auto => {
            let cols = lp.num_variables() * 2 + lp.constraints.len();
            if cols * (lp.constraints.len() + 1) > DENSE_LIMIT {
                solve_sparse(lp)
            } else {
                solve_dense::<f64>(lp)
            }
        }
    }
}

/// Scalars the dense simplex runs over.
trait Scalar: Field {
    const EXACT: bool;
    fn from_f64(v: f64) -> Self;
    fn is_positive(&self) -> bool;
    fn less(&self, other: &Self) -> bool;
    fn exact(&self) -> Option<Rational>;
    /// True zero, without tolerance.
    fn is_exactly_zero(&self) -> bool;
    /// Flushes round-off residue to zero.
    fn cleaned(self) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_f64(v: f64) -> Self {
        v
    }
    fn is_positive(&self) -> bool {
        *self > crate::algebra::FLOAT_ZERO_TOL
    }
    fn less(&self, other: &Self) -> bool {
        *self < *other - crate::algebra::FLOAT_ZERO_TOL
    }
    fn exact(&self) -> Option<Rational> {
        None
    }
    fn is_exactly_zero(&self) -> bool {
        *self == 0.0
    }
    fn cleaned(self) -> Self {
        if self.abs() < 1e-12 {
            0.0
        } else {
            self
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite")
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn less(&self, other: &Self) -> bool {
        self < other
    }
    fn exact(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn is_exactly_zero(&self) -> bool {
        Field::is_zero(self)
    }
    fn cleaned(self) -> Self {
        self
    }
}

/// How an original variable is expressed in non-negative standard-form
/// variables.
#[derive(Clone, Copy, Debug)]
enum Substitution {
    /// `x = shift + s[a]`
    Shifted { col: usize, shift: f64 },
    /// `x = shift - s[a]`
    Reflected { col: usize, shift: f64 },
    /// `x = s[a] - s[b]`
    Split { pos: usize, neg: usize },
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    cost: Vec<S>,
    cost_rhs: S,
}

const MAX_PIVOTS: usize = 200_000;
const PIVOT_TOL: f64 = 1e-7;
const FEAS_TOL: f64 = 1e-9;

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].inverse().expect("nonzero pivot");
        for v in self.rows[r].iter_mut() {
            *v = v.times(&inv).cleaned();
        }
        self.rows[r][c] = S::one();
        self.rhs[r] = self.rhs[r].times(&inv).cleaned();
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let support: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_exactly_zero()).collect();
        let eliminate = |row: &mut Vec<S>, rhs: &mut S| {
            let a = row[c].clone();
            if a.is_exactly_zero() {
                return;
            }
            for &j in &support {
                row[j] = row[j].minus(&a.times(&pivot_row[j])).cleaned();
            }
            row[c] = S::zero();
            *rhs = rhs.minus(&a.times(&pivot_rhs)).cleaned();
        };
        for i in 0..self.rows.len() {
            if i != r {
                let mut rhs = self.rhs[i].clone();
                eliminate(&mut self.rows[i], &mut rhs);
                self.rhs[i] = rhs;
            }
        }
        let mut cost_rhs = self.cost_rhs.clone();
        eliminate(&mut self.cost, &mut cost_rhs);
        self.cost_rhs = cost_rhs;
        self.basis[r] = c;
    }

    /// Runs Bland's rule over the columns in `allowed`. Returns false when
    /// the program is unbounded.
    fn optimize(&mut self, allowed: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].negated().is_positive()) else {
                return Ok(true);
            };
            let leave = if S::EXACT { self.bland_row(enter) } else { self.harris_row(enter) };
            match leave {
                None => return Ok(false),
                Some(r) => self.pivot(r, enter),
            }
        }
        Err(Error::Consistency("simplex iteration limit reached".into()))
    }

    /// Minimum-ratio row, ties to the lowest basic column.
    fn bland_row(&self, enter: usize) -> Option<usize> {
        let mut leave: Option<(usize, S)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs[i].div(a).expect("positive");
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio.less(best) || (!best.less(&ratio) && self.basis[i] < self.basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        leave.map(|(r, _)| r)
    }

    /// Two-pass ratio test: among rows whose ratio is within the feasibility
    /// tolerance of the minimum, take the largest pivot element.
    fn harris_row(&self, enter: usize) -> Option<usize> {
        let candidates: Vec<(usize, f64, f64)> = (0..self.rows.len())
            .filter_map(|i| {
                let a = self.rows[i][enter].to_f64();
                (a > PIVOT_TOL).then(|| (i, a, self.rhs[i].to_f64().max(0.0)))
            })
            .collect();
        let bound = candidates
            .iter()
            .map(|&(_, a, b)| (b + FEAS_TOL) / a)
            .fold(f64::INFINITY, f64::min);
        candidates
            .iter()
            .filter(|&&(_, a, b)| b / a <= bound)
            .max_by(|x, y| x.1.total_cmp(&y.1).then_with(|| self.basis[y.0].cmp(&self.basis[x.0])))
            .map(|&(i, _, _)| i)
    }
}

fn solve_dense<S: Scalar>(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_variables();
    // standard-form columns for the original variables
    let mut subs = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut extra_rows: Vec<(usize, f64)> = Vec::new();
    for b in &lp.bounds {
        let sub = match (b.lower, b.upper) {
            (Some(l), u) => {
                if let Some(u) = u {
                    if u < l {
                        return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
                    }
                    extra_rows.push((ncols, u - l));
                }
                Substitution::Shifted { col: ncols, shift: l }
            }
            (None, Some(u)) => Substitution::Reflected { col: ncols, shift: u },
            (None, None) => {
                ncols += 1;
                Substitution::Split { pos: ncols - 1, neg: ncols }
            }
        };
        ncols += 1;
        subs.push(sub);
    }

    // rows as (dense coefficients over standard columns, sense, rhs)
    let mut rows: Vec<(Vec<S>, Sense, S)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![S::zero(); ncols];
        let mut rhs = S::from_f64(c.rhs);
        for &(j, a) in &c.coefficients {
            let a = S::from_f64(a);
            match subs[j] {
                Substitution::Shifted { col, shift } => {
                    coeffs[col] = coeffs[col].plus(&a);
                    rhs = rhs.minus(&a.times(&S::from_f64(shift)));
                }
                Substitution::Reflected { col, shift } => {
                    coeffs[col] = coeffs[col].minus(&a);
                    rhs = rhs.minus(&a.times(&S::from_f64(shift)));
                }
                Substitution::Split { pos, neg } => {
                    coeffs[pos] = coeffs[pos].plus(&a);
                    coeffs[neg] = coeffs[neg].minus(&a);
                }
            }
        }
        rows.push((coeffs, c.sense, rhs));
    }
    for &(col, width) in &extra_rows {
        let mut coeffs = vec![S::zero(); ncols];
        coeffs[col] = S::one();
        rows.push((coeffs, Sense::Le, S::from_f64(width)));
    }

    let mut cost = vec![S::zero(); ncols];
    let mut cost_shift = S::zero();
    for (j, &cj) in lp.objective.iter().enumerate() {
        let c = S::from_f64(cj);
        match subs[j] {
            Substitution::Shifted { col, shift } => {
                cost[col] = c.clone();
                cost_shift = cost_shift.plus(&c.times(&S::from_f64(shift)));
            }
            Substitution::Reflected { col, shift } => {
                cost[col] = c.negated();
                cost_shift = cost_shift.plus(&c.times(&S::from_f64(shift)));
            }
            Substitution::Split { pos, neg } => {
                cost[pos] = c.clone();
                cost[neg] = c.negated();
            }
        }
    }

    // slacks, then artificials
    let m = rows.len();
    let slack_count = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let total = ncols + slack_count + m;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cost: vec![S::zero(); total],
        cost_rhs: S::zero(),
    };
    let mut slack = ncols;
    for (i, (coeffs, sense, rhs)) in rows.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(total, S::zero());
        match sense {
            Sense::Le => {
                row[slack] = S::one();
                slack += 1;
            }
            Sense::Ge => {
                row[slack] = S::one().negated();
                slack += 1;
            }
            Sense::Eq => {}
        }
        let mut rhs = rhs;
        if rhs.negated().is_positive() {
            for v in row.iter_mut() {
                *v = v.negated();
            }
            rhs = rhs.negated();
        } else if rhs.is_zero() {
            rhs = S::zero();
        }
        let art = ncols + slack_count + i;
        row[art] = S::one();
        t.rows.push(row);
        t.rhs.push(rhs);
        t.basis.push(art);
    }
    let art_start = ncols + slack_count;

    // phase one: minimize the sum of artificials
    for i in 0..m {
        for j in 0..art_start {
            t.cost[j] = t.cost[j].minus(&t.rows[i][j]);
        }
        t.cost_rhs = t.cost_rhs.minus(&t.rhs[i]);
    }
    if !t.optimize(art_start)? {
        return Err(Error::Consistency("phase one of the simplex method diverged".into()));
    }
    if t.cost_rhs.negated().is_positive() {
        return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= art_start {
            match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    for row in t.rows.iter_mut() {
        row.truncate(art_start);
    }

    // phase two
    let mut full_cost = cost;
    full_cost.resize(art_start, S::zero());
    t.cost = full_cost.clone();
    t.cost_rhs = S::zero();
    for i in 0..t.rows.len() {
        let cb = full_cost[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..art_start {
            t.cost[j] = t.cost[j].minus(&cb.times(&t.rows[i][j]));
        }
        t.cost_rhs = t.cost_rhs.minus(&cb.times(&t.rhs[i]));
    }
    if !t.optimize(art_start)? {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut s = vec![S::zero(); art_start];
    for (i, &b) in t.basis.iter().enumerate() {
        s[b] = t.rhs[i].clone();
    }
    let x: Vec<S> = subs
        .iter()
        .map(|sub| match *sub {
            Substitution::Shifted { col, shift } => S::from_f64(shift).plus(&s[col]),
            Substitution::Reflected { col, shift } => S::from_f64(shift).minus(&s[col]),
            Substitution::Split { pos, neg } => s[pos].minus(&s[neg]),
        })
        .collect();
    let value = t.cost_rhs.negated().plus(&cost_shift);
    let exact = value.exact().map(|v| (v, x.iter().map(|e| e.exact().expect("exact")).collect()));
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: value.to_f64(),
        x: x.iter().map(Field::to_f64).collect(),
        vertex: true,
        exact,
    })
}

fn solve_sparse(lp: &LinearProgram) -> Result<LpSolution> {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = lp
        .objective
        .iter()
        .zip(&lp.bounds)
        .map(|(&c, b)| {
            problem.add_var(c, (b.lower.unwrap_or(f64::NEG_INFINITY), b.upper.unwrap_or(f64::INFINITY)))
        })
        .collect();
    for c in &lp.constraints {
        let mut expr = minilp::LinearExpr::empty();
        for &(j, a) in &c.coefficients {
            expr.add(vars[j], a);
        }
        let op = match c.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Eq => ComparisonOp::Eq,
            Sense::Ge => ComparisonOp::Ge,
        };
        problem.add_constraint(expr, op, c.rhs);
    }
    match problem.solve() {
        Ok(sol) => {
            let x: Vec<f64> = vars.iter().map(|&v| sol[v]).collect();
            // minilp can report an infinite optimum instead of unboundedness
            if x.iter().any(|v| !v.is_finite()) {
                return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
            }
            Ok(LpSolution { status: LpStatus::Optimal, value: lp.objective_value(&x), x, vertex: true, exact: None })
        }
        Err(minilp::Error::Infeasible) => Ok(LpSolution::without_optimum(LpStatus::Infeasible)),
        Err(minilp::Error::Unbounded) => Ok(LpSolution::without_optimum(LpStatus::Unbounded)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_backends() -> [LpBackend; 3] {
        [LpBackend::Dense, LpBackend::Exact, LpBackend::Sparse]
    }

    #[test]
    fn single_lower_bound() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(1.0, Bound::FREE);
        lp.add_constraint(vec![(x, 1.0)], Sense::Ge, 3.0);
        for b in all_backends() {
            let s = solve_lp(&lp, b).unwrap();
            assert!(s.is_optimal());
            assert!((s.value - 3.0).abs() < 1e-9, "{b:?}");
        }
    }

    #[test]
    fn two_variable_vertex() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(1.0, Bound::NON_NEGATIVE);
        let y = lp.add_variable(1.0, Bound::NON_NEGATIVE);
        lp.add_constraint(vec![(x, 1.0), (y, 1.0)], Sense::Ge, 1.0);
        for b in all_backends() {
            let s = solve_lp(&lp, b).unwrap();
            assert!((s.value - 1.0).abs() < 1e-9);
            assert!(s.vertex);
            // a vertex has one of the coordinates at zero
            assert!(s.x[0].abs() < 1e-9 || s.x[1].abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(1.0, Bound::NON_NEGATIVE);
        lp.add_constraint(vec![(x, 1.0)], Sense::Le, -1.0);
        for b in all_backends() {
            assert_eq!(solve_lp(&lp, b).unwrap().status, LpStatus::Infeasible);
        }
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(-1.0, Bound::NON_NEGATIVE);
        lp.add_constraint(vec![(x, 1.0)], Sense::Ge, 1.0);
        for b in all_backends() {
            assert_eq!(solve_lp(&lp, b).unwrap().status, LpStatus::Unbounded, "{b:?} {:?}", solve_lp(&lp, b));
        }
    }

    #[test]
    fn boxed_and_upper_bounds() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(-1.0, Bound::boxed(-2.0, 5.0));
        let y = lp.add_variable(1.0, Bound { lower: None, upper: Some(4.0) });
        lp.add_constraint(vec![(x, 1.0), (y, 1.0)], Sense::Ge, 0.5);
        for b in all_backends() {
            let s = solve_lp(&lp, b).unwrap();
            assert!((s.value - (-5.0 - 4.5)).abs() < 1e-9, "{b:?} {s:?}");
        }
    }

    #[test]
    fn exact_mode_is_exact() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(1.0, Bound::NON_NEGATIVE);
        lp.add_constraint(vec![(x, 3.0)], Sense::Ge, 1.0);
        let s = solve_lp(&lp, LpBackend::Exact).unwrap();
        assert_eq!(s.exact.unwrap().0, Rational::new(1.into(), 3.into()));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable(1.0, Bound::NON_NEGATIVE);
        let y = lp.add_variable(2.0, Bound::NON_NEGATIVE);
        lp.add_constraint(vec![(x, 1.0), (y, 1.0)], Sense::Eq, 2.0);
        lp.add_constraint(vec![(x, 2.0), (y, 2.0)], Sense::Eq, 4.0);
        for b in all_backends() {
            assert!((solve_lp(&lp, b).unwrap().value - 2.0).abs() < 1e-9);
        }
    }
}
