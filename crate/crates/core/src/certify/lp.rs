//! Exact linear programming over the rationals.
//!
//! Problems have the form `maximize c.x subject to A x <= b` with free
//! variables. They are solved through their dual `minimize b.y subject to
//! A^T y = c, y >= 0`, whose tableau has one row per primal variable and is
//! therefore small when there are many more constraints than variables.
//! The tableau is kept fraction-free (integer-preserving pivoting with a
//! common divisor). Pivoting follows the most negative reduced cost and
//! falls back to the smallest-index rule when progress stalls, so runs are
//! deterministic and cannot cycle.
//!
//! A floating-point run of the same simplex usually finds the optimal basis
//! first. That basis is accepted only after exact checks of primal and dual
//! feasibility, which together prove optimality; otherwise the exact tableau
//! takes over.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub vars: Vec<String>,
    pub objective: Vec<Rational>,
    /// Each row reads `coeffs . x <= rhs`.
    pub rows: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Option<Vec<Rational>>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(vars: Vec<String>, objective: Vec<Rational>) -> Self {
        assert_eq!(vars.len(), objective.len());
        LinearProgram {
            vars,
            objective,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars.len());
        self.rows.push(Constraint { coeffs, rhs });
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Largest violation `a.x - b` over all rows (nonpositive iff feasible).
    pub fn max_violation(&self, x: &[Rational]) -> Rational {
        self.rows
            .iter()
            .map(|r| dot(&r.coeffs, x) - &r.rhs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        !self.max_violation(x).is_positive()
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a rational vector to integers by the lcm of its denominators.
fn integerize(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints = v.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    (ints, l)
}

/// Fraction-free tableau; the represented tableau is `t / div`.
struct Tableau {
    /// Constraint rows, each of length `cols + 1` (last entry is the rhs).
    rows: Vec<Vec<BigInt>>,
    /// Objective rows (phase 1, phase 2): reduced costs and `-value`.
    obj: [Vec<BigInt>; 2],
    basis: Vec<usize>,
    div: BigInt,
    /// Columns `>= structural` are artificial.
    structural: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.rows.first().map_or(self.obj[0].len(), |r| r.len()) - 1
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        debug_assert!(piv.is_positive());
        let width = self.rows[p].len();
        let (div, prow) = (&self.div, self.rows[p].clone());
        let update = |row: &mut Vec<BigInt>| {
            let f = row[q].clone();
            if f.is_zero() {
                if !div.is_one() || !piv.is_one() {
                    for x in row.iter_mut() {
                        if !x.is_zero() {
                            *x = &*x * &piv / div;
                        }
                    }
                }
                return;
            }
            for j in 0..width {
                let v = &piv * &row[j] - &f * &prow[j];
                row[j] = if div.is_one() { v } else { v / div };
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != p {
                update(row);
            }
        }
        for row in self.obj.iter_mut() {
            update(row);
        }
        self.div = piv;
        self.basis[p] = q;
    }

    /// Entering column: most negative reduced cost, or the smallest index
    /// with negative reduced cost under Bland's rule.
    fn entering(&self, phase: usize, limit: usize, bland: bool) -> Option<usize> {
        let row = &self.obj[phase][..limit];
        if bland {
            return row.iter().position(|v| v.is_negative());
        }
        let mut best: Option<usize> = None;
        for (j, v) in row.iter().enumerate() {
            if v.is_negative() && best.is_none_or(|b| v < &row[b]) {
                best = Some(j);
            }
        }
        best
    }

    /// Ratio test, ties broken by smallest basic variable index.
    fn leaving(&self, q: usize) -> Option<usize> {
        let rhs = self.rhs();
        let mut best: Option<usize> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[q].is_positive() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let lhs = &row[rhs] * &self.rows[b][q];
                    let rhs_v = &self.rows[b][rhs] * &row[q];
                    match lhs.cmp(&rhs_v) {
                        Ordering::Less => Some(i),
                        Ordering::Equal if self.basis[i] < self.basis[b] => Some(i),
                        _ => Some(b),
                    }
                }
            };
        }
        best
    }

    /// Runs simplex iterations on `phase`; returns false when unbounded.
    /// Switches to Bland's rule after a run of degenerate pivots, which rules
    /// out cycling.
    fn run(&mut self, phase: usize, limit: usize) -> bool {
        let mut stalled = 0;
        loop {
            let Some(q) = self.entering(phase, limit, stalled >= STALL_LIMIT) else {
                return true;
            };
            let Some(p) = self.leaving(q) else { return false };
            let rhs = self.rhs();
            if self.rows[p][rhs].is_zero() {
                stalled += 1;
            } else if stalled < STALL_LIMIT {
                stalled = 0;
            }
            self.pivot(p, q);
        }
    }
}

/// Consecutive degenerate pivots tolerated before falling back to Bland.
const STALL_LIMIT: usize = 16;

enum DualResult {
    Optimal { value: Rational, basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

/// `minimize b.y s.t. A^T y = c, y >= 0` where `a_rows[i]` is row `i` of `A`.
fn solve_dual(a_rows: &[Vec<BigInt>], b: &[BigInt], c: &[BigInt]) -> DualResult {
    let m = a_rows.len();
    let nvar = c.len();
    let width = m + nvar + 1;
    let mut rows = Vec::with_capacity(nvar);
    for r in 0..nvar {
        let neg = c[r].is_negative();
        let mut row = vec![BigInt::zero(); width];
        for (i, a) in a_rows.iter().enumerate() {
            row[i] = if neg { -&a[r] } else { a[r].clone() };
        }
        row[m + r] = BigInt::one();
        row[width - 1] = c[r].abs();
        rows.push(row);
    }
    let mut phase1 = vec![BigInt::zero(); width];
    for row in &rows {
        for j in 0..m {
            phase1[j] -= &row[j];
        }
        phase1[width - 1] -= &row[width - 1];
    }
    let mut phase2 = vec![BigInt::zero(); width];
    phase2[..m].clone_from_slice(b);
    let mut t = Tableau {
        rows,
        obj: [phase1, phase2],
        basis: (m..m + nvar).collect(),
        div: BigInt::one(),
        structural: m,
    };

    let bounded = t.run(0, t.structural);
    debug_assert!(bounded, "phase 1 is bounded below by zero");
    if !t.obj[0][width - 1].is_zero() {
        return DualResult::Infeasible;
    }
    // Drive remaining artificials out of the basis or drop redundant rows.
    let mut p = 0;
    while p < t.rows.len() {
        if t.basis[p] < t.structural {
            p += 1;
            continue;
        }
        match (0..t.structural).find(|&j| !t.rows[p][j].is_zero()) {
            Some(q) => {
                if t.rows[p][q].is_negative() {
                    for x in t.rows[p].iter_mut() {
                        *x = -&*x;
                    }
                }
                t.pivot(p, q);
                p += 1;
            }
            None => {
                t.rows.remove(p);
                t.basis.remove(p);
            }
        }
    }
    if !t.run(1, t.structural) {
        return DualResult::Unbounded;
    }
    let value = Rational::new(-t.obj[1][width - 1].clone(), t.div.clone());
    DualResult::Optimal { value, basis: t.basis }
}

fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                let prow = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&prow).skip(col) {
                    *x -= &f * y;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

const EPS: f64 = 1e-9;
const FLOAT_PIVOT_LIMIT: usize = 10_000;

fn float_pivot(rows: &mut [Vec<f64>], obj: &mut [Vec<f64>; 2], p: usize, q: usize) {
    let piv = rows[p][q];
    for x in rows[p].iter_mut() {
        *x /= piv;
    }
    let prow = rows[p].clone();
    let others = rows.iter_mut().enumerate().filter(|(i, _)| *i != p).map(|(_, r)| r);
    for row in others.chain(obj.iter_mut()) {
        let f = row[q];
        if f != 0.0 {
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= f * y;
            }
        }
    }
}

/// Float simplex on the same dual tableau; returns false when unbounded or
/// out of pivots.
fn float_run(rows: &mut [Vec<f64>], obj: &mut [Vec<f64>; 2], basis: &mut [usize], phase: usize, limit: usize) -> bool {
    let rhs = obj[0].len() - 1;
    let mut stalled = 0;
    for _ in 0..FLOAT_PIVOT_LIMIT {
        let costs = &obj[phase][..limit];
        let q = if stalled >= STALL_LIMIT {
            costs.iter().position(|&v| v < -EPS)
        } else {
            (0..limit)
                .filter(|&j| costs[j] < -EPS)
                .min_by(|&a, &b| costs[a].total_cmp(&costs[b]))
        };
        let Some(q) = q else { return true };
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[q] > EPS {
                let ratio = row[rhs] / row[q];
                best = match best {
                    Some((b, r)) if r < ratio - EPS || (r <= ratio + EPS && basis[b] < basis[i]) => Some((b, r)),
                    _ => Some((i, ratio)),
                };
            }
        }
        let Some((p, ratio)) = best else { return false };
        if ratio.abs() <= EPS {
            stalled += 1;
        } else if stalled < STALL_LIMIT {
            stalled = 0;
        }
        float_pivot(rows, obj, p, q);
        basis[p] = q;
    }
    false
}

/// Candidate optimal basis (primal row indices) from a float run.
fn float_basis(lp: &LinearProgram) -> Option<Vec<usize>> {
    let m = lp.rows.len();
    let nvar = lp.vars.len();
    let width = m + nvar + 1;
    let mut rows: Vec<Vec<f64>> = (0..nvar)
        .map(|r| {
            let c = to_f64(&lp.objective[r]);
            let sign = if c < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width];
            for (i, con) in lp.rows.iter().enumerate() {
                row[i] = sign * to_f64(&con.coeffs[r]);
            }
            row[m + r] = 1.0;
            row[width - 1] = c.abs();
            row
        })
        .collect();
    let mut phase1 = vec![0.0; width];
    for row in &rows {
        for j in 0..m {
            phase1[j] -= row[j];
        }
        phase1[width - 1] -= row[width - 1];
    }
    let mut phase2 = vec![0.0; width];
    for (i, con) in lp.rows.iter().enumerate() {
        phase2[i] = to_f64(&con.rhs);
    }
    let mut obj = [phase1, phase2];
    let mut basis: Vec<usize> = (m..m + nvar).collect();
    if !float_run(&mut rows, &mut obj, &mut basis, 0, m) || obj[0][width - 1].abs() > 1e-7 {
        return None;
    }
    for p in 0..nvar {
        if basis[p] >= m {
            let q = (0..m)
                .filter(|&j| rows[p][j].abs() > EPS)
                .max_by(|&a, &b| rows[p][a].abs().total_cmp(&rows[p][b].abs()))?;
            float_pivot(&mut rows, &mut obj, p, q);
            basis[p] = q;
        }
    }
    float_run(&mut rows, &mut obj, &mut basis, 1, m).then_some(basis)
}

/// Solves the square integer system `a x = b` as `x = num / den`, `den > 0`.
fn solve_integer(mut a: Vec<Vec<BigInt>>) -> Option<(Vec<BigInt>, BigInt)> {
    let n = a.len();
    let mut div = BigInt::one();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let prow = a[col].clone();
        let piv = prow[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = (&piv * &*x - &f * y) / &div;
                }
            }
        }
        div = piv;
    }
    let mut num: Vec<BigInt> = a.into_iter().map(|mut r| r.pop().expect("augmented row")).collect();
    if div.is_negative() {
        div = -div;
        num.iter_mut().for_each(|x| *x = -&*x);
    }
    Some((num, div))
}

/// Exact optimality check of a basis: the vertex it defines must satisfy
/// every row and its dual multipliers must be nonnegative.
fn check_basis(
    lp: &LinearProgram,
    a_rows: &[Vec<BigInt>],
    b: &[BigInt],
    c: &[BigInt],
    basis: &[usize],
) -> Option<LpOutcome> {
    let nvar = c.len();
    if basis.len() != nvar {
        return None;
    }
    let primal: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|&i| a_rows[i].iter().chain([&b[i]]).cloned().collect())
        .collect();
    let (num, den) = solve_integer(primal)?;
    let dual: Vec<Vec<BigInt>> = (0..nvar)
        .map(|r| {
            basis
                .iter()
                .map(|&i| a_rows[i][r].clone())
                .chain([c[r].clone()])
                .collect()
        })
        .collect();
    let (ynum, _) = solve_integer(dual)?;
    if ynum.iter().any(|y| y.is_negative()) {
        return None;
    }
    let feasible = a_rows.iter().zip(b).all(|(a, bi)| {
        let lhs = a.iter().zip(&num).fold(BigInt::zero(), |acc, (x, y)| acc + x * y);
        lhs <= bi * &den
    });
    if !feasible {
        return None;
    }
    let point: Vec<Rational> = num.into_iter().map(|x| Rational::new(x, den.clone())).collect();
    Some(LpOutcome::Optimal {
        value: lp.objective_at(&point),
        point: Some(point),
    })
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let (a_rows, b, c, c_scale) = integer_form(lp);
    if let Some(outcome) = float_basis(lp).and_then(|basis| check_basis(lp, &a_rows, &b, &c, &basis)) {
        return outcome;
    }
    solve_tableau(lp, &a_rows, &b, &c, c_scale)
}

/// The exact tableau alone, without the float hint.
pub fn solve_exact(lp: &LinearProgram) -> LpOutcome {
    let (a_rows, b, c, c_scale) = integer_form(lp);
    solve_tableau(lp, &a_rows, &b, &c, c_scale)
}

type IntegerForm = (Vec<Vec<BigInt>>, Vec<BigInt>, Vec<BigInt>, BigInt);

/// Rows and objective scaled to integers; row scaling is positive, so the
/// feasible set is unchanged.
fn integer_form(lp: &LinearProgram) -> IntegerForm {
    let mut a_rows = Vec::with_capacity(lp.rows.len());
    let mut b = Vec::with_capacity(lp.rows.len());
    for row in &lp.rows {
        let mut full = row.coeffs.clone();
        full.push(row.rhs.clone());
        let (mut ints, _) = integerize(&full);
        b.push(ints.pop().unwrap());
        a_rows.push(ints);
    }
    let (c, c_scale) = integerize(&lp.objective);
    (a_rows, b, c, c_scale)
}

fn solve_tableau(lp: &LinearProgram, a_rows: &[Vec<BigInt>], b: &[BigInt], c: &[BigInt], c_scale: BigInt) -> LpOutcome {
    match solve_dual(a_rows, b, c) {
        DualResult::Optimal { value, basis } => {
            let value = value / Rational::from_integer(c_scale);
            let point = (basis.len() == lp.vars.len())
                .then(|| {
                    let a = basis.iter().map(|&i| lp.rows[i].coeffs.clone()).collect();
                    let rhs = basis.iter().map(|&i| lp.rows[i].rhs.clone()).collect();
                    solve_square(a, rhs)
                })
                .flatten();
            LpOutcome::Optimal { value, point }
        }
        DualResult::Unbounded => LpOutcome::Infeasible,
        DualResult::Infeasible => {
            // Primal is unbounded or infeasible; the zero-objective dual
            // separates the two cases.
            let zero = vec![BigInt::zero(); c.len()];
            match solve_dual(a_rows, b, &zero) {
                DualResult::Unbounded => LpOutcome::Infeasible,
                _ => LpOutcome::Unbounded,
            }
        }
    }
}
