//! Dense dictionary simplex for `max c·x, A x <= b, x >= 0` with `b >= 0`,
//! generic over exact rationals and `f64`. Bland's rule throughout.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::Rational;

pub trait LpNumber:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_nonzero(&self) -> bool {
        self.is_pos() || self.is_neg()
    }
    /// Sign tests used when checking a finished solution.
    fn check_neg(&self) -> bool {
        self.is_neg()
    }
    fn check_nonzero(&self) -> bool {
        self.is_nonzero()
    }
}

impl LpNumber for Rational {
    fn from_i64(v: i64) -> Self {
        crate::rational::int(v)
    }
    fn is_pos(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
}

/// Pivot tolerance for the float path.
pub const FLOAT_EPS: f64 = 1e-9;
/// Tolerance when checking float solutions.
pub const FLOAT_CHECK_TOL: f64 = 1e-7;

impl LpNumber for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn check_neg(&self) -> bool {
        *self < -FLOAT_CHECK_TOL
    }
    fn check_nonzero(&self) -> bool {
        self.abs() > FLOAT_CHECK_TOL
    }
}

/// A row `sum coeff * x_j <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row<T> {
    pub lhs: Vec<(usize, T)>,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
    /// One multiplier per row.
    pub dual: Vec<T>,
    pub pivots: usize,
}

/// Solves `max c·x` over `rows`, `x >= 0`. Every `rhs` must be nonnegative
/// so the slack basis is feasible.
pub fn maximize<T: LpNumber>(n_vars: usize, rows: &[Row<T>], c: &[(usize, T)]) -> LpOutcome<T> {
    let m = rows.len();
    assert!(rows.iter().all(|r| !r.rhs.is_neg()), "rhs must be nonnegative");
    // indices 0..n_vars are structural, n_vars + i is the slack of row i
    let mut tab: Vec<Vec<T>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![T::zero(); n_vars];
            for (j, a) in &r.lhs {
                v[*j] = v[*j].clone() + a.clone();
            }
            v
        })
        .collect();
    let mut rhs: Vec<T> = rows.iter().map(|r| r.rhs.clone()).collect();
    let mut cost = vec![T::zero(); n_vars];
    for (j, a) in c {
        cost[*j] = cost[*j].clone() + a.clone();
    }
    let mut value = T::zero();
    let mut basic: Vec<usize> = (n_vars..n_vars + m).collect();
    let mut nonbasic: Vec<usize> = (0..n_vars).collect();
    let mut pivots = 0;
    loop {
        let Some(col) = (0..n_vars)
            .filter(|&j| cost[j].is_pos())
            .min_by_key(|&j| nonbasic[j])
        else {
            break;
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if !tab[i][col].is_pos() {
                continue;
            }
            let ratio = rhs[i].clone() / tab[i][col].clone();
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (!(ratio > *lr) && basic[i] < basic[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut tab, &mut rhs, &mut cost, &mut value, row, col);
        std::mem::swap(&mut basic[row], &mut nonbasic[col]);
        pivots += 1;
    }
    let mut x = vec![T::zero(); n_vars];
    for (i, &b) in basic.iter().enumerate() {
        if b < n_vars {
            x[b] = rhs[i].clone();
        }
    }
    let mut dual = vec![T::zero(); m];
    for (j, &v) in nonbasic.iter().enumerate() {
        if v >= n_vars {
            dual[v - n_vars] = -cost[j].clone();
        }
    }
    LpOutcome::Optimal(LpSolution { value, x, dual, pivots })
}

/// Exchanges the basic variable of `row` with the nonbasic one of `col`.
fn pivot<T: LpNumber>(tab: &mut [Vec<T>], rhs: &mut [T], cost: &mut [T], value: &mut T, row: usize, col: usize) {
    let p = tab[row][col].clone();
    let inv = T::one() / p;
    let width = tab[row].len();
    for j in 0..width {
        if j == col {
            tab[row][j] = inv.clone();
        } else if tab[row][j].is_nonzero() {
            tab[row][j] = tab[row][j].clone() * inv.clone();
        }
    }
    rhs[row] = rhs[row].clone() * inv.clone();
    let prow = tab[row].clone();
    let prhs = rhs[row].clone();
    for (i, line) in tab.iter_mut().enumerate() {
        if i == row || !line[col].is_nonzero() {
            continue;
        }
        let f = line[col].clone();
        for j in 0..width {
            if j == col {
                line[j] = -(f.clone() * prow[j].clone());
            } else if prow[j].is_nonzero() {
                line[j] = line[j].clone() - f.clone() * prow[j].clone();
            }
        }
        rhs[i] = rhs[i].clone() - f * prhs.clone();
    }
    let f = cost[col].clone();
    if f.is_nonzero() {
        for j in 0..width {
            if j == col {
                cost[j] = -(f.clone() * prow[j].clone());
            } else if prow[j].is_nonzero() {
                cost[j] = cost[j].clone() - f.clone() * prow[j].clone();
            }
        }
        *value = value.clone() + f * prhs;
    }
}

/// Checks `y >= 0`, `A^T y >= c` and `b·y = value`; exact for rationals and
/// up to [`FLOAT_CHECK_TOL`] for floats.
pub fn verify_dual<T: LpNumber>(n_vars: usize, rows: &[Row<T>], c: &[(usize, T)], sol: &LpSolution<T>) -> bool {
    if sol.dual.len() != rows.len() || sol.dual.iter().any(|y| y.check_neg()) {
        return false;
    }
    let mut aty = vec![T::zero(); n_vars];
    let mut by = T::zero();
    for (row, y) in rows.iter().zip(&sol.dual) {
        if !y.is_nonzero() {
            continue;
        }
        for (j, a) in &row.lhs {
            aty[*j] = aty[*j].clone() + a.clone() * y.clone();
        }
        by = by + row.rhs.clone() * y.clone();
    }
    let mut cost = vec![T::zero(); n_vars];
    for (j, a) in c {
        cost[*j] = cost[*j].clone() + a.clone();
    }
    aty.iter().zip(&cost).all(|(l, r)| !(l.clone() - r.clone()).check_neg()) && !(by - sol.value.clone()).check_nonzero()
}

/// Checks primal feasibility of `x` and that `c·x` equals the value.
pub fn verify_primal<T: LpNumber>(rows: &[Row<T>], c: &[(usize, T)], sol: &LpSolution<T>) -> bool {
    if sol.x.iter().any(|v| v.check_neg()) {
        return false;
    }
    let feasible = rows.iter().all(|row| {
        let lhs = row.lhs.iter().fold(T::zero(), |acc, (j, a)| acc + a.clone() * sol.x[*j].clone());
        !(row.rhs.clone() - lhs).check_neg()
    });
    let obj = c.iter().fold(T::zero(), |acc, (j, a)| acc + a.clone() * sol.x[*j].clone());
    feasible && !(obj - sol.value.clone()).check_nonzero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn rows(spec: &[(&[(usize, i64)], i64)]) -> Vec<Row<Rational>> {
        spec.iter()
            .map(|(lhs, rhs)| Row {
                lhs: lhs.iter().map(|&(j, a)| (j, int(a))).collect(),
                rhs: int(*rhs),
            })
            .collect()
    }

    #[test]
    fn textbook_instance() {
        // max 3x + 2y; x + y <= 4, x + 3y <= 6, x <= 3  ->  x = 3, y = 1, value 11
        let r = rows(&[(&[(0, 1), (1, 1)], 4), (&[(0, 1), (1, 3)], 6), (&[(0, 1)], 3)]);
        let c = vec![(0, int(3)), (1, int(2))];
        let LpOutcome::Optimal(sol) = maximize(2, &r, &c) else { panic!() };
        assert_eq!(sol.value, int(11));
        assert_eq!(sol.x, vec![int(3), int(1)]);
        assert!(verify_dual(2, &r, &c, &sol));
        assert!(verify_primal(&r, &c, &sol));
    }

    #[test]
    fn fractional_optimum_and_unbounded() {
        // max x + y; 2x + y <= 3, x + 2y <= 3  ->  (1, 1)
        let r = rows(&[(&[(0, 2), (1, 1)], 3), (&[(0, 1), (1, 2)], 3)]);
        let c = vec![(0, int(1)), (1, int(1))];
        let LpOutcome::Optimal(sol) = maximize(2, &r, &c) else { panic!() };
        assert_eq!(sol.value, int(2));
        // max x + y; 3x + y <= 2, x + 3y <= 2  ->  (1/2, 1/2)
        let r = rows(&[(&[(0, 3), (1, 1)], 2), (&[(0, 1), (1, 3)], 2)]);
        let LpOutcome::Optimal(sol) = maximize(2, &r, &c) else { panic!() };
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.x, vec![ratio(1, 2), ratio(1, 2)]);
        let r = rows(&[(&[(0, 1), (1, -1)], 1)]);
        assert_eq!(maximize(2, &r, &c), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_instance_terminates() {
        // a cycling-prone instance under the largest-coefficient rule
        let spec: Vec<(Vec<(usize, Rational)>, Rational)> = vec![
            (vec![(0, ratio(1, 2)), (1, ratio(-11, 2)), (2, ratio(-5, 2)), (3, int(9))], int(0)),
            (vec![(0, ratio(1, 2)), (1, ratio(-3, 2)), (2, ratio(-1, 2)), (3, int(1))], int(0)),
            (vec![(0, int(1))], int(1)),
        ];
        let r: Vec<Row<Rational>> = spec.into_iter().map(|(lhs, rhs)| Row { lhs, rhs }).collect();
        let c = vec![(0, int(10)), (1, int(-57)), (2, int(-9)), (3, int(-24))];
        let LpOutcome::Optimal(sol) = maximize(4, &r, &c) else { panic!() };
        assert_eq!(sol.value, int(1));
        assert!(verify_dual(4, &r, &c, &sol));
    }

    #[test]
    fn float_path_agrees() {
        let r = vec![
            Row { lhs: vec![(0, 2.0), (1, 1.0)], rhs: 3.0 },
            Row { lhs: vec![(0, 1.0), (1, 2.0)], rhs: 3.0 },
        ];
        let c = vec![(0, 1.0), (1, 1.0)];
        let LpOutcome::Optimal(sol) = maximize(2, &r, &c) else { panic!() };
        assert!((sol.value - 2.0).abs() < 1e-12);
        assert!(verify_dual(2, &r, &c, &sol));
    }
}
