//! Exact dense linear programming over an ordered field.
//!
//! Two-phase primal simplex (Dantzig pricing, falling back to Bland's
//! anti-cycling rule on the first degenerate pivot), generic over
//! the scalar type via `num-traits`. The crate instantiates it with
//! arbitrary-precision rationals ([`crate::Rat`]), so every optimum it
//! reports is exact; there are no tolerances anywhere in this module.

use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar requirements: an ordered field with exact arithmetic.
pub trait Scalar:
    Clone
    + PartialOrd
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialOrd
        + Zero
        + One
        + Signed
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Outcome of a linear program in standard form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { value: T, solution: Vec<T> },
    Infeasible,
    Unbounded,
}

/// Maximize `c . x` subject to `A x = b`, `x >= 0`.
///
/// Rows of `a` must have the same length as `c`; `b` entries may have any
/// sign (phase one normalizes them).
pub fn maximize<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Normalize to nonnegative right-hand sides.
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < T::zero();
        rows.push(a[i].iter().map(|x| if flip { -x.clone() } else { x.clone() }).collect());
        rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
    }

    // Columns that are already unit vectors (typically slack columns) seed
    // the starting basis; artificial variables are only introduced for the
    // rows left uncovered, which keeps phase one small or skips it.
    let mut basis: Vec<Option<usize>> = vec![None; m];
    for j in 0..n {
        let mut hit = None;
        for i in 0..m {
            if rows[i][j].is_zero() {
                continue;
            }
            if hit.is_some() || rows[i][j] != T::one() {
                hit = None;
                break;
            }
            hit = Some(i);
        }
        if let Some(i) = hit {
            if basis[i].is_none() {
                basis[i] = Some(j);
            }
        }
    }
    let art_rows: Vec<usize> = (0..m).filter(|&i| basis[i].is_none()).collect();

    // Phase one: minimize the sum of artificial variables.
    let mut t = Tableau::new(m, n + art_rows.len());
    for i in 0..m {
        t.rows[i][..n].clone_from_slice(&rows[i]);
        t.rhs[i] = rhs[i].clone();
        t.basis[i] = basis[i].unwrap_or(0);
    }
    for (k, &i) in art_rows.iter().enumerate() {
        t.rows[i][n + k] = T::one();
        t.basis[i] = n + k;
    }
    if !art_rows.is_empty() {
        let mut phase1_obj = vec![T::zero(); n + art_rows.len()];
        for j in n..n + art_rows.len() {
            phase1_obj[j] = -T::one();
        }
        t.set_objective(&phase1_obj);
        if !t.run() {
            unreachable!("phase one is bounded below by zero");
        }
        if t.objective_value().is_negative() {
            return LpOutcome::Infeasible;
        }
    }
    // Pivot any artificial variables remaining in the basis out (or drop
    // their rows if the row is identically zero on the real columns).
    for i in 0..m {
        if t.basis[i] >= n {
            let piv = (0..n).find(|&j| !t.rows[i][j].is_zero());
            if let Some(j) = piv {
                t.pivot(i, j);
            }
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&i| t.basis[i] < n).collect();

    // Phase two: the original objective on the feasible tableau.
    let mut t2 = Tableau::new(keep.len(), n);
    for (r, &i) in keep.iter().enumerate() {
        t2.rows[r].clone_from_slice(&t.rows[i][..n]);
        t2.rhs[r] = t.rhs[i].clone();
        t2.basis[r] = t.basis[i];
    }
    t2.set_objective(c);
    if !t2.run() {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![T::zero(); n];
    for (r, &bv) in t2.basis.iter().enumerate() {
        solution[bv] = t2.rhs[r].clone();
    }
    LpOutcome::Optimal { value: t2.objective_value(), solution }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    // Reduced costs and the (negated) objective value.
    cost: Vec<T>,
    obj: T,
}

impl<T: Scalar> Tableau<T> {
    fn new(m: usize, n: usize) -> Self {
        Tableau {
            rows: vec![vec![T::zero(); n]; m],
            rhs: vec![T::zero(); m],
            basis: vec![0; m],
            cost: vec![T::zero(); n],
            obj: T::zero(),
        }
    }

    /// Install maximization objective `c`, priced out over the basis.
    fn set_objective(&mut self, c: &[T]) {
        self.cost = c.iter().map(|x| -x.clone()).collect();
        self.obj = T::zero();
        for i in 0..self.rows.len() {
            let coeff = self.cost[self.basis[i]].clone();
            if !coeff.is_zero() {
                for j in 0..self.cost.len() {
                    self.cost[j] = self.cost[j].clone() - coeff.clone() * self.rows[i][j].clone();
                }
                self.obj = self.obj.clone() - coeff * self.rhs[i].clone();
            }
        }
    }

    fn objective_value(&self) -> T {
        self.obj.clone()
    }

    /// Run to optimality; false means unbounded.
    fn run(&mut self) -> bool {
        // Dantzig pricing (most negative reduced cost) while the objective
        // strictly improves; permanent switch to Bland's rule once a pivot
        // is degenerate, which guarantees termination.
        let mut bland = false;
        loop {
            let col = if bland {
                self.cost.iter().position(|x| x.is_negative())
            } else {
                let mut best: Option<usize> = None;
                for (j, x) in self.cost.iter().enumerate() {
                    if x.is_negative() && best.map_or(true, |b| *x < self.cost[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(col) = col else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            let lhs = self.rhs[i].clone() * self.rows[l][col].clone();
                            let rhs = self.rhs[l].clone() * self.rows[i][col].clone();
                            lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some(i);
                    }
                }
            }
            let Some(row) = leave else {
                return false;
            };
            if self.rhs[row].is_zero() {
                bland = true;
            }
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        for x in self.rows[row].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / piv;
        for i in 0..self.rows.len() {
            if i != row && !self.rows[i][col].is_zero() {
                let f = self.rows[i][col].clone();
                for j in 0..self.rows[i].len() {
                    self.rows[i][j] =
                        self.rows[i][j].clone() - f.clone() * self.rows[row][j].clone();
                }
                self.rhs[i] = self.rhs[i].clone() - f * self.rhs[row].clone();
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for j in 0..self.cost.len() {
                self.cost[j] = self.cost[j].clone() - f.clone() * self.rows[row][j].clone();
            }
            self.obj = self.obj.clone() - f * self.rhs[row].clone();
        }
        self.basis[row] = col;
    }
}

/// Reduce `[A | b]` to reduced row echelon form in place, returning the
/// pivot column of each row; `None` signals an inconsistent system
/// (a row `0 = nonzero`).
pub fn rref<T: Scalar>(a: &mut Vec<Vec<T>>, b: &mut Vec<T>) -> Option<Vec<usize>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let piv = a[r][col].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        b[r] = b[r].clone() / piv;
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    a[i][j] = a[i][j].clone() - f.clone() * a[r][j].clone();
                }
                b[i] = b[i].clone() - f * b[r].clone();
            }
        }
        pivots.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    for i in r..m {
        if !b[i].is_zero() {
            return None;
        }
    }
    a.truncate(r);
    b.truncate(r);
    Some(pivots)
}
