//! Exact linear programming: two-phase simplex with Bland's rule over the rationals.

use crate::linalg::Mat;
use crate::rational::Q;
use num::{One, Signed, Zero};

/// Result of [`maximize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(Q),
}

struct Tableau {
    rows: Mat,
    rhs: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
            self.rhs[i] = &self.rhs[i] - &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations for `cost` restricted to columns `< ncols`.
    fn optimize(&mut self, cost: &[Q], ncols: usize) -> Option<Q> {
        loop {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let r = self.basis.iter().enumerate().fold(cost[j].clone(), |acc, (i, &bj)| {
                    acc - &cost[bj] * &self.rows[i][j]
                });
                r.is_positive()
            });
            let Some(c) = entering else {
                let value = self.basis.iter().zip(&self.rhs).fold(Q::zero(), |acc, (&bj, v)| acc + &cost[bj] * v);
                return Some(value);
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (r, _) = leave?;
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c . x` subject to `a x = b`, `x >= 0`.
pub fn maximize(c: &[Q], a: &Mat, b: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let mut rows: Mat = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Q> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi } else { bi.clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };
    let phase1: Vec<Q> = (0..n + m).map(|j| if j < n { Q::zero() } else { -Q::one() }).collect();
    let v = t.optimize(&phase1, n + m).expect("phase one is bounded");
    if v.is_negative() {
        return LpOutcome::Infeasible;
    }
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut cost = c.to_vec();
    cost.extend((0..m).map(|_| Q::zero()));
    match t.optimize(&cost, n) {
        Some(v) => LpOutcome::Optimal(v),
        None => LpOutcome::Unbounded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn small_program() {
        // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let c = vec![int(1), int(1), int(0), int(0)];
        let a = vec![vec![int(1), int(2), int(1), int(0)], vec![int(3), int(1), int(0), int(1)]];
        assert_eq!(maximize(&c, &a, &[int(4), int(6)]), LpOutcome::Optimal(frac(14, 5)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![int(1), int(1)]];
        assert_eq!(maximize(&[int(0), int(0)], &a, &[int(-1)]), LpOutcome::Infeasible);
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(maximize(&[int(1), int(0)], &a, &[int(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(maximize(&[int(1), int(0)], &a, &[int(1), int(2)]), LpOutcome::Optimal(int(1)));
    }
}
