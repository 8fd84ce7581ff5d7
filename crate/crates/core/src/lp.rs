//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are given in standard form: maximize `c·x` subject to `A x = b`,
//! `x ≥ 0`. Optimal solutions are basic, so at most `rows` coordinates are
//! nonzero.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.t[i][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Q::one() / &self.t[row][col];
        for x in self.t[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..self.t.len() {
            if i != row && !self.t[i][col].is_zero() {
                let f = self.t[i][col].clone();
                for j in 0..=self.width {
                    let d = &f * &self.t[row][j];
                    self.t[i][j] -= d;
                }
            }
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[Q], j: usize) -> Q {
        let mut r = cost[j].clone();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !cost[bi].is_zero() && !self.t[i][j].is_zero() {
                r -= &cost[bi] * &self.t[i][j];
            }
        }
        r
    }

    /// Runs primal simplex on columns `0..active`; returns false if unbounded.
    fn optimize(&mut self, cost: &[Q], active: usize) -> bool {
        loop {
            let entering = (0..active)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.t.len() {
                if self.t[i][col].is_positive() {
                    let ratio = self.rhs(i) / &self.t[i][col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpResult {
    let n = c.len();
    let m = a.len();
    let width = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<Q> = Vec::with_capacity(width + 1);
        for x in row {
            r.push(if flip { -x.clone() } else { x.clone() });
        }
        for k in 0..m {
            r.push(if k == i { Q::one() } else { Q::zero() });
        }
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        width,
    };

    let mut phase1 = alloc::vec![Q::zero(); width];
    for x in phase1.iter_mut().skip(n) {
        *x = -Q::one();
    }
    tab.optimize(&phase1, width);
    if (0..m).any(|i| tab.basis[i] >= n && !tab.rhs(i).is_zero()) {
        return LpResult::Infeasible;
    }

    // Drive artificial variables out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
                i += 1;
            } else {
                tab.t.remove(i);
                tab.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }

    let mut cost = c.to_vec();
    cost.resize(width, Q::zero());
    if !tab.optimize(&cost, n) {
        return LpResult::Unbounded;
    }
    let mut x = alloc::vec![Q::zero(); n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < n {
            x[bi] = tab.rhs(i).clone();
        }
    }
    let value = x.iter().zip(c).fold(Q::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpResult::Optimal { x, value }
}

/// A basic feasible point of `A x = b`, `x ≥ 0`, if one exists.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    match maximize(a, b, &alloc::vec![Q::zero(); n]) {
        LpResult::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use alloc::vec;

    #[test]
    fn small_problem() {
        // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![
            vec![int(1), int(2), int(1), int(0)],
            vec![int(3), int(1), int(0), int(1)],
        ];
        let r = maximize(&a, &[int(4), int(6)], &[int(1), int(1), int(0), int(0)]);
        match r {
            LpResult::Optimal { x, value } => {
                assert_eq!(value, frac(14, 5));
                assert_eq!(x[0], frac(8, 5));
                assert_eq!(x[1], frac(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![int(1), int(1)]];
        assert_eq!(maximize(&a, &[int(-1)], &[int(0), int(0)]), LpResult::Infeasible);
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(maximize(&a, &[int(0)], &[int(1), int(0)]), LpResult::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        let r = maximize(&a, &[int(1), int(2)], &[int(1), int(0)]);
        assert_eq!(
            r,
            LpResult::Optimal {
                x: vec![int(1), int(0)],
                value: int(1)
            }
        );
    }
}
