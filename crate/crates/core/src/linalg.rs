//! Exact Gaussian elimination.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::Q;

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Q>),
    /// Infinitely many solutions. `particular` sets every free variable to 0.
    Many { particular: Vec<Q>, free: Vec<usize> },
    Inconsistent,
}

/// Reduces `[A | b]` to row echelon form and reads off the solution set.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::from_integer(1.into()) / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = alloc::vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        let free = (0..cols).filter(|c| !pivots.contains(c)).collect();
        Solution::Many { particular: x, free }
    }
}
