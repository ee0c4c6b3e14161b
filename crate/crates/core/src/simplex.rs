//! Dense tableau simplex for packing LPs
//!
//! ```text
//! maximize   sum_k c_k u_k
//! subject to sum_k a_jk u_k <= cap_j   (one row per j)
//!            u >= 0
//! ```
//!
//! with `cap >= 0`, so the all-slack basis is feasible and no phase one is
//! needed. Columns may be appended between solves; the current basis stays
//! feasible, so re-optimisation warm starts. Pivoting follows Bland's rule,
//! which makes the pivot sequence deterministic and cycle free.

use crate::error::{Error, Result};
use crate::rational::Scalar;

#[derive(Debug, Clone)]
pub struct PackingLp<T> {
    rows: usize,
    /// `rows x cols`, columns `0..rows` are the slacks.
    tab: Vec<Vec<T>>,
    rhs: Vec<T>,
    /// Reduced costs; positive entries may enter.
    cost: Vec<T>,
    basis: Vec<usize>,
    value: T,
    pivots: usize,
}

impl<T: Scalar> PackingLp<T> {
    pub fn new(caps: Vec<T>) -> Self {
        let rows = caps.len();
        let tab = (0..rows)
            .map(|r| (0..rows).map(|c| if r == c { T::one() } else { T::zero() }).collect())
            .collect();
        Self {
            rows,
            tab,
            rhs: caps,
            cost: vec![T::zero(); rows],
            basis: (0..rows).collect(),
            value: T::zero(),
            pivots: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cost.len()
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    /// Appends a structural column with constraint coefficients `coeffs`
    /// (one per row) and objective coefficient `obj`. Returns its index.
    pub fn add_column(&mut self, coeffs: &[T], obj: T) -> usize {
        assert_eq!(coeffs.len(), self.rows);
        // The slack block of the tableau holds B^-1, and minus the slack
        // reduced costs are the simplex multipliers.
        let mut reduced = obj;
        for (j, a) in coeffs.iter().enumerate() {
            reduced.add_mul(a, &self.cost[j]);
        }
        for row in &mut self.tab {
            let mut entry = T::zero();
            for (j, a) in coeffs.iter().enumerate() {
                entry.add_mul(a, &row[j]);
            }
            row.push(entry);
        }
        self.cost.push(reduced);
        self.cost.len() - 1
    }

    /// Runs Bland-rule pivots until optimal.
    pub fn optimize(&mut self, max_pivots: usize) -> Result<()> {
        loop {
            let Some(enter) = self.cost.iter().position(|c| c.is_pos()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows {
                let a = &self.tab[r][enter];
                if !a.is_pos() {
                    continue;
                }
                let ratio = T::ratio(&self.rhs[r], a);
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::SubsolverFailure(format!("column {enter} is unbounded")));
            };
            if self.pivots >= max_pivots {
                return Err(Error::SubsolverFailure(format!(
                    "no optimum after {max_pivots} pivots"
                )));
            }
            self.pivot(r, enter);
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.tab[r][e].clone();
        for x in self.tab[r].iter_mut() {
            x.div_by(&piv);
        }
        self.rhs[r].div_by(&piv);
        self.tab[r][e] = T::one();
        let pivot_row = self.tab[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for k in 0..self.rows {
            if k == r {
                continue;
            }
            let f = self.tab[k][e].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in self.tab[k].iter_mut().zip(&pivot_row) {
                x.sub_mul(&f, p);
            }
            self.tab[k][e] = T::zero();
            self.rhs[k].sub_mul(&f, &pivot_rhs);
        }
        let f = self.cost[e].clone();
        for (x, p) in self.cost.iter_mut().zip(&pivot_row) {
            x.sub_mul(&f, p);
        }
        self.cost[e] = T::zero();
        self.value.add_mul(&f, &pivot_rhs);
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Objective value of the current basis.
    pub fn value(&self) -> &T {
        &self.value
    }

    /// Simplex multipliers of the rows; at optimality this is an optimal
    /// solution of the dual covering LP `min cap.y s.t. A^T y >= c, y >= 0`.
    pub fn duals(&self) -> Vec<T> {
        self.cost[..self.rows]
            .iter()
            .map(|c| {
                let mut y = T::zero();
                y.sub_mul(&T::one(), c);
                y
            })
            .collect()
    }

    /// Values of the structural columns, in the order they were added.
    pub fn primal(&self) -> Vec<T> {
        let mut u = vec![T::zero(); self.cols() - self.rows];
        for (r, &b) in self.basis.iter().enumerate() {
            if b >= self.rows {
                u[b - self.rows] = self.rhs[r].clone();
            }
        }
        u
    }
}
