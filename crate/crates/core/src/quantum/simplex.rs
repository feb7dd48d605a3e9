//! Exact phase-one simplex over the rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Either a non-negative solution of `A x = b` or a Farkas vector `y` with `Aᵀy ≤ 0`, `bᵀy > 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible { x: Vec<BigRational> },
    Infeasible { y: Vec<BigRational> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }

    /// Exact re-check of the witness or certificate against the system.
    pub fn verify(&self, a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
        let n = a.first().map_or(0, |r| r.len());
        match self {
            LpOutcome::Feasible { x } => {
                x.len() == n
                    && x.iter().all(|v| !v.is_negative())
                    && a.iter().zip(b).all(|(row, bi)| {
                        row.iter().zip(x).fold(BigRational::zero(), |s, (aij, xj)| s + aij * xj) == *bi
                    })
            }
            LpOutcome::Infeasible { y } => {
                let by = b.iter().zip(y).fold(BigRational::zero(), |s, (bi, yi)| s + bi * yi);
                by.is_positive()
                    && (0..n).all(|j| {
                        !a.iter().zip(y).fold(BigRational::zero(), |s, (row, yi)| s + &row[j] * yi).is_positive()
                    })
            }
        }
    }
}

pub fn farkas_or_witness(a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let width = n + m + 1;
    let sign: Vec<BigRational> =
        b.iter().map(|bi| if bi.is_negative() { -BigRational::one() } else { BigRational::one() }).collect();
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![BigRational::zero(); width];
            for j in 0..n {
                row[j] = &a[i][j] * &sign[i];
            }
            row[n + i] = BigRational::one();
            row[width - 1] = &b[i] * &sign[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut cost = vec![BigRational::zero(); width];
    for row in &t[..m] {
        for (c, x) in cost[..n].iter_mut().zip(row) {
            *c -= x;
        }
        cost[width - 1] -= &row[width - 1];
    }
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][width - 1] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(r) = leave else { break };
        let pivot = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
        basis[r] = enter;
    }
    // the objective cell holds minus the residual artificial mass
    if cost[width - 1].is_zero() {
        let mut x = vec![BigRational::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[i][width - 1].clone();
            }
        }
        LpOutcome::Feasible { x }
    } else {
        let y = (0..m).map(|i| (BigRational::one() - &cost[n + i]) * &sign[i]).collect();
        LpOutcome::Infeasible { y }
    }
}
