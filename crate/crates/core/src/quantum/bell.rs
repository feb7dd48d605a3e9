//! Moment tables of ±1 observables and the exact classical-model feasibility test.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::simplex::{farkas_or_witness, LpOutcome};
use super::{singlet, DensityOperator};
use crate::error::{ensure, Result};
use crate::exact::{ratio_string, snap_f64};
use crate::linalg::CMatrix;

pub const BELL_LABELS: [&str; 6] = ["qA1", "qA2", "qA3", "qB1", "qB2", "qB3"];

/// First and second moments of ±1 variables; `None` marks an unconstrained entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    pub labels: Vec<String>,
    pub first: Vec<Option<f64>>,
    pub second: Vec<Vec<Option<f64>>>,
}

impl MomentTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn second(&self, i: usize, j: usize) -> Option<f64> {
        self.second[i][j]
    }

    fn from_observables(labels: &[&str], obs: &[CMatrix], state: &DensityOperator, cross_only: Option<usize>) -> Self {
        let n = obs.len();
        let first = obs.iter().map(|q| Some(state.expect(q).re)).collect();
        let second = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if let Some(split) = cross_only {
                            if (i < split) == (j < split) {
                                return None;
                            }
                        }
                        let jordan = &(&obs[i] * &obs[j]) + &(&obs[j] * &obs[i]);
                        Some(state.expect(&jordan).re / 2.0)
                    })
                    .collect()
            })
            .collect();
        MomentTable { labels: labels.iter().map(|s| s.to_string()).collect(), first, second }
    }

    /// Moments of an explicit law on `{±1}^n` given as (atom, weight) pairs.
    pub fn of_law(labels: &[&str], law: &[(Vec<i8>, f64)]) -> Self {
        let n = labels.len();
        let first = (0..n).map(|k| Some(law.iter().map(|(x, w)| w * x[k] as f64).sum())).collect();
        let second = (0..n)
            .map(|i| (0..n).map(|j| Some(law.iter().map(|(x, w)| w * (x[i] * x[j]) as f64).sum())).collect())
            .collect();
        MomentTable { labels: labels.iter().map(|s| s.to_string()).collect(), first, second }
    }
}

/// Singlet moments of the six Pauli observables `σ_i ⊗ I`, `I ⊗ σ_j` (symmetrized products).
pub fn bell_moment_table() -> MomentTable {
    let id = CMatrix::identity(2);
    let mut obs: Vec<CMatrix> = CMatrix::paulis().iter().map(|s| s.kron(&id)).collect();
    obs.extend(CMatrix::paulis().iter().map(|s| id.kron(s)));
    let psi = DensityOperator::pure(&singlet()).expect("unit vector");
    MomentTable::from_observables(&BELL_LABELS, &obs, &psi, None)
}

/// Singlet correlations of spin observables in the x–z plane at angles `0, π/2` (A) and `π/4, 3π/4` (B).
pub fn chsh_moment_table() -> MomentTable {
    use std::f64::consts::PI;
    let spin = |t: f64| &CMatrix::pauli_z().scale_re(t.cos()) + &CMatrix::pauli_x().scale_re(t.sin());
    let id = CMatrix::identity(2);
    let obs = vec![
        spin(0.0).kron(&id),
        spin(PI / 2.0).kron(&id),
        id.kron(&spin(PI / 4.0)),
        id.kron(&spin(3.0 * PI / 4.0)),
    ];
    let psi = DensityOperator::pure(&singlet()).expect("unit vector");
    MomentTable::from_observables(&["A0", "A1", "B0", "B1"], &obs, &psi, Some(2))
}

/// Three pairwise anti-correlated signs.
pub fn frustrated_moment_table() -> MomentTable {
    let m = |i: usize, j: usize| if i == j { Some(1.0) } else { Some(-1.0) };
    MomentTable {
        labels: vec!["a".into(), "b".into(), "c".into()],
        first: vec![None; 3],
        second: (0..3).map(|i| (0..3).map(|j| m(i, j)).collect()).collect(),
    }
}

/// `E(a_i b_j) = δ_ij`, `E(a_i a_j) = E(b_i b_j) = δ_ij`, centered marginals.
pub fn perfectly_correlated_table() -> MomentTable {
    let second = (0..6).map(|i| (0..6).map(|j| Some(if i % 3 == j % 3 { 1.0 } else { 0.0 })).collect()).collect();
    MomentTable { labels: BELL_LABELS.iter().map(|s| s.to_string()).collect(), first: vec![Some(0.0); 6], second }
}

#[derive(Clone, Debug, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub atoms: usize,
    pub constraints: Vec<String>,
    /// Atom law (atoms as sign strings) when feasible.
    pub witness: Option<Vec<(String, String)>>,
    /// Multipliers of the constraints when infeasible.
    pub certificate: Option<Vec<String>>,
    pub verified: bool,
}

fn atom_signs(atom: usize, n: usize) -> Vec<i64> {
    (0..n).map(|k| if atom >> (n - 1 - k) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Decides by exact linear programming whether a law on `{±1}^n` reproduces the table.
pub fn classical_model_infeasibility(table: &MomentTable) -> Result<Feasibility> {
    let n = table.len();
    ensure!((1..=10).contains(&n), Usage, "need 1..=10 variables, got {n}");
    ensure!(table.first.len() == n && table.second.len() == n && table.second.iter().all(|r| r.len() == n), Usage, "moment table shape mismatch");
    let atoms = 1usize << n;
    let signs: Vec<Vec<i64>> = (0..atoms).map(|a| atom_signs(a, n)).collect();
    let mut a: Vec<Vec<BigRational>> = vec![vec![BigRational::one(); atoms]];
    let mut b = vec![BigRational::one()];
    let mut names = vec!["sum".to_string()];
    for k in 0..n {
        if let Some(m) = table.first[k] {
            a.push(signs.iter().map(|s| BigRational::from_integer(s[k].into())).collect());
            b.push(snap_f64(m));
            names.push(format!("E({})", table.labels[k]));
        }
    }
    for i in 0..n {
        for j in i..n {
            let v = match (table.second[i][j], table.second[j][i]) {
                (Some(x), Some(y)) => {
                    ensure!((x - y).abs() <= 1e-9, Validation, "table is not symmetric at ({i},{j})");
                    x
                }
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => continue,
            };
            a.push(signs.iter().map(|s| BigRational::from_integer((s[i] * s[j]).into())).collect());
            b.push(snap_f64(v));
            names.push(format!("E({}·{})", table.labels[i], table.labels[j]));
        }
    }
    let out = farkas_or_witness(&a, &b);
    let verified = out.verify(&a, &b);
    let sign_str = |s: &[i64]| s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect::<String>();
    Ok(match out {
        LpOutcome::Feasible { x } => Feasibility {
            feasible: true,
            atoms,
            constraints: names,
            witness: Some(
                x.iter()
                    .enumerate()
                    .filter(|(_, p)| **p != BigRational::from_integer(0.into()))
                    .map(|(i, p)| (sign_str(&signs[i]), ratio_string(p)))
                    .collect(),
            ),
            certificate: None,
            verified,
        },
        LpOutcome::Infeasible { y } => Feasibility {
            feasible: false,
            atoms,
            constraints: names,
            witness: None,
            certificate: Some(y.iter().map(ratio_string).collect()),
            verified,
        },
    })
}
