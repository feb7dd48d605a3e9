//! Finite-dimensional quantum states, distances, entropies, channels and measurements.

mod access;
mod bell;
mod simplex;

pub use access::{accessible_information, fibonacci_sphere, AccessibleInfo};
pub use bell::{
    bell_moment_table, chsh_moment_table, classical_model_infeasibility, frustrated_moment_table,
    perfectly_correlated_table, Feasibility, MomentTable, BELL_LABELS,
};
pub use simplex::{farkas_or_witness, LpOutcome};

use serde::{Deserialize, Serialize};

use crate::coding::{entropy_of, Distribution};
use crate::error::{ensure, Result};
use crate::linalg::{c, hermitian_eigen, psd_sqrt, CMatrix, C64};

pub const STATE_TOL: f64 = 1e-10;
pub const KRAUS_TOL: f64 = 1e-8;
const EIG_ZERO: f64 = 1e-14;

/// Positive unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityOperator(CMatrix);

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        ensure!(m.is_hermitian(STATE_TOL), Validation, "density operator is not Hermitian");
        let tr = m.trace();
        ensure!((tr - c(1.0, 0.0)).norm() <= STATE_TOL, Validation, "trace {tr} is not 1");
        let e = hermitian_eigen(&m)?;
        ensure!(e.values[0] >= -STATE_TOL, Validation, "negative eigenvalue {}", e.values[0]);
        Ok(DensityOperator(m))
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        ensure!(n > 0.0, Validation, "zero state vector");
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Ok(DensityOperator(CMatrix::outer(&v)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator(CMatrix::identity(d).scale_re(1.0 / d as f64))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `Tr(ρ a)`.
    pub fn expect(&self, a: &CMatrix) -> C64 {
        self.0.adjoint().hs_inner(a)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = CMatrix::deserialize(d)?;
        DensityOperator::new(m).map_err(serde::de::Error::custom)
    }
}

/// Weighted family of states of a common dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        ensure!(!states.is_empty(), Validation, "ensemble is empty");
        ensure!(weights.len() == states.len(), Validation, "{} weights for {} states", weights.len(), states.len());
        ensure!(weights.iter().all(|&w| w >= 0.0 && w.is_finite()), Validation, "weights must be non-negative");
        let s: f64 = weights.iter().sum();
        ensure!((s - 1.0).abs() <= STATE_TOL, Validation, "weights sum to {s}, not 1");
        let d = states[0].dim();
        ensure!(states.iter().all(|r| r.dim() == d), Validation, "states differ in dimension");
        Ok(Ensemble { weights, states })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: Ensemble = serde_json::from_str(text)?;
        Ensemble::new(raw.weights, raw.states)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn mean(&self) -> DensityOperator {
        let mut m = CMatrix::zeros(self.dim());
        for (w, r) in self.weights.iter().zip(&self.states) {
            m = &m + &r.matrix().scale_re(*w);
        }
        DensityOperator(m)
    }
}

/// `(I + r·σ)/2`.
pub fn bloch(r: [f64; 3]) -> Result<DensityOperator> {
    let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    ensure!(n <= 1.0 + 1e-12, Domain, "Bloch vector has length {n} > 1");
    let mut m = CMatrix::identity(2);
    for (ri, s) in r.iter().zip(CMatrix::paulis()) {
        m = &m + &s.scale_re(*ri);
    }
    Ok(DensityOperator(m.scale_re(0.5)))
}

pub fn bloch_inverse(rho: &DensityOperator) -> Result<[f64; 3]> {
    ensure!(rho.dim() == 2, Usage, "Bloch coordinates need a qubit, got dimension {}", rho.dim());
    let [x, y, z] = CMatrix::paulis().map(|s| rho.expect(&s).re);
    Ok([x, y, z])
}

fn same_dim(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    ensure!(a.dim() == b.dim(), Usage, "dimension mismatch: {} vs {}", a.dim(), b.dim());
    Ok(())
}

pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = hermitian_eigen(&(rho.matrix() - sigma.matrix()))?;
    Ok((0.5 * diff.values.iter().map(|l| l.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

/// `Tr √(√ρ σ √ρ)`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let s = psd_sqrt(rho.matrix())?;
    let inner = &(&s * sigma.matrix()) * &s;
    let inner = &(&inner + &inner.adjoint()).scale_re(0.5);
    Ok(psd_sqrt(inner)?.trace().re.clamp(0.0, 1.0))
}

pub fn angle_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(fidelity(rho, sigma)?.acos())
}

fn spectrum(rho: &DensityOperator) -> Vec<f64> {
    hermitian_eigen(rho.matrix())
        .expect("density operators are Hermitian")
        .values
        .into_iter()
        .map(|l| if l < EIG_ZERO { 0.0 } else { l })
        .collect()
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of(&spectrum(rho)).max(0.0)
}

/// `Tr ρ(log ρ − log σ)`, `+∞` when the support of ρ is not inside that of σ.
pub fn umegaki_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let es = hermitian_eigen(sigma.matrix())?;
    let mut cross = 0.0;
    for (mu, v) in es.values.iter().zip(&es.vectors) {
        let w = rho.expect(&CMatrix::outer(v)).re;
        if *mu < EIG_ZERO {
            if w > 1e-12 {
                return Ok(f64::INFINITY);
            }
        } else if w > 0.0 {
            cross += w * mu.log2();
        }
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

pub fn holevo_chi(e: &Ensemble) -> f64 {
    let mixed: f64 = e.weights.iter().zip(&e.states).map(|(w, r)| w * von_neumann_entropy(r)).sum();
    (von_neumann_entropy(&e.mean()) - mixed).max(0.0)
}

fn completeness_defect(ops: &[CMatrix]) -> Result<f64> {
    ensure!(!ops.is_empty(), Validation, "empty operator family");
    let d = ops[0].dim();
    ensure!(ops.iter().all(|v| v.dim() == d), Validation, "operators differ in dimension");
    let mut s = CMatrix::zeros(d);
    for v in ops {
        s = &s + &(&v.adjoint() * v);
    }
    Ok(s.max_abs_diff(&CMatrix::identity(d)))
}

/// Completely positive trace-preserving map `ρ ↦ Σ V ρ V†`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KrausChannel {
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let defect = completeness_defect(&ops)?;
        ensure!(defect <= KRAUS_TOL, Validation, "Kraus operators are not complete (defect {defect:e})");
        Ok(KrausChannel { ops })
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel { ops: vec![CMatrix::identity(d)] }
    }

    pub fn depolarizing_qubit() -> Self {
        let mut ops = vec![CMatrix::identity(2).scale_re(0.5)];
        ops.extend(CMatrix::paulis().into_iter().map(|s| s.scale_re(0.5)));
        KrausChannel { ops }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn apply_ensemble(&self, e: &Ensemble) -> Result<Ensemble> {
        let states = e.states.iter().map(|r| apply_channel(self, r)).collect::<Result<Vec<_>>>()?;
        Ensemble::new(e.weights.clone(), states)
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    ensure!(ch.dim() == rho.dim(), Usage, "channel acts on dimension {}, state has {}", ch.dim(), rho.dim());
    let mut out = CMatrix::zeros(rho.dim());
    for v in &ch.ops {
        out = &out + &(&(v * rho.matrix()) * &v.adjoint());
    }
    Ok(DensityOperator(out))
}

/// Operational partition of unity: `Σ V† V = I`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Opu {
    ops: Vec<CMatrix>,
}

impl Opu {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let defect = completeness_defect(&ops)?;
        ensure!(defect <= KRAUS_TOL, Validation, "operators do not sum to the identity (defect {defect:e})");
        Ok(Opu { ops })
    }

    pub fn computational(d: usize) -> Self {
        let ops = (0..d)
            .map(|i| {
                let mut m = CMatrix::zeros(d);
                m[(i, i)] = c(1.0, 0.0);
                m
            })
            .collect();
        Opu { ops }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }
}

/// Outcome law `p_i = Tr(V_i ρ V_i†)`.
pub fn opu_probabilities(opu: &Opu, rho: &DensityOperator) -> Result<Distribution> {
    ensure!(opu.ops[0].dim() == rho.dim(), Usage, "measurement and state dimensions differ");
    let p: Vec<f64> = opu
        .ops
        .iter()
        .map(|v| (&(v * rho.matrix()) * &v.adjoint()).trace().re.max(0.0))
        .collect();
    Distribution::normalized(&p)
}

/// Eigen-ensemble with descending weights.
pub fn schatten_decomposition(rho: &DensityOperator) -> Result<Ensemble> {
    let e = hermitian_eigen(rho.matrix())?;
    let mut weights: Vec<f64> = e.values.iter().rev().map(|l| l.max(0.0)).collect();
    let s: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= s);
    let states = e.vectors.iter().rev().map(|v| DensityOperator(CMatrix::outer(v))).collect();
    Ensemble::new(weights, states)
}

/// Orthogonal projection onto `span(basis)` in the Hilbert–Schmidt inner product.
#[derive(Clone, Debug)]
pub struct ConditionalExpectation {
    onb: Vec<CMatrix>,
}

impl ConditionalExpectation {
    pub fn new(basis: &[CMatrix]) -> Result<Self> {
        ensure!(!basis.is_empty(), Validation, "empty basis");
        let d = basis[0].dim();
        ensure!(basis.iter().all(|b| b.dim() == d), Validation, "basis elements differ in dimension");
        let mut onb: Vec<CMatrix> = Vec::new();
        for (k, b) in basis.iter().enumerate() {
            let scale = b.frobenius();
            let mut r = b.clone();
            for u in &onb {
                r = &r - &u.scale(u.hs_inner(&r));
            }
            let n = r.frobenius();
            ensure!(n > 1e-10 * scale.max(1.0), Validation, "basis element {k} is linearly dependent on the previous ones");
            onb.push(r.scale_re(1.0 / n));
        }
        Ok(ConditionalExpectation { onb })
    }

    pub fn apply(&self, a: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(a.dim());
        for u in &self.onb {
            out = &out + &u.scale(u.hs_inner(a));
        }
        out
    }
}

pub fn conditional_expectation_hs(basis: &[CMatrix], a: &CMatrix) -> Result<CMatrix> {
    ensure!(basis.iter().all(|b| b.dim() == a.dim()), Usage, "argument and basis dimensions differ");
    Ok(ConditionalExpectation::new(basis)?.apply(a))
}

/// `{σ1, σ2, σ3, I}`.
pub fn pauli_basis() -> [CMatrix; 4] {
    let [x, y, z] = CMatrix::paulis();
    [x, y, z, CMatrix::identity(2)]
}

/// `σ_i ⊗ σ_j` over the Pauli basis with the identity last.
pub fn two_qubit_basis() -> Vec<Vec<CMatrix>> {
    let b = pauli_basis();
    b.iter().map(|ei| b.iter().map(|ej| ei.kron(ej)).collect()).collect()
}

pub fn singlet() -> Vec<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]
}

/// Alice's algebra `M_2 ⊗ I` inside `M_4`.
pub fn alice_algebra() -> Vec<CMatrix> {
    let id = CMatrix::identity(2);
    pauli_basis().iter().map(|e| e.kron(&id)).collect()
}

/// Posterior `ω(E(a))` for the singlet after projecting onto Alice's algebra, `a = Σ c_ij e_i ⊗ e_j`.
pub fn epr_posterior(coeffs: &[[C64; 4]; 4]) -> Result<C64> {
    let basis = two_qubit_basis();
    let mut a = CMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            a = &a + &basis[i][j].scale(coeffs[i][j]);
        }
    }
    let ea = conditional_expectation_hs(&alice_algebra(), &a)?;
    Ok(DensityOperator::pure(&singlet())?.expect(&ea))
}

#[cfg(test)]
mod tests;
