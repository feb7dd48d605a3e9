//! Small dense complex matrices with a cyclic Jacobi eigen-solver.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::RngCore;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ensure, Result};
use crate::rng::gaussian;

pub type C64 = Complex64;

pub const JACOBI_TOL: f64 = 1e-12;
const CLUSTER_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        ensure!(dim >= 1, Validation, "matrix must have dimension at least 1");
        ensure!(rows.iter().all(|r| r.len() == dim), Validation, "matrix is not square");
        let data: Vec<C64> = rows.into_iter().flatten().collect();
        ensure!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()), Validation, "non-finite entry");
        Ok(CMatrix { dim, data })
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        CMatrix { dim, data }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(a† b)`.
    pub fn hs_inner(&self, other: &CMatrix) -> C64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut m = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        m[(i * b + k, j * b + l)] = self[(i, j)] * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        let d = v.len();
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        let mut m = Self::zeros(2);
        m[(0, 1)] = C64::new(0.0, -1.0);
        m[(1, 0)] = C64::new(0.0, 1.0);
        m
    }

    pub fn pauli_z() -> Self {
        Self::diag(&[1.0, -1.0])
    }

    pub fn paulis() -> [CMatrix; 3] {
        [Self::pauli_x(), Self::pauli_y(), Self::pauli_z()]
    }

    fn check_same(&self, other: &CMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, o: &CMatrix) -> CMatrix {
        self.check_same(o);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, o: &CMatrix) -> CMatrix {
        self.check_same(o);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, o: &CMatrix) -> CMatrix {
        self.check_same(o);
        let d = self.dim;
        let mut m = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m.data[i * d + j] += a * o.data[k * d + j];
                }
            }
        }
        m
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.data.chunks(self.dim).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect();
        MatrixJson { dim: self.dim, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        if j.entries.len() != j.dim {
            return Err(D::Error::custom(format!("expected {} rows, found {}", j.dim, j.entries.len())));
        }
        let rows = j.entries.into_iter().map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect();
        CMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues, eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

impl HermitianEigen {
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = self.values.len();
        let mut m = CMatrix::zeros(d);
        for (l, v) in self.values.iter().zip(&self.vectors) {
            let p = CMatrix::outer(v).scale_re(f(*l));
            m = &m + &p;
        }
        m
    }
}

fn off_norm_sq(a: &CMatrix) -> f64 {
    let d = a.dim;
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic Jacobi for Hermitian input, with canonical phases and canonical bases on degenerate clusters.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    ensure!(m.is_hermitian(1e-10 * m.frobenius().max(1.0)), Validation, "matrix is not Hermitian");
    let d = m.dim;
    let mut a = m.clone();
    for i in 0..d {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(d);
    let scale = m.frobenius().max(f64::MIN_POSITIVE);
    let mut converged = d == 1;
    for _ in 0..100 {
        if off_norm_sq(&a).sqrt() <= JACOBI_TOL * scale * 1e-3 {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let b = a[(p, q)];
                let nb = b.norm();
                if nb <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = b / nb;
                let (alpha, gamma) = (a[(p, p)].re, a[(q, q)].re);
                let tau = (gamma - alpha) / (2.0 * nb);
                let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // U = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane
                let ph = phase.conj();
                for k in 0..d {
                    let (ap, aq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = ap * cs - aq * ph * sn;
                    a[(k, q)] = ap * sn + aq * ph * cs;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * cs - vq * ph * sn;
                    v[(k, q)] = vp * sn + vq * ph * cs;
                }
                for k in 0..d {
                    let (ap, aq) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = ap * cs - aq * phase * sn;
                    a[(q, k)] = ap * sn + aq * phase * cs;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    ensure!(converged || off_norm_sq(&a).sqrt() <= JACOBI_TOL * scale, Resource, "Jacobi iteration did not converge");
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors: Vec<Vec<C64>> = order.iter().map(|&j| (0..d).map(|i| v[(i, j)]).collect()).collect();
    Ok(canonicalize(values, vectors))
}

fn dot(u: &[C64], w: &[C64]) -> C64 {
    u.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

fn normalize(v: &mut [C64]) {
    let n = dot(v, v).re.sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

/// Fix the phase so the first component of non-negligible modulus is real positive.
fn fix_phase(v: &mut [C64]) {
    let d = v.len() as f64;
    if let Some(z) = v.iter().copied().find(|z| z.norm_sqr() >= 0.5 / d) {
        let ph = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= ph);
    }
}

fn canonicalize(values: Vec<f64>, mut vectors: Vec<Vec<C64>>) -> HermitianEigen {
    let d = values.len();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (values[end] - values[start]).abs() <= CLUSTER_TOL * values[start].abs().max(1.0) {
            end += 1;
        }
        if end - start > 1 {
            let cluster: Vec<Vec<C64>> = vectors[start..end].to_vec();
            let project = |x: &[C64]| -> Vec<C64> {
                let mut out = vec![C64::new(0.0, 0.0); d];
                for u in &cluster {
                    let c = dot(u, x);
                    out.iter_mut().zip(u).for_each(|(o, ui)| *o += c * ui);
                }
                out
            };
            let mut chosen: Vec<Vec<C64>> = Vec::new();
            while chosen.len() < end - start {
                let mut pick = None;
                for i in 0..d {
                    let mut e = vec![C64::new(0.0, 0.0); d];
                    e[i] = C64::new(1.0, 0.0);
                    let mut r = project(&e);
                    for u in &chosen {
                        let c = dot(u, &r);
                        r.iter_mut().zip(u).for_each(|(ri, ui)| *ri -= c * ui);
                    }
                    if dot(&r, &r).re >= 0.5 / d as f64 {
                        pick = Some(r);
                        break;
                    }
                }
                let mut r = pick.expect("residual mass guarantees a pick");
                normalize(&mut r);
                chosen.push(r);
            }
            vectors.splice(start..end, chosen);
        }
        start = end;
    }
    vectors.iter_mut().for_each(|v| fix_phase(v));
    HermitianEigen { values, vectors }
}

/// Square root of a positive semidefinite Hermitian matrix; tiny negative eigenvalues clip to 0.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    Ok(hermitian_eigen(m)?.reconstruct_with(|l| l.max(0.0).sqrt()))
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let mut s: Vec<f64> = hermitian_eigen(&(&m.adjoint() * m))?.values.into_iter().map(|l| l.max(0.0).sqrt()).collect();
    s.reverse();
    Ok(s)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Eigenvalues of a 2×2 complex matrix from its characteristic polynomial.
pub fn eigenvalues_2x2(m: &CMatrix) -> Result<[C64; 2]> {
    ensure!(m.dim == 2, Usage, "closed-form eigenvalues need a 2×2 matrix, got {}×{}", m.dim, m.dim);
    let t = m.trace();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (t * t - det * 4.0).sqrt();
    Ok([(t + disc) / 2.0, (t - disc) / 2.0])
}

pub fn spectral_radius_2x2(m: &CMatrix) -> Result<f64> {
    let [a, b] = eigenvalues_2x2(m)?;
    Ok(a.norm().max(b.norm()))
}

fn random_complex_vector<R: RngCore + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    (0..d).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect()
}

/// Haar-distributed unit vector in `C^d`.
pub fn random_pure_state<R: RngCore + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    let mut v = random_complex_vector(rng, d);
    normalize(&mut v);
    v
}

/// Haar unitary by Gram–Schmidt on a complex Ginibre matrix; columns are returned as vectors.
pub fn random_unitary<R: RngCore + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let cols = random_isometry_columns(rng, d, d);
    let mut u = CMatrix::zeros(d);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..d {
            u[(i, j)] = col[i];
        }
    }
    u
}

/// `k` orthonormal columns in `C^d`.
pub fn random_isometry_columns<R: RngCore + ?Sized>(rng: &mut R, d: usize, k: usize) -> Vec<Vec<C64>> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v = random_complex_vector(rng, d);
        for u in &cols {
            let c = dot(u, &v);
            v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= c * ui);
        }
        if dot(&v, &v).re > 1e-12 {
            normalize(&mut v);
            cols.push(v);
        }
    }
    cols
}

/// Random density matrix `G G† / Tr` from a Ginibre matrix of the given rank.
pub fn random_density<R: RngCore + ?Sized>(rng: &mut R, d: usize, rank: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d);
    for _ in 0..rank {
        m = &m + &CMatrix::outer(&random_complex_vector(rng, d));
    }
    let t = m.trace().re;
    m.scale_re(1.0 / t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};

    fn char_poly_eigs_hermitian_2x2(m: &CMatrix) -> (f64, f64) {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)].norm_sqr();
        let mid = (a + d) / 2.0;
        let r = (((a - d) / 2.0).powi(2) + b).sqrt();
        (mid - r, mid + r)
    }

    #[test]
    fn jacobi_matches_characteristic_polynomial_2x2() {
        let mut rng = stream_rng(11, Stream::Quantum);
        for _ in 0..500 {
            let g = random_density(&mut rng, 2, 2);
            let h = &g + &CMatrix::pauli_y().scale_re(gaussian(&mut rng));
            let e = hermitian_eigen(&h).unwrap();
            let (lo, hi) = char_poly_eigs_hermitian_2x2(&h);
            assert!((e.values[0] - lo).abs() < 1e-12 && (e.values[1] - hi).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_reconstructs_and_is_unitary() {
        let mut rng = stream_rng(12, Stream::Quantum);
        for d in 1..=8 {
            for _ in 0..20 {
                let u = random_unitary(&mut rng, d);
                let h0: Vec<f64> = (0..d).map(|_| gaussian(&mut rng)).collect();
                let h = &(&u * &CMatrix::diag(&h0)) * &u.adjoint();
                let e = hermitian_eigen(&h).unwrap();
                assert!(e.reconstruct_with(|x| x).max_abs_diff(&h) < 1e-10);
                let mut sorted = h0.clone();
                sorted.sort_by(f64::total_cmp);
                for (a, b) in e.values.iter().zip(&sorted) {
                    assert!((a - b).abs() < 1e-10);
                }
                for (i, vi) in e.vectors.iter().enumerate() {
                    for (j, vj) in e.vectors.iter().enumerate() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((dot(vi, vj) - C64::new(want, 0.0)).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_basis_is_canonical() {
        let e = hermitian_eigen(&CMatrix::identity(3).scale_re(0.5)).unwrap();
        for (i, v) in e.vectors.iter().enumerate() {
            for (j, z) in v.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((z - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        let mut rng = stream_rng(3, Stream::Quantum);
        let u = random_unitary(&mut rng, 2);
        let rotated = &(&u * &CMatrix::identity(2)) * &u.adjoint();
        let e2 = hermitian_eigen(&rotated).unwrap();
        assert!((e2.vectors[0][0] - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn norms() {
        let m = CMatrix::from_real(&[&[3.0, 0.0], &[4.0, 5.0]]);
        // singular values of [[3,0],[4,5]]: sqrt(45), sqrt(5)
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 45f64.sqrt()).abs() < 1e-12 && (s[1] - 5f64.sqrt()).abs() < 1e-12);
        assert!((spectral_radius_2x2(&m).unwrap() - 5.0).abs() < 1e-12);
        assert!((trace_norm(&CMatrix::pauli_x()).unwrap() - 2.0).abs() < 1e-12);
        assert!(spectral_radius_2x2(&CMatrix::identity(3)).is_err());
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = stream_rng(4, Stream::Quantum);
        for d in 2..=4 {
            let r = random_density(&mut rng, d, d);
            let s = psd_sqrt(&r).unwrap();
            assert!((&s * &s).max_abs_diff(&r) < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let m = CMatrix::pauli_y();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"dim":2,"entries":[[[0.0,0.0],[0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]}"#);
        assert_eq!(serde_json::from_str::<CMatrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<CMatrix>(r#"{"dim":2,"entries":[[[1,0]]]}"#).is_err());
    }
}
