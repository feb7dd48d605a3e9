//! Catalan combinatorics, walks on lattices and trees, Wigner spectra and free Fock-space moments.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coding::binomial;
use crate::error::{ensure, Result};
use crate::linalg::{c, hermitian_eigen, CMatrix, C64};
use crate::rng::{gaussian, substream_rng, Stream};

pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// `(2m − 1)!!`, with `(−1)!! = 1`.
pub fn double_factorial_odd(m: u64) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, k| acc * BigUint::from(2 * k - 1))
}

pub fn gaussian_moment(n: u64) -> BigUint {
    if n % 2 == 1 {
        BigUint::zero()
    } else {
        double_factorial_odd(n / 2)
    }
}

pub fn semicircle_moment(n: u64) -> BigUint {
    if n % 2 == 1 {
        BigUint::zero()
    } else {
        catalan(n / 2)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    // the first levels always split so symmetric zeros cannot stop the recursion
    if depth == 0 || (depth < 46 && (left + right - whole).abs() <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f((a + b) / 2.0));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫ xⁿ sc(x) dx` by quadrature after `x = 2 sin θ`.
pub fn semicircle_moment_numeric(n: u32) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    integrate(|t| (2.0 * t.sin()).powi(n as i32) * 4.0 * t.cos().powi(2) / (2.0 * PI), -FRAC_PI_2, FRAC_PI_2, 1e-13)
}

/// Standard semicircle density on `[−2, 2]`.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI)
    }
}

pub fn semicircle_cdf(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
    }
}

pub const MAX_PARTITION_POINTS: usize = 14;

type Pair = (usize, usize);

fn pairings(rest: &mut Vec<usize>, current: &mut Vec<Pair>, visit: &mut dyn FnMut(&[Pair])) {
    if rest.is_empty() {
        visit(current);
        return;
    }
    let first = rest.remove(0);
    for k in 0..rest.len() {
        let partner = rest.remove(k);
        current.push((first, partner));
        pairings(rest, current, visit);
        current.pop();
        rest.insert(k, partner);
    }
    rest.insert(0, first);
}

fn crossing(p: &[(usize, usize)]) -> bool {
    p.iter().any(|&(a, b)| p.iter().any(|&(c, d)| a < c && c < b && b < d))
}

fn count_pairings(points: usize, noncrossing_only: bool) -> Result<u64> {
    ensure!(points % 2 == 0, Usage, "pair partitions need an even number of points, got {points}");
    ensure!(points <= MAX_PARTITION_POINTS, Resource, "enumeration capped at {MAX_PARTITION_POINTS} points, got {points}");
    let mut count = 0u64;
    let mut rest: Vec<usize> = (0..points).collect();
    pairings(&mut rest, &mut Vec::new(), &mut |p| {
        if !noncrossing_only || !crossing(p) {
            count += 1;
        }
    });
    Ok(count)
}

pub fn count_pair_partitions(points: usize) -> Result<u64> {
    count_pairings(points, false)
}

pub fn count_noncrossing_pair_partitions(points: usize) -> Result<u64> {
    count_pairings(points, true)
}

/// Return probability of the simple walk on `Z^D` after `t` steps.
pub fn zd_walk_return(dim: usize, t: usize) -> Result<BigRational> {
    ensure!((1..=3).contains(&dim), Usage, "dimension must be 1..=3, got {dim}");
    ensure!(t <= 24, Resource, "t = {t} exceeds 24");
    let mut cur: HashMap<Vec<i32>, u128> = HashMap::from([(vec![0; dim], 1)]);
    for _ in 0..t {
        let mut next: HashMap<Vec<i32>, u128> = HashMap::with_capacity(cur.len() * 2);
        for (x, n) in &cur {
            for axis in 0..dim {
                for step in [-1, 1] {
                    let mut y = x.clone();
                    y[axis] += step;
                    *next.entry(y).or_insert(0) += n;
                }
            }
        }
        cur = next;
    }
    let back = cur.get(&vec![0; dim]).copied().unwrap_or(0);
    Ok(BigRational::new(BigUint::from(back).into(), BigUint::from(2 * dim as u64).pow(t as u32).into()))
}

/// Number of closed walks of length `t` at the identity of the free group on `dim` generators.
pub fn free_walk_closed_count(dim: usize, t: usize) -> u128 {
    let deg = 2 * dim as u128;
    // walks are counted by distance from the identity
    let mut cur = vec![0u128; t + 2];
    cur[0] = 1;
    for _ in 0..t {
        let mut next = vec![0u128; t + 2];
        for (k, &n) in cur.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if k == 0 {
                next[1] += n * deg;
            } else {
                next[k - 1] += n;
                if k + 1 < next.len() {
                    next[k + 1] += n * (deg - 1);
                }
            }
        }
        cur = next;
    }
    cur[0]
}

pub fn free_walk_return(dim: usize, t: usize) -> Result<BigRational> {
    ensure!((1..=3).contains(&dim), Usage, "generator count must be 1..=3, got {dim}");
    ensure!(t <= 14, Resource, "t = {t} exceeds 14");
    let n = free_walk_closed_count(dim, t);
    Ok(BigRational::new(BigUint::from(n).into(), BigUint::from(2 * dim as u64).pow(t as u32).into()))
}

/// Real symmetric matrix with `E a_ij² = (1 + δ_ij)/(n + 1)`.
pub fn goe_sample(n: usize, seed: u64, draw: u64) -> Result<CMatrix> {
    ensure!(n >= 2, Usage, "matrix size must be at least 2");
    let mut rng = substream_rng(seed, Stream::Matrices, draw);
    let mut m = CMatrix::zeros(n);
    let off = (1.0 / (n as f64 + 1.0)).sqrt();
    for i in 0..n {
        m[(i, i)] = c(gaussian(&mut rng) * off * 2f64.sqrt(), 0.0);
        for j in i + 1..n {
            let x = gaussian(&mut rng) * off;
            m[(i, j)] = c(x, 0.0);
            m[(j, i)] = c(x, 0.0);
        }
    }
    Ok(m)
}

/// Hermitian matrix with `E a_ii² = 1/n` and real and imaginary off-diagonal variances `1/(2n)`.
pub fn gue_sample(n: usize, seed: u64, draw: u64) -> Result<CMatrix> {
    ensure!(n >= 2, Usage, "matrix size must be at least 2");
    let mut rng = substream_rng(seed, Stream::Matrices, draw);
    let mut m = CMatrix::zeros(n);
    let diag = (1.0 / n as f64).sqrt();
    let off = (0.5 / n as f64).sqrt();
    for i in 0..n {
        m[(i, i)] = c(gaussian(&mut rng) * diag, 0.0);
        for j in i + 1..n {
            let z = c(gaussian(&mut rng) * off, gaussian(&mut rng) * off);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WignerEnsemble {
    Goe,
    Gue,
}

impl std::str::FromStr for WignerEnsemble {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "goe" => Ok(WignerEnsemble::Goe),
            "gue" => Ok(WignerEnsemble::Gue),
            _ => Err(crate::Error::Usage(format!("unknown ensemble {s:?}; use goe or gue"))),
        }
    }
}

pub fn wigner_samples(ensemble: WignerEnsemble, n: usize, draws: usize, seed: u64) -> Result<Vec<CMatrix>> {
    (0..draws as u64)
        .into_par_iter()
        .map(|k| match ensemble {
            WignerEnsemble::Goe => goe_sample(n, seed, k),
            WignerEnsemble::Gue => gue_sample(n, seed, k),
        })
        .collect()
}

/// `eτ_n(a²) = Tr(a²)/n`.
pub fn normalized_trace_square(a: &CMatrix) -> f64 {
    a.hs_inner(a).re / a.dim() as f64
}

fn to_nalgebra(a: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(a.dim(), a.dim(), a.entries())
}

/// Eigenvalues of a Hermitian matrix of any size, ascending.
pub fn hermitian_spectrum(a: &CMatrix) -> Result<Vec<f64>> {
    ensure!(a.is_hermitian(1e-9 * a.frobenius().max(1.0)), Validation, "matrix is not Hermitian");
    let mut v: Vec<f64> = if a.dim() <= 8 {
        hermitian_eigen(a)?.values
    } else if a.entries().iter().all(|z| z.im == 0.0) {
        let real = DMatrix::from_row_slice(a.dim(), a.dim(), &a.entries().iter().map(|z| z.re).collect::<Vec<_>>());
        SymmetricEigen::new(real).eigenvalues.iter().copied().collect()
    } else {
        SymmetricEigen::new(to_nalgebra(a)).eigenvalues.iter().copied().collect()
    };
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Kolmogorov–Smirnov distance between the pooled spectra and the standard semicircle.
pub fn spectral_ks_to_semicircle(samples: &[CMatrix]) -> Result<f64> {
    ensure!(!samples.is_empty(), Usage, "no matrices given");
    let n = samples[0].dim();
    ensure!(samples.iter().all(|m| m.dim() == n), Usage, "matrices differ in size");
    let spectra: Vec<Vec<f64>> = samples.par_iter().map(hermitian_spectrum).collect::<Result<_>>()?;
    let mut all: Vec<f64> = spectra.into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    let total = all.len() as f64;
    Ok(all
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = semicircle_cdf(x);
            (f - i as f64 / total).abs().max(((i + 1) as f64 / total - f).abs())
        })
        .fold(0.0, f64::max))
}

/// `eτ_n(abab)`.
pub fn mixed_moment_abab(a: &CMatrix, b: &CMatrix) -> f64 {
    let (x, y) = (to_nalgebra(a), to_nalgebra(b));
    let ab = &x * &y;
    (&ab * &ab).trace().re / a.dim() as f64
}

/// Truncated full Fock space over `letters` one-particle basis vectors.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub letters: usize,
    pub depth: usize,
}

type FockVector = HashMap<Vec<u8>, f64>;

impl FockSpace {
    pub fn new(letters: usize, depth: usize) -> Result<Self> {
        ensure!((1..=255).contains(&letters), Usage, "letter count must be 1..=255");
        Ok(FockSpace { letters, depth })
    }

    pub fn vacuum() -> FockVector {
        HashMap::from([(Vec::new(), 1.0)])
    }

    /// `(c(e_i) + c(e_i)†) v`.
    pub fn apply_field(&self, i: usize, v: &FockVector) -> Result<FockVector> {
        ensure!(i < self.letters, Usage, "letter {i} outside the one-particle space of dimension {}", self.letters);
        let mut out: FockVector = HashMap::with_capacity(v.len() * 2);
        for (w, &x) in v {
            if x == 0.0 {
                continue;
            }
            if w.len() >= self.depth {
                return Err(crate::Error::Truncation(format!("creation beyond depth {}", self.depth)));
            }
            let mut up = Vec::with_capacity(w.len() + 1);
            up.push(i as u8);
            up.extend_from_slice(w);
            *out.entry(up).or_insert(0.0) += x;
            if w.first() == Some(&(i as u8)) {
                *out.entry(w[1..].to_vec()).or_insert(0.0) += x;
            }
        }
        Ok(out)
    }

    /// `Σ_i coeffs[i] a_i` applied to `v`.
    pub fn apply_sum(&self, coeffs: &[f64], v: &FockVector) -> Result<FockVector> {
        let mut out: FockVector = HashMap::new();
        for (i, &k) in coeffs.iter().enumerate() {
            for (w, x) in self.apply_field(i, v)? {
                *out.entry(w).or_insert(0.0) += k * x;
            }
        }
        Ok(out)
    }
}

/// Parses a product pattern over letters `a, b, c, …`; a digit or superscript after a letter is a power.
pub fn parse_pattern(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        ensure!(ch.is_ascii_lowercase(), Parse, "unexpected {ch:?} in pattern {s:?}");
        let letter = (ch as u8 - b'a') as usize;
        i += 1;
        let mut power = 1;
        if i < chars.len() {
            let p = match chars[i] {
                d @ '0'..='9' => Some(d as usize - '0' as usize),
                '²' => Some(2),
                '³' => Some(3),
                '⁴' => Some(4),
                _ => None,
            };
            if let Some(p) = p {
                power = p;
                i += 1;
            }
        }
        out.extend(std::iter::repeat_n(letter, power));
    }
    Ok(out)
}

/// Vacuum expectation of `a_{w1} ⋯ a_{wk}` with `a_i = c(e_i) + c(e_i)†`.
pub fn fock_free_moments(letters: usize, depth: usize, word: &[usize]) -> Result<f64> {
    let fock = FockSpace::new(letters, depth)?;
    ensure!(depth >= word.len(), Truncation, "depth {depth} below pattern length {}", word.len());
    let mut v = FockSpace::vacuum();
    for &i in word.iter().rev() {
        v = fock.apply_field(i, &v)?;
    }
    Ok(v.get(&Vec::new()).copied().unwrap_or(0.0))
}

/// Moments with Hankel positivity recorded.
#[derive(Clone, Debug, Serialize)]
pub struct MomentSequence {
    pub moments: Vec<f64>,
    pub hankel_psd: bool,
}

impl MomentSequence {
    pub fn new(moments: Vec<f64>) -> Result<Self> {
        ensure!(moments.first() == Some(&1.0), Validation, "m_0 must be 1");
        let k = (moments.len() - 1) / 2;
        let mut h = CMatrix::zeros(k + 1);
        for i in 0..=k {
            for j in 0..=k {
                h[(i, j)] = c(moments[i + j], 0.0);
            }
        }
        let scale = moments.iter().fold(1.0f64, |a, m| a.max(m.abs()));
        let hankel_psd = hermitian_eigen(&h)?.values[0] >= -1e-9 * scale;
        Ok(MomentSequence { moments, hankel_psd })
    }
}

/// Moments `m_0..m_k` of `(a_1 + ⋯ + a_n)/√n` in the vacuum state.
pub fn free_clt_moments(n: usize, order: usize, depth: usize) -> Result<MomentSequence> {
    ensure!(n >= 1, Usage, "need at least one summand");
    ensure!(order <= 8, Usage, "order capped at 8, got {order}");
    ensure!(depth >= order, Truncation, "depth {depth} below order {order}");
    let live = (n as f64).powi((order / 2) as i32);
    ensure!(live <= 1e6, Usage, "{n} summands at order {order} need about {live:.0} words");
    let fock = FockSpace::new(n, depth)?;
    let coeffs = vec![1.0 / (n as f64).sqrt(); n];
    let mut v = FockSpace::vacuum();
    let mut moments = vec![1.0];
    for step in 1..=order {
        v = fock.apply_sum(&coeffs, &v)?;
        v.retain(|w, _| w.len() <= order - step);
        moments.push(v.get(&Vec::new()).copied().unwrap_or(0.0));
    }
    MomentSequence::new(moments)
}

type Grid = Vec<Vec<f64>>;

/// Sample mean of `eτ_n(a²)` and the entrywise second moments over many draws.
pub fn entry_variances(ensemble: WignerEnsemble, n: usize, draws: usize, seed: u64) -> Result<(Grid, Grid)> {
    let samples = wigner_samples(ensemble, n, draws, seed)?;
    let mut mean = vec![vec![0.0; n]; n];
    let mut sq = vec![vec![0.0; n]; n];
    for m in &samples {
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)].norm_sqr();
                mean[i][j] += v / draws as f64;
                sq[i][j] += v * v / draws as f64;
            }
        }
    }
    Ok((mean, sq))
}

#[cfg(test)]
mod tests;
