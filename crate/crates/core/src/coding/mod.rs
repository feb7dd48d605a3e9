//! Prefix codes, entropies, equipartition, empirical Sanov decay and a toy Chaitin machine.

mod chaitin;
mod distribution;
mod prefix;

pub use chaitin::{omega_lower_bound, Op, ToyChaitinMachine};
pub use distribution::Distribution;
pub use prefix::{
    average_codeword_length, build_prefix_code, huffman_code, is_prefix_free, kraft_sum,
    PrefixCode,
};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{ensure, Result};
use crate::exact::log2_biguint;

/// `p log2 p` with `0 log 0 = 0`.
fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

pub fn entropy_of(weights: &[f64]) -> f64 {
    -weights.iter().map(|&p| plogp(p)).sum::<f64>()
}

pub fn shannon_entropy(p: &Distribution) -> f64 {
    entropy_of(p.weights())
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of(&[p, 1.0 - p])
}

/// Relative entropy in bits; `+inf` when `P` is not absolutely continuous w.r.t. `Q`.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    ensure!(p.labels() == q.labels(), Usage, "distributions have different supports");
    let mut s = 0.0;
    for (&pi, &qi) in p.weights().iter().zip(q.weights()) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        s += pi * (pi / qi).log2();
    }
    Ok(s.max(0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct JointEntropies {
    pub h_a: f64,
    pub h_b: f64,
    pub h_ab: f64,
    pub h_b_given_a: f64,
    pub mutual: f64,
}

/// Entropies of a joint law given as a matrix `joint[a][b]`.
pub fn joint_entropy_suite(joint: &[Vec<f64>]) -> Result<JointEntropies> {
    ensure!(!joint.is_empty(), Usage, "empty joint distribution");
    let cols = joint[0].len();
    ensure!(joint.iter().all(|r| r.len() == cols), Usage, "ragged joint table");
    let total: f64 = joint.iter().flatten().sum();
    ensure!((total - 1.0).abs() <= 1e-12, Validation, "joint weights sum to {total}");
    ensure!(joint.iter().flatten().all(|&w| w >= 0.0), Validation, "negative joint weight");
    let pa: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let pb: Vec<f64> = (0..cols).map(|j| joint.iter().map(|r| r[j]).sum()).collect();
    let h_a = entropy_of(&pa);
    let h_b = entropy_of(&pb);
    let h_ab = entropy_of(&joint.iter().flatten().copied().collect::<Vec<_>>());
    let h_b_given_a = joint
        .iter()
        .zip(&pa)
        .filter(|(_, &w)| w > 0.0)
        .map(|(row, &w)| w * entropy_of(&row.iter().map(|x| x / w).collect::<Vec<_>>()))
        .sum();
    Ok(JointEntropies { h_a, h_b, h_ab, h_b_given_a, mutual: h_a + h_b - h_ab })
}

#[derive(Clone, Debug, Serialize)]
pub struct TypicalSetReport {
    pub n: usize,
    pub epsilon: f64,
    pub entropy: f64,
    pub members: u64,
    pub mass: f64,
    /// Exact mass when the source law is rational.
    pub mass_exact: Option<String>,
    pub log2_members: f64,
    pub log2_bound: f64,
    pub bound_holds: bool,
}

/// Exhaustive typical-set census for a Bernoulli source on `{0,1}`.
///
/// Strings with the same number of ones share one probability, so the census runs over
/// weight classes; the count per class is exact.
pub fn typical_set(p: &Distribution, n: usize, epsilon: f64) -> Result<TypicalSetReport> {
    ensure!(p.len() == 2, Usage, "typical_set needs a law on {{0,1}}");
    ensure!(n <= 24, Resource, "n = {n} exceeds the exhaustive limit 24");
    ensure!(epsilon > 0.0, Usage, "epsilon must be positive");
    let h = shannon_entropy(p);
    let (p0, p1) = (p.weights()[0], p.weights()[1]);
    let mut members = 0u64;
    let mut mass = 0.0;
    let mut mass_exact = p.exact().map(|_| BigRational::zero());
    for k in 0..=n {
        let count = binomial(n as u64, k as u64);
        let logp = times_log2(n - k, p0) + times_log2(k, p1);
        if !logp.is_finite() {
            continue;
        }
        let rate = -logp / n.max(1) as f64;
        if rate > h - epsilon && rate < h + epsilon {
            members += count.to_u64().unwrap();
            mass += count.to_f64().unwrap() * logp.exp2();
            if let (Some(m), Some(ex)) = (mass_exact.as_mut(), p.exact()) {
                let term = num_traits::pow(ex[0].clone(), n - k) * num_traits::pow(ex[1].clone(), k);
                *m += term * BigRational::from_integer(count.into());
            }
        }
    }
    let log2_members = if members == 0 { f64::NEG_INFINITY } else { (members as f64).log2() };
    let log2_bound = n as f64 * (h + epsilon);
    Ok(TypicalSetReport {
        n,
        epsilon,
        entropy: h,
        members,
        mass,
        mass_exact: mass_exact.map(|m| crate::exact::ratio_string(&m)),
        log2_members,
        log2_bound,
        bound_holds: log2_members <= log2_bound,
    })
}

/// `k log2 p` with `0 log 0 = 0`.
fn times_log2(k: usize, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * log2_or_neg_inf(p)
    }
}

fn log2_or_neg_inf(p: f64) -> f64 {
    if p > 0.0 {
        p.log2()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct SanovRow {
    pub n: usize,
    pub realizable: bool,
    pub ones: usize,
    pub probability: f64,
    pub rate: f64,
    pub kl: f64,
}

/// Exact probability that `n` draws from `mu` have type `(1 - q1, q1)`, with its decay rate.
pub fn sanov_decay(mu: &Distribution, q1: &BigRational, ns: &[usize]) -> Result<Vec<SanovRow>> {
    ensure!(mu.len() == 2, Usage, "sanov_decay needs a law on {{0,1}}");
    ensure!(*q1 >= BigRational::zero() && *q1 <= BigRational::one(), Usage, "type outside [0,1]");
    let qf = crate::exact::ratio_to_f64(q1);
    let q = Distribution::from_f64(vec![1.0 - qf, qf])?;
    let kl = kl_divergence(&q, mu)?;
    let (m0, m1) = (mu.weights()[0], mu.weights()[1]);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let k = q1 * BigRational::from_integer(n.into());
        if n == 0 || !k.is_integer() {
            rows.push(SanovRow { n, realizable: false, ones: 0, probability: f64::NAN, rate: f64::NAN, kl });
            continue;
        }
        let k = k.to_integer().to_usize().unwrap();
        let log2p = log2_biguint(&binomial(n as u64, k as u64))
            + times_log2(k, m1)
            + times_log2(n - k, m0);
        rows.push(SanovRow {
            n,
            realizable: true,
            ones: k,
            probability: log2p.exp2(),
            rate: -log2p / n as f64,
            kl,
        });
    }
    Ok(rows)
}
