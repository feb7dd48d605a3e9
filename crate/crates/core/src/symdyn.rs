//! Binary shifts, block-entropy and compression estimates of entropy rate, and the symbolic
//! translator.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{string_of_index, BitString};
use crate::coding::{binary_entropy, entropy_of};
use crate::error::{ensure, Result};
use crate::mltests::complexity_upper_bound;
use crate::rng::{stream_rng, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShiftSpec {
    Bernoulli { p: [f64; 2] },
    Markov { e: [f64; 2], matrix: [[f64; 2]; 2] },
}

fn stochastic(v: &[f64; 2]) -> bool {
    v.iter().all(|&x| (0.0..=1.0).contains(&x)) && (v[0] + v[1] - 1.0).abs() <= 1e-10
}

impl ShiftSpec {
    pub fn bernoulli(p1: f64) -> Result<Self> {
        let s = ShiftSpec::Bernoulli { p: [1.0 - p1, p1] };
        s.validate()?;
        Ok(s)
    }

    pub fn markov(e: [f64; 2], matrix: [[f64; 2]; 2]) -> Result<Self> {
        let s = ShiftSpec::Markov { e, matrix };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ShiftSpec::Bernoulli { p } => {
                ensure!(stochastic(p), Validation, "{p:?} is not a stochastic vector");
            }
            ShiftSpec::Markov { e, matrix } => {
                ensure!(stochastic(e), Validation, "{e:?} is not a stochastic vector");
                ensure!(matrix.iter().all(stochastic), Validation, "rows of {matrix:?} are not stochastic");
            }
        }
        Ok(())
    }
}

pub fn sample_trajectory(shift: &ShiftSpec, n: usize, seed: u64) -> Result<BitString> {
    shift.validate()?;
    ensure!(n >= 1, Usage, "trajectory length must be positive");
    let mut rng = stream_rng(seed, Stream::Shift);
    let bits = match shift {
        ShiftSpec::Bernoulli { p } => (0..n).map(|_| (rng.random::<f64>() < p[1]) as u8).collect(),
        ShiftSpec::Markov { e, matrix } => {
            let mut out = Vec::with_capacity(n);
            let mut s = (rng.random::<f64>() < e[1]) as usize;
            out.push(s as u8);
            for _ in 1..n {
                s = (rng.random::<f64>() < matrix[s][1]) as usize;
                out.push(s as u8);
            }
            out
        }
    };
    Ok(BitString::from_bits_unchecked(bits))
}

/// Closed-form entropy rate of the generating partition, bits per symbol.
pub fn exact_entropy_rate(shift: &ShiftSpec) -> f64 {
    match shift {
        ShiftSpec::Bernoulli { p } => binary_entropy(p[1]),
        ShiftSpec::Markov { e, matrix } => {
            let pi = stationary(e, matrix);
            pi[0] * entropy_of(&matrix[0]) + pi[1] * entropy_of(&matrix[1])
        }
    }
}

/// Stationary law of a two-state chain; `e` itself when the chain is reducible with two closed classes.
pub fn stationary(e: &[f64; 2], matrix: &[[f64; 2]; 2]) -> [f64; 2] {
    let (a, b) = (matrix[0][1], matrix[1][0]);
    if a + b <= 0.0 {
        *e
    } else {
        [b / (a + b), a / (a + b)]
    }
}

/// Plug-in entropy of overlapping `k`-blocks, divided by `k`.
pub fn block_entropy_estimate(x: &BitString, k: usize) -> Result<f64> {
    ensure!((1..=24).contains(&k), Usage, "block length {k} outside 1..=24");
    ensure!(x.len() >= 64usize << k, Resource, "need {} bits for k = {k}, have {}", 64usize << k, x.len());
    let b = x.bits();
    let mut counts: HashMap<u32, u64> = HashMap::new();
    let mut w: u32 = b[..k - 1].iter().fold(0, |a, &bit| (a << 1) | bit as u32);
    let mask = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    for &bit in &b[k - 1..] {
        w = ((w << 1) | bit as u32) & mask;
        *counts.entry(w).or_insert(0) += 1;
    }
    let total = (b.len() - k + 1) as f64;
    let probs: Vec<f64> = counts.values().map(|&c| c as f64 / total).collect();
    Ok(entropy_of(&probs) / k as f64)
}

/// `K̂(x) / |x|`.
pub fn brudno_rate(x: &BitString) -> Result<f64> {
    ensure!(x.len() >= 1 << 12, Usage, "need at least 4096 bits, have {}", x.len());
    Ok(complexity_upper_bound(x) as f64 / x.len() as f64)
}

/// Width of the translator codewords for `atom_count` atoms.
pub fn translator_width(atom_count: usize) -> usize {
    let w = (usize::BITS - (atom_count - 1).leading_zeros()) as usize;
    w.max(1)
}

/// Codeword of atom `j`: `string(j)` left-padded as `0…0 1 string(j)` to the common width.
/// Words already at full width are unchanged; the padded form is the width-bit binary of `j+1`.
pub fn translator_codeword(j: usize, atom_count: usize) -> BitString {
    let w = translator_width(atom_count);
    let s = string_of_index(j as u64);
    if s.len() == w {
        return s;
    }
    let mut bits = vec![0u8; w - s.len() - 1];
    bits.push(1);
    bits.extend_from_slice(s.bits());
    BitString::from_bits_unchecked(bits)
}

pub fn symbolic_translate(labels: &[usize], atom_count: usize) -> Result<BitString> {
    ensure!(atom_count >= 1, Usage, "need at least one atom");
    if let Some(&bad) = labels.iter().find(|&&l| l >= atom_count) {
        return Err(crate::Error::Usage(format!("label {bad} out of range for {atom_count} atoms")));
    }
    let mut out = Vec::with_capacity(labels.len() * translator_width(atom_count));
    for &l in labels {
        out.extend_from_slice(translator_codeword(l, atom_count).bits());
    }
    Ok(BitString::from_bits_unchecked(out))
}
