//! Finite binary words, lazily generated binary sequences, and their file formats.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{ensure, Error, Result};
use crate::exact::Dyadic;

/// A finite word over `{0,1}`. Symbols are stored one per byte.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    /// Builds from raw symbols; every entry must be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        ensure!(bits.iter().all(|&b| b <= 1), Parse, "symbol outside {{0,1}}");
        Ok(BitString { bits })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitString { bits }
    }

    pub fn zeros(n: usize) -> Self {
        BitString { bits: vec![0; n] }
    }

    pub fn repeat(pattern: &str, times: usize) -> Self {
        let p: BitString = pattern.parse().expect("binary pattern");
        BitString { bits: p.bits.repeat(times) }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    /// 1-based access, `x_i`.
    pub fn at(&self, i: usize) -> u8 {
        self.bits[i - 1]
    }

    pub fn push(&mut self, b: u8) {
        assert!(b <= 1);
        self.bits.push(b);
    }

    /// `x(n)`: the first `n` symbols.
    pub fn prefix(&self, n: usize) -> BitString {
        BitString { bits: self.bits[..n.min(self.len())].to_vec() }
    }

    /// `x(n, m)`: symbols `n..=m`, 1-based.
    pub fn substring(&self, n: usize, m: usize) -> BitString {
        if n == 0 || n > m || m > self.len() {
            return BitString::empty();
        }
        BitString { bits: self.bits[n - 1..m].to_vec() }
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("λ");
        }
        let s: String = self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "λ" {
            return Ok(BitString::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| BitString { bits })
    }
}

/// Shorthand for building a `BitString` from a literal.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("binary literal")
}

type Generator = dyn Fn(u64) -> u8 + Send + Sync;

/// An infinite binary sequence given by a position map (1-based).
#[derive(Clone)]
pub struct BitStream {
    generator: Arc<Generator>,
    period: Option<u64>,
}

impl BitStream {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u64) -> u8 + Send + Sync + 'static,
    {
        BitStream { generator: Arc::new(f), period: None }
    }

    pub fn constant(b: u8) -> Self {
        assert!(b <= 1);
        BitStream { generator: Arc::new(move |_| b), period: Some(1) }
    }

    /// `w w w ...` for a nonempty word `w`.
    pub fn periodic(word: &BitString) -> Self {
        assert!(!word.is_empty());
        let w = word.bits.clone();
        let p = w.len() as u64;
        BitStream { generator: Arc::new(move |i| w[((i - 1) % p) as usize]), period: Some(p) }
    }

    pub fn champernowne() -> Self {
        BitStream::from_fn(champernowne_bit)
    }

    /// Fair-coin stream with random access: word `k` is ChaCha block output at position `k`.
    pub fn uniform(seed: u64) -> Self {
        BitStream::from_fn(move |i| {
            let k = (i - 1) / 64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(crate::rng::Stream::Bits as u64);
            rng.set_word_pos(2 * k as u128);
            ((rng.next_u64() >> ((i - 1) % 64)) & 1) as u8
        })
    }

    pub fn period(&self) -> Option<u64> {
        self.period
    }

    /// `x_i`, 1-based.
    pub fn bit(&self, i: u64) -> u8 {
        assert!(i >= 1, "positions are 1-based");
        (self.generator)(i)
    }

    pub fn prefix(&self, n: usize) -> BitString {
        BitString { bits: (1..=n as u64).map(|i| self.bit(i)).collect() }
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream({}…)", self.prefix(16))
    }
}

/// The n-th word in quasi-lexicographic order: `λ, 0, 1, 00, 01, …`.
pub fn string_of_index(n: u64) -> BitString {
    let m = n as u128 + 1;
    let len = 127 - m.leading_zeros() as usize;
    let bits = (0..len).rev().map(|k| ((m >> k) & 1) as u8).collect();
    BitString { bits }
}

/// Inverse of [`string_of_index`]. Words longer than 63 symbols do not fit in `u64`.
pub fn index_of_string(x: &BitString) -> Result<u64> {
    ensure!(x.len() <= 63, Precondition, "word of length {} has no u64 index", x.len());
    let mut m: u64 = 1;
    for &b in &x.bits {
        m = (m << 1) | b as u64;
    }
    Ok(m - 1)
}

/// `⌊log2(n+1)⌋`, the length of the n-th word.
pub fn bitlength_of_index(n: u64) -> u32 {
    127 - (n as u128 + 1).leading_zeros()
}

pub fn count_occurrences(x: &BitString, letter: u8) -> usize {
    x.bits.iter().filter(|&&b| b == letter).count()
}

/// `Σ x_n 2^-n` as an exact dyadic.
pub fn numeric_representation(x: &BitString) -> Dyadic {
    let mut numer = num_bigint::BigInt::from(0);
    for &b in &x.bits {
        numer = (numer << 1u32) + b as u32;
    }
    Dyadic::new(numer, x.len() as u32)
}

/// Replaces position `n` (1-based) of `b` with `a`.
pub fn splice(a: u8, n: usize, b: &BitString) -> Result<BitString> {
    ensure!(a <= 1, Usage, "letter must be 0 or 1");
    ensure!(n >= 1 && n <= b.len(), Precondition, "position {n} outside 1..={}", b.len());
    let mut bits = b.bits.clone();
    bits[n - 1] = a;
    Ok(BitString { bits })
}

fn champernowne_bit(i: u64) -> u8 {
    // block of words of length l occupies l * 2^l positions
    let mut pos = i - 1;
    let mut l: u32 = 1;
    loop {
        let block = (l as u64) << l;
        if pos < block {
            let word = pos / l as u64;
            let within = pos % l as u64;
            return ((word >> (l as u64 - 1 - within)) & 1) as u8;
        }
        pos -= block;
        l += 1;
    }
}

/// First `n` symbols of the concatenation of all words in quasi-lexicographic order.
pub fn champernowne_prefix(n: usize) -> BitString {
    let mut bits = Vec::with_capacity(n);
    let mut k = 1u64;
    while bits.len() < n {
        bits.extend(string_of_index(k).bits);
        k += 1;
    }
    bits.truncate(n);
    BitString { bits }
}

pub fn cylinder_contains(prefix: &BitString, x: &BitStream) -> bool {
    prefix.bits.iter().enumerate().all(|(i, &b)| x.bit(i as u64 + 1) == b)
}

/// Unbiased measure of the cylinder over `prefix`: `2^-|prefix|`.
pub fn cylinder_measure(prefix: &BitString) -> Dyadic {
    Dyadic::pow2_neg(prefix.len() as u32)
}

const MAGIC: &[u8; 4] = b"BST1";

/// Parses the ASCII format: `0`/`1`, whitespace ignored, `#` lines skipped.
pub fn parse_text(s: &str) -> Result<BitString> {
    let mut bits = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for c in line.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse(format!("line {}: unexpected {c:?}", lineno + 1)))
                }
            }
        }
    }
    Ok(BitString { bits })
}

pub fn to_text(x: &BitString) -> String {
    let mut s: String = x.bits.iter().map(|&b| (b'0' + b) as char).collect();
    s.push('\n');
    s
}

/// Packed layout: `BST1`, u64 LE bit count, bits MSB-first.
pub fn to_packed(x: &BitString) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + x.len().div_ceil(8));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(x.len() as u64).to_le_bytes());
    for chunk in x.bits.chunks(8) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            byte |= b << (7 - k);
        }
        out.push(byte);
    }
    out
}

pub fn from_packed(data: &[u8]) -> Result<BitString> {
    ensure!(data.len() >= 12 && &data[..4] == MAGIC, Parse, "missing BST1 header");
    let n = u64::from_le_bytes(data[4..12].try_into().unwrap()) as usize;
    let body = &data[12..];
    ensure!(body.len() == n.div_ceil(8), Parse, "expected {} payload bytes, found {}", n.div_ceil(8), body.len());
    let bits = (0..n).map(|i| (body[i / 8] >> (7 - i % 8)) & 1).collect();
    Ok(BitString { bits })
}

/// Reads either format, choosing by the magic bytes.
pub fn read_bits_file(path: &Path) -> Result<BitString> {
    let data = std::fs::read(path)?;
    if data.starts_with(MAGIC) {
        from_packed(&data)
    } else {
        let s = String::from_utf8(data).map_err(|e| Error::Parse(e.to_string()))?;
        parse_text(&s)
    }
}
