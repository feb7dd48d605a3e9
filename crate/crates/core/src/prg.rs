//! Middle-square, linear congruential, lagged-XOR and rule-30 generators.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{ensure, Error, Result};

/// Next middle-square state: the middle `d` digits of the `2d`-digit square.
fn ms_step(x: u64, d: u32) -> u64 {
    let half = 10u128.pow(d / 2);
    let modulus = 10u128.pow(d);
    ((x as u128 * x as u128 / half) % modulus) as u64
}

fn check_ms(seed: u64, d: u32) -> Result<()> {
    ensure!(d >= 2 && d % 2 == 0 && d <= 18, Usage, "digit width {d} must be even and in 2..=18");
    ensure!((seed as u128) < 10u128.pow(d), Usage, "seed {seed} has more than {d} digits");
    Ok(())
}

pub fn middle_square(seed: u64, count: usize, d: u32) -> Result<Vec<u64>> {
    check_ms(seed, d)?;
    let mut x = seed;
    Ok((0..count)
        .map(|_| {
            x = ms_step(x, d);
            x
        })
        .collect())
}

/// Tail length and cycle length of an iterated map (Brent's method).
pub fn brent_cycle<F: Fn(u64) -> u64>(x0: u64, f: F) -> (u64, u64) {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0;
    let mut hare = f(x0);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
    }
    let mut t = x0;
    let mut h = x0;
    for _ in 0..lam {
        h = f(h);
    }
    let mut mu = 0;
    while t != h {
        t = f(t);
        h = f(h);
        mu += 1;
    }
    (mu, lam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub tail: u64,
    pub period: u64,
}

pub fn middle_square_cycle(seed: u64, d: u32) -> Result<Cycle> {
    check_ms(seed, d)?;
    let (tail, period) = brent_cycle(seed, |x| ms_step(x, d));
    Ok(Cycle { tail, period })
}

fn lcg_step(x: u64, a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * x as u128 + b as u128) % n as u128) as u64
}

fn check_lcg(a: u64, b: u64, n: u64, seed: u64) -> Result<()> {
    ensure!(n > 0, Usage, "modulus must be positive");
    ensure!(a < n && b < n && seed < n, Usage, "a, b and seed must lie below the modulus {n}");
    Ok(())
}

/// `x_j = a x_(j-1) + b mod n`, returning `x_1..x_count`.
pub fn lcg(a: u64, b: u64, n: u64, seed: u64, count: usize) -> Result<Vec<u64>> {
    check_lcg(a, b, n, seed)?;
    let mut x = seed;
    Ok((0..count)
        .map(|_| {
            x = lcg_step(x, a, b, n);
            x
        })
        .collect())
}

pub fn lcg_cycle(a: u64, b: u64, n: u64, seed: u64) -> Result<Cycle> {
    check_lcg(a, b, n, seed)?;
    let (tail, period) = brent_cycle(seed, |x| lcg_step(x, a, b, n));
    Ok(Cycle { tail, period })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Full-period criterion for `a x + b mod n`.
pub fn ghd_full_period(a: u64, b: u64, n: u64) -> bool {
    assert!(n >= 2);
    gcd(b, n) == 1
        && prime_factors(n).iter().all(|&p| a % p == 1 % p)
        && (n % 4 != 0 || a % 4 == 1)
}

/// Number of high-order bits kept per output for modulus `n`.
pub fn extraction_width(n: u64) -> u32 {
    (63 - n.leading_zeros()).saturating_sub(1)
}

/// Keeps the top `⌊log2 n⌋ - 1` bits of each output, most significant first.
pub fn outputs_to_bits(xs: &[u64], n: u64) -> BitString {
    let k = extraction_width(n);
    let value_bits = 64 - (n - 1).leading_zeros();
    let shift = value_bits - k;
    let mut bits = Vec::with_capacity(xs.len() * k as usize);
    for &x in xs {
        let top = x >> shift;
        bits.extend((0..k).rev().map(|i| ((top >> i) & 1) as u8));
    }
    BitString::from_bits_unchecked(bits)
}

/// `x_j = x_(j-p) XOR x_(j-q)` from `x_1..x_p = seed`; returns `x_(p+1)..x_(p+count)`.
pub fn lagged_xor(p: usize, q: usize, seed: &BitString, count: usize) -> Result<BitString> {
    ensure!(0 < q && q < p, Usage, "lags must satisfy 0 < q < p");
    ensure!(seed.len() == p, Usage, "seed has {} bits, expected {p}", seed.len());
    if seed.ones() == 0 {
        return Err(Error::DegenerateSeed("all-zero lagged-XOR seed".into()));
    }
    let mut ring = seed.bits().to_vec();
    let mut out = Vec::with_capacity(count);
    // ring[j mod p] holds x_(j+1 - p) before step j
    for j in 0..count {
        let a = ring[j % p];
        let b = ring[(j + p - q) % p];
        let x = a ^ b;
        ring[j % p] = x;
        out.push(x);
    }
    Ok(BitString::from_bits_unchecked(out))
}

/// Center column of the rule-30 automaton on a cyclic row, rows `0..steps`.
pub fn rule30(width: usize, steps: usize, seed_row: Option<&BitString>) -> Result<BitString> {
    ensure!(width >= 3 && width % 2 == 1, Usage, "width {width} must be odd and at least 3");
    let mut row = match seed_row {
        Some(r) => {
            ensure!(r.len() == width, Usage, "seed row has {} cells, expected {width}", r.len());
            r.bits().to_vec()
        }
        None => {
            let mut r = vec![0u8; width];
            r[width / 2] = 1;
            r
        }
    };
    let mut next = vec![0u8; width];
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        out.push(row[width / 2]);
        for i in 0..width {
            let l = row[(i + width - 1) % width];
            let c = row[i];
            let r = row[(i + 1) % width];
            next[i] = l ^ (c | r);
        }
        std::mem::swap(&mut row, &mut next);
    }
    Ok(BitString::from_bits_unchecked(out))
}

/// Parameters of a generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    MiddleSquare { digits: u32, seed: u64 },
    Lcg { a: u64, b: u64, n: u64, seed: u64 },
    LaggedXor { p: usize, q: usize, seed_bits: String },
    Rule30 { width: usize, seed_row: Option<String> },
}

impl GeneratorSpec {
    pub fn randu(seed: u64) -> Self {
        GeneratorSpec::Lcg { a: 65539, b: 0, n: 1 << 31, seed }
    }

    pub fn minimal_standard(seed: u64) -> Self {
        GeneratorSpec::Lcg { a: 16807, b: 0, n: (1 << 31) - 1, seed }
    }

    /// At least `count` bits, truncated to exactly `count`.
    pub fn bits(&self, count: usize) -> Result<BitString> {
        let out = match self {
            GeneratorSpec::MiddleSquare { digits, seed } => {
                let n = 10u64.pow(*digits);
                let k = extraction_width(n) as usize;
                outputs_to_bits(&middle_square(*seed, count.div_ceil(k), *digits)?, n)
            }
            GeneratorSpec::Lcg { a, b, n, seed } => {
                let k = extraction_width(*n) as usize;
                ensure!(k > 0, Usage, "modulus {n} too small for bit extraction");
                outputs_to_bits(&lcg(*a, *b, *n, *seed, count.div_ceil(k))?, *n)
            }
            GeneratorSpec::LaggedXor { p, q, seed_bits } => lagged_xor(*p, *q, &seed_bits.parse()?, count)?,
            GeneratorSpec::Rule30 { width, seed_row } => {
                let row = seed_row.as_deref().map(str::parse::<BitString>).transpose()?;
                rule30(*width, count, row.as_ref())?
            }
        };
        Ok(out.prefix(count))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    #[test]
    fn middle_square_examples() {
        assert_eq!(middle_square(0, 5, 4).unwrap(), [0; 5]);
        // 1234^2 = 01522756
        assert_eq!(middle_square(1234, 1, 4).unwrap(), [5227]);
        // 2100 -> 4100 -> 8100 -> 6100 -> 2100
        assert_eq!(middle_square(2100, 4, 4).unwrap(), [4100, 8100, 6100, 2100]);
        assert_eq!(middle_square_cycle(2100, 4).unwrap(), Cycle { tail: 0, period: 4 });
        assert!(middle_square(12345, 1, 4).is_err());
        assert!(middle_square(1, 1, 3).is_err());
    }

    #[test]
    fn lcg_examples() {
        assert_eq!(lcg(65539, 0, 1 << 31, 1, 3).unwrap(), [65539, 393225, 1769499]);
        assert_eq!(lcg(16807, 0, (1 << 31) - 1, 1, 1).unwrap(), [16807]);
        assert_eq!(lcg(1, 0, 8, 5, 4).unwrap(), [5; 4]);
        assert!(lcg(9, 0, 8, 5, 4).is_err());
    }

    #[test]
    fn ghd_examples() {
        assert!(ghd_full_period(5, 3, 16));
        assert_eq!(lcg_cycle(5, 3, 16, 0).unwrap().period, 16);
        assert!(!ghd_full_period(2, 3, 16));
        assert!(lcg_cycle(2, 3, 16, 0).unwrap().period < 16);
        for n in 2..200 {
            assert!(ghd_full_period(1, 1, n));
        }
    }

    #[test]
    fn prime_factorization() {
        assert_eq!(prime_factors(360), [2, 3, 5]);
        assert_eq!(prime_factors(2147483647), [2147483647]);
    }

    #[test]
    fn lagged_xor_small() {
        let seed = bs("001");
        let out = lagged_xor(3, 2, &seed, 14).unwrap();
        assert_eq!(out, bs("01110010111001"));
        // the generated block repeats with period 7
        assert_eq!(out.prefix(7), out.substring(8, 14));
        assert!(matches!(lagged_xor(3, 2, &bs("000"), 4), Err(Error::DegenerateSeed(_))));
        assert!(lagged_xor(3, 3, &seed, 4).is_err());
    }

    #[test]
    fn rule30_examples() {
        assert_eq!(rule30(7, 4, None).unwrap(), bs("1101"));
        assert_eq!(rule30(7, 9, Some(&bs("0000000"))).unwrap(), BitString::zeros(9));
        assert!(rule30(8, 4, None).is_err());
    }

    #[test]
    fn bit_extraction() {
        assert_eq!(extraction_width(1 << 31), 30);
        assert_eq!(extraction_width((1 << 31) - 1), 29);
        let b = outputs_to_bits(&[(1 << 31) - 1, 1 << 30], 1 << 31);
        assert_eq!(b.len(), 60);
        assert_eq!(b.prefix(30).ones(), 30);
        assert_eq!(b.substring(31, 60), {
            let mut s = String::from("1");
            s.push_str(&"0".repeat(29));
            bs(&s)
        });
        let randu = GeneratorSpec::randu(1).bits(61).unwrap();
        assert_eq!(randu.len(), 61);
    }

    #[test]
    fn spec_round_trip() {
        let s = GeneratorSpec::Rule30 { width: 7, seed_row: None };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&j).unwrap(), s);
        assert_eq!(s.bits(4).unwrap(), bs("1101"));
    }
}
