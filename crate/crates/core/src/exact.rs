//! Exact dyadic and rational arithmetic helpers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A number of the form `numer / 2^exp`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numer: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(numer: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic { numer: numer.into(), exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { numer: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { numer: BigInt::one(), exp: 0 }
    }

    /// `2^-k`
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic { numer: BigInt::one(), exp: k }
    }

    fn normalize(&mut self) {
        if self.numer.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.numer.is_even() {
            self.numer >>= 1;
            self.exp -= 1;
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numer.clone(), BigInt::one() << self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.to_rational();
        ratio_to_f64(&r)
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.numer << (e - self.exp);
        let b = &rhs.numer << (e - rhs.exp);
        Dyadic::new(a + b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.numer << (e - self.exp);
        let b = &other.numer << (e - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, BigInt::one() << self.exp)
        }
    }
}

/// Converts a big rational to the nearest-ish `f64`, safe for huge parts.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let ln = log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude());
    sign * ln.exp2()
}

/// `log2` of a positive big integer as `f64`.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// Renders a rational as `p/q` (always with denominator).
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((i, frac)) = s.split_once('.') {
        let neg = i.starts_with('-');
        let digits = format!("{}{}", i.trim_start_matches('-'), frac);
        let p: BigInt = digits.parse().ok()?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(p, q);
        return Some(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(p))
}

/// Nearest rational on the grid `k / 10^9`.
pub fn snap_f64(x: f64) -> BigRational {
    let k = (x * 1e9).round() as i64;
    BigRational::new(BigInt::from(k), BigInt::from(1_000_000_000i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_normalizes() {
        let d = Dyadic::new(4, 3);
        assert_eq!(d, Dyadic::new(1, 1));
        assert_eq!(d.to_string(), "1/2");
    }

    #[test]
    fn dyadic_sum_is_exact() {
        let s = &Dyadic::pow2_neg(1) + &Dyadic::pow2_neg(1);
        assert_eq!(s, Dyadic::one());
        let t = &Dyadic::pow2_neg(2) + &Dyadic::pow2_neg(3);
        assert_eq!(t.to_string(), "3/8");
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = BigInt::one() << 5000u32;
        let r = BigRational::new(big.clone() * 3, big);
        assert!((ratio_to_f64(&r) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_ratio("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_ratio("2").unwrap(), BigRational::from_integer(2.into()));
        assert!(parse_ratio("1/0").is_none());
    }
}
