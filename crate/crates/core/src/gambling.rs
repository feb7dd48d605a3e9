//! Von Mises gambling: strategies, place selection, payoffs and the weak law.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::bits::{BitStream, BitString};
use crate::error::{ensure, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Decision {
    Bet(u8),
    NoBet,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Bet(b) => write!(f, "{b}"),
            Decision::NoBet => f.write_str("↑"),
        }
    }
}

/// A place-selection rule `S : Σ* -> {0, 1, ↑}`.
pub trait Strategy: Send + Sync {
    fn name(&self) -> String;
    fn decide(&self, history: &[u8]) -> Decision;
}

/// Bets on the previous outcome.
#[derive(Clone, Copy, Debug, Default)]
pub struct LastResult;

impl Strategy for LastResult {
    fn name(&self) -> String {
        "last-result".into()
    }
    fn decide(&self, h: &[u8]) -> Decision {
        h.last().map_or(Decision::NoBet, |&b| Decision::Bet(b))
    }
}

/// Bets on the letter seen less often so far; abstains on ties.
#[derive(Clone, Copy, Debug, Default)]
pub struct LessFrequent;

impl Strategy for LessFrequent {
    fn name(&self) -> String {
        "less-frequent".into()
    }
    fn decide(&self, h: &[u8]) -> Decision {
        let ones = h.iter().filter(|&&b| b == 1).count();
        let zeros = h.len() - ones;
        match zeros.cmp(&ones) {
            std::cmp::Ordering::Equal => Decision::NoBet,
            std::cmp::Ordering::Greater => Decision::Bet(1),
            std::cmp::Ordering::Less => Decision::Bet(0),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AlwaysBet(pub u8);

impl Strategy for AlwaysBet {
    fn name(&self) -> String {
        format!("always-bet-{}", self.0)
    }
    fn decide(&self, _: &[u8]) -> Decision {
        Decision::Bet(self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableMode {
    /// Histories missing from the table abstain.
    Partial,
    /// Every history up to the horizon is listed.
    Total { horizon: usize },
}

/// A strategy given by an explicit lookup table.
#[derive(Clone, Debug)]
pub struct TableStrategy {
    name: String,
    table: HashMap<Vec<u8>, Decision>,
    mode: TableMode,
}

impl TableStrategy {
    pub fn partial(name: &str, table: HashMap<Vec<u8>, Decision>) -> Self {
        TableStrategy { name: name.into(), table, mode: TableMode::Partial }
    }

    /// Requires an entry for every history of length below `horizon`.
    pub fn total(name: &str, table: HashMap<Vec<u8>, Decision>, horizon: usize) -> Result<Self> {
        let expected = (1usize << horizon) - 1;
        let covered = table.keys().filter(|k| k.len() < horizon).count();
        ensure!(covered == expected, Validation, "table covers {covered} of {expected} histories");
        Ok(TableStrategy { name: name.into(), table, mode: TableMode::Total { horizon } })
    }

    /// Random total table on histories shorter than `horizon`.
    pub fn random<R: rand::Rng + ?Sized>(name: &str, horizon: usize, rng: &mut R) -> Self {
        let mut table = HashMap::new();
        for len in 0..horizon {
            for v in 0..1u64 << len {
                let h: Vec<u8> = (0..len).rev().map(|k| ((v >> k) & 1) as u8).collect();
                let d = match rng.random_range(0..3) {
                    0 => Decision::NoBet,
                    b => Decision::Bet(b as u8 - 1),
                };
                table.insert(h, d);
            }
        }
        TableStrategy { name: name.into(), table, mode: TableMode::Total { horizon } }
    }

    /// `{"history": "0"|"1"|"-"}`; `"λ"` or `""` names the empty history.
    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v.as_object().ok_or_else(|| Error::Parse("strategy table must be an object".into()))?;
        let mut table = HashMap::new();
        for (k, d) in obj {
            let h: BitString = if k.is_empty() { BitString::empty() } else { k.parse()? };
            let d = match d.as_str().map(str::trim) {
                Some("0") => Decision::Bet(0),
                Some("1") => Decision::Bet(1),
                Some("-") | Some("↑") | Some("none") => Decision::NoBet,
                _ => return Err(Error::Parse(format!("bad decision for {k:?}: {d}"))),
            };
            table.insert(h.into_bits(), d);
        }
        Ok(Self::partial(name, table))
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }
}

impl Strategy for TableStrategy {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn decide(&self, h: &[u8]) -> Decision {
        self.table.get(h).copied().unwrap_or(Decision::NoBet)
    }
}

pub const BUILTIN_STRATEGIES: [&str; 4] = ["last-result", "less-frequent", "always-bet-0", "always-bet-1"];

pub fn builtin_strategy(name: &str) -> Result<Box<dyn Strategy>> {
    Ok(match name {
        "last-result" => Box::new(LastResult),
        "less-frequent" => Box::new(LessFrequent),
        "always-bet-0" => Box::new(AlwaysBet(0)),
        "always-bet-1" => Box::new(AlwaysBet(1)),
        _ => return Err(Error::Usage(format!("unknown strategy {name:?}; known: {}", BUILTIN_STRATEGIES.join(", ")))),
    })
}

/// `EXT[S](x)`: keeps `x_n` whenever `S(x_1 … x_(n-1))` bets on 1.
pub fn ext(s: &dyn Strategy, x: &BitStream, horizon: usize) -> BitString {
    let prefix = x.prefix(horizon);
    let b = prefix.bits();
    let picked = (0..horizon).filter(|&n| s.decide(&b[..n]) == Decision::Bet(1)).map(|n| b[n]).collect();
    BitString::from_bits_unchecked(picked)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Turn {
    pub turn: usize,
    pub bet: Option<u8>,
    pub outcome: u8,
    pub gain: i64,
    pub payoff: i64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PayoffTrajectory {
    pub turns: Vec<Turn>,
}

impl PayoffTrajectory {
    pub fn payoff(&self) -> i64 {
        self.turns.last().map_or(0, |t| t.payoff)
    }
    pub fn bets(&self) -> usize {
        self.turns.iter().filter(|t| t.bet.is_some()).count()
    }
}

/// Fixed unit stake: +1 on a correct bet, -1 on a wrong one.
pub fn payoff_sim(s: &dyn Strategy, x: &BitString) -> PayoffTrajectory {
    let b = x.bits();
    let mut payoff = 0;
    let turns = (0..b.len())
        .map(|n| {
            let (bet, gain) = match s.decide(&b[..n]) {
                Decision::NoBet => (None, 0),
                Decision::Bet(g) => (Some(g), if g == b[n] { 1 } else { -1 }),
            };
            payoff += gain;
            Turn { turn: n + 1, bet, outcome: b[n], gain, payoff }
        })
        .collect();
    PayoffTrajectory { turns }
}

fn final_payoff(s: &dyn Strategy, b: &[u8]) -> i64 {
    (0..b.len())
        .map(|n| match s.decide(&b[..n]) {
            Decision::NoBet => 0,
            Decision::Bet(g) if g == b[n] => 1,
            Decision::Bet(_) => -1,
        })
        .sum()
}

/// Exact mean payoff over all of `Σ^n` by enumeration.
pub fn expected_payoff_exhaustive(s: &dyn Strategy, n: usize) -> Result<BigRational> {
    ensure!(n <= 20, Resource, "n = {n} exceeds the enumeration limit 20");
    let total: i64 = (0..1u64 << n)
        .into_par_iter()
        .map(|v| {
            let b: Vec<u8> = (0..n).rev().map(|k| ((v >> k) & 1) as u8).collect();
            final_payoff(s, &b)
        })
        .sum();
    Ok(BigRational::new(BigInt::from(total), BigInt::one() << n))
}

#[derive(Clone, Debug, Serialize)]
pub struct MartingaleTurn {
    pub turn: usize,
    pub stake: u64,
    pub bet: Option<u8>,
    pub outcome: u8,
    pub gain: i64,
    pub bankroll: i64,
}

/// Doubling stake after each loss, reset after a win, never above the bankroll.
/// Play stops when the bankroll is exhausted.
pub fn martingale_sim(s: &dyn Strategy, x: &BitString, base_stake: u64, bankroll: u64) -> Vec<MartingaleTurn> {
    let b = x.bits();
    let mut stake = base_stake.max(1);
    let mut roll = bankroll as i64;
    let mut out = Vec::new();
    for n in 0..b.len() {
        if roll <= 0 {
            break;
        }
        let this = stake.min(roll as u64);
        let (bet, gain) = match s.decide(&b[..n]) {
            Decision::NoBet => (None, 0),
            Decision::Bet(g) if g == b[n] => (Some(g), this as i64),
            Decision::Bet(g) => (Some(g), -(this as i64)),
        };
        roll += gain;
        if gain > 0 {
            stake = base_stake.max(1);
        } else if gain < 0 {
            stake = stake.saturating_mul(2);
        }
        out.push(MartingaleTurn { turn: n + 1, stake: this, bet, outcome: b[n], gain, bankroll: roll });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct StPetersburg {
    pub terms: u32,
    /// `Σ_(n<=N) 2^-n`
    pub partial_sum: String,
    /// `2 (1 - 2^-N)`, the doubled accounting that tends to 2
    pub expected_payoff: String,
    pub limit: u32,
}

pub fn st_petersburg_partial(n: u32) -> BigRational {
    let den = BigInt::one() << n;
    BigRational::new(&den - 1, den)
}

pub fn st_petersburg_expected(n: u32) -> Result<StPetersburg> {
    ensure!(n >= 1, Usage, "need at least one term");
    let p = st_petersburg_partial(n);
    let e = &p * BigRational::from_integer(2.into());
    Ok(StPetersburg {
        terms: n,
        partial_sum: crate::exact::ratio_string(&p),
        expected_payoff: crate::exact::ratio_string(&e),
        limit: 2,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FrequencyStability {
    pub horizon: usize,
    pub freq_original: f64,
    pub extracted_len: usize,
    /// `None` when nothing was extracted.
    pub freq_extracted: Option<f64>,
    pub gap: Option<f64>,
}

pub fn frequency_stability(s: &dyn Strategy, x: &BitStream, horizon: usize) -> FrequencyStability {
    let prefix = x.prefix(horizon);
    let fo = if horizon == 0 { 0.0 } else { prefix.ones() as f64 / horizon as f64 };
    let e = ext(s, x, horizon);
    let fe = (!e.is_empty()).then(|| e.ones() as f64 / e.len() as f64);
    FrequencyStability {
        horizon,
        freq_original: fo,
        extracted_len: e.len(),
        freq_extracted: fe,
        gap: fe.map(|f| (f - fo).abs()),
    }
}
