//! Finite Martin-Löf style tests with certified critical-region sizes.
//!
//! A test maps each word to a level `m`; the critical region `V_m` is the set of words of
//! level at least `m`. The certified property is `#(Σ^n ∩ V_m) < 2^(n-m)`.

pub mod compress;
pub mod stats;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

pub use compress::{code_length, complexity_upper_bound, CodeLength};
pub use stats::Statistic;

use crate::bits::BitString;
use crate::error::{ensure, Error, Result};

/// Lengths up to which levels come from exhaustive tail tables.
pub const EXACT_MAX_N: usize = 16;

pub trait FiniteTest: Send + Sync {
    fn name(&self) -> String;
    /// Level of `x`; `0` means not rejected.
    fn level(&self, x: &BitString) -> u32;
}

/// A deviation statistic turned into a test by tail calibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CalibratedTest {
    pub statistic: Statistic,
}

type TailTable = Arc<Vec<f64>>;

fn tables() -> &'static Mutex<HashMap<(Statistic, usize), TailTable>> {
    static T: OnceLock<Mutex<HashMap<(Statistic, usize), TailTable>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

fn all_words(n: usize) -> impl ParallelIterator<Item = BitString> {
    (0..1u64 << n).into_par_iter().map(move |v| {
        BitString::from_bits_unchecked((0..n).rev().map(|k| ((v >> k) & 1) as u8).collect())
    })
}

/// Scores of all of `Σ^n`, sorted descending.
fn tail_table(st: Statistic, n: usize) -> TailTable {
    if let Some(t) = tables().lock().unwrap().get(&(st, n)) {
        return t.clone();
    }
    let mut scores: Vec<f64> = all_words(n).map(|x| st.score(&x)).collect();
    scores.sort_by(|a, b| b.total_cmp(a));
    let t = Arc::new(scores);
    tables().lock().unwrap().insert((st, n), t.clone());
    t
}

/// Largest `m` with `count < 2^(n-m)`.
fn level_from_count(n: usize, count: u64) -> u32 {
    let fl = 63 - count.max(1).leading_zeros() as i64;
    (n as i64 - fl - 1).max(0) as u32
}

/// Largest `m` with `2^log2_bound < 2^-m`.
pub fn level_from_log2_bound(log2_bound: f64) -> u32 {
    if log2_bound >= 0.0 || log2_bound.is_nan() {
        return 0;
    }
    if log2_bound == f64::NEG_INFINITY {
        return u32::MAX;
    }
    ((-log2_bound - 1e-9).ceil() - 1.0).max(0.0) as u32
}

impl CalibratedTest {
    pub fn new(statistic: Statistic) -> Self {
        CalibratedTest { statistic }
    }

    pub fn score(&self, x: &BitString) -> f64 {
        self.statistic.score(x)
    }
}

impl FiniteTest for CalibratedTest {
    fn name(&self) -> String {
        self.statistic.name()
    }

    fn level(&self, x: &BitString) -> u32 {
        let n = x.len();
        if n < self.statistic.min_len().max(1) {
            return 0;
        }
        let s = self.statistic.score(x);
        if n <= EXACT_MAX_N {
            let t = tail_table(self.statistic, n);
            let count = t.partition_point(|&v| v >= s) as u64;
            level_from_count(n, count)
        } else {
            level_from_log2_bound(self.statistic.log2_tail_bound(n, s)).min(n as u32)
        }
    }
}

/// Level `max(0, |x| - K̂(x))`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DeficiencyTest;

impl FiniteTest for DeficiencyTest {
    fn name(&self) -> String {
        "complexity-deficiency".into()
    }

    fn level(&self, x: &BitString) -> u32 {
        (x.len() as i64 - complexity_upper_bound(x) as i64).max(0) as u32
    }
}

/// A constant-zero statistic; its critical regions are empty.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullTest;

impl FiniteTest for NullTest {
    fn name(&self) -> String {
        "null".into()
    }
    fn level(&self, _: &BitString) -> u32 {
        0
    }
}

/// Level equal to the word length; violates every bound. Kept for negative controls.
#[derive(Clone, Copy, Debug, Default)]
pub struct LengthTest;

impl FiniteTest for LengthTest {
    fn name(&self) -> String {
        "length".into()
    }
    fn level(&self, x: &BitString) -> u32 {
        x.len() as u32
    }
}

/// Exhaustive check of `#{x ∈ Σ^n : level(x) >= m} < 2^(n-m)` at every `m >= 1`.
pub fn verify_level_bound(t: &dyn FiniteTest, n: usize) -> Result<()> {
    ensure!(n <= EXACT_MAX_N, Resource, "exhaustive verification limited to n <= {EXACT_MAX_N}");
    let levels: Vec<u32> = all_words(n).map(|x| t.level(&x)).collect();
    let top = levels.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0u64; top as usize + 2];
    for &l in &levels {
        hist[l as usize] += 1;
    }
    let mut at_least = 0u64;
    for m in (1..=top as usize).rev() {
        at_least += hist[m];
        if m > n || at_least >= 1u64 << (n - m) {
            return Err(Error::Certification { n, m, count: at_least });
        }
    }
    Ok(())
}

/// Tests registered in the default battery, in report order.
pub fn default_battery() -> Vec<CalibratedTest> {
    vec![
        CalibratedTest::new(Statistic::Frequency),
        CalibratedTest::new(Statistic::Serial { lag: 1 }),
        CalibratedTest::new(Statistic::Serial { lag: 2 }),
        CalibratedTest::new(Statistic::Serial { lag: 3 }),
        CalibratedTest::new(Statistic::Runs),
        CalibratedTest::new(Statistic::Gap),
    ]
}

/// Every test the crate can run, used by the registry self-check.
pub fn registered_tests() -> Vec<Box<dyn FiniteTest>> {
    let mut v: Vec<Box<dyn FiniteTest>> =
        default_battery().into_iter().map(|t| Box::new(t) as Box<dyn FiniteTest>).collect();
    for order in 1..=4 {
        v.push(Box::new(CalibratedTest::new(Statistic::Borel { order })));
    }
    v.push(Box::new(CalibratedTest::new(Statistic::IteratedLog)));
    v.push(Box::new(DeficiencyTest));
    v
}

/// Runs [`verify_level_bound`] for every registered test and every `n <= max_n`, once.
pub fn registry_certified() -> &'static std::result::Result<(), String> {
    static CERT: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    CERT.get_or_init(|| {
        for t in registered_tests() {
            for n in 1..=EXACT_MAX_N {
                verify_level_bound(t.as_ref(), n).map_err(|e| format!("{}: {e}", t.name()))?;
            }
        }
        Ok(())
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TestOutcome {
    pub name: String,
    pub score: f64,
    pub level: u32,
    /// Least `q` with `x ∉ V_q`; the word is `q`-pseudorandom for this test when `q < |x|`.
    pub pseudorandom_q: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct TestReport {
    pub length: usize,
    pub outcomes: Vec<TestOutcome>,
    pub universal_level: u32,
}

impl TestReport {
    pub fn level(&self, name: &str) -> Option<u32> {
        self.outcomes.iter().find(|o| o.name == name).map(|o| o.level)
    }
}

fn outcome(t: &CalibratedTest, x: &BitString) -> TestOutcome {
    let level = t.level(x);
    TestOutcome { name: t.name(), score: t.score(x), level, pseudorandom_q: level + 1 }
}

pub fn run_tests(tests: &[CalibratedTest], x: &BitString) -> TestReport {
    let outcomes: Vec<TestOutcome> = tests.par_iter().map(|t| outcome(t, x)).collect();
    let universal_level = outcomes.iter().map(|o| o.level).max().unwrap_or(0);
    TestReport { length: x.len(), outcomes, universal_level }
}

/// Frequency, serial (lags 1 to 3), runs and gap tests on a word of length at least `2^10`.
pub fn knuth_battery(x: &BitString) -> Result<TestReport> {
    ensure!(x.len() >= 1 << 10, Usage, "battery needs at least 1024 bits, got {}", x.len());
    registry_certified().as_ref().map_err(|e| Error::Validation(e.clone()))?;
    Ok(run_tests(&default_battery(), x))
}

pub fn borel_normality_statistic(x: &BitString, order: usize) -> Result<u32> {
    ensure!(order >= 1, Usage, "block order must be positive");
    ensure!(order <= 16, Usage, "block order {order} too large");
    ensure!(x.len() >= order, Usage, "need at least {order} bits, got {}", x.len());
    Ok(CalibratedTest::new(Statistic::Borel { order }).level(x))
}

pub fn iterated_log_statistic(x: &BitString) -> Result<u32> {
    ensure!(x.len() >= stats::ITERLOG_START, Usage, "need at least 16 bits, got {}", x.len());
    Ok(CalibratedTest::new(Statistic::IteratedLog).level(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct Deficiency {
    pub length: usize,
    pub complexity: u64,
    pub deficiency: i64,
}

pub fn complexity_deficiency(x: &BitString) -> Deficiency {
    let k = complexity_upper_bound(x);
    Deficiency { length: x.len(), complexity: k, deficiency: x.len() as i64 - k as i64 }
}
