//! Raw deviation statistics and rigorous tail bounds for them.
//!
//! Every statistic returns a score where larger means more deviant. `tail_bound(n, s)` is an
//! upper bound on the fraction of `Σ^n` scoring at least `s`.

use crate::bits::BitString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Statistic {
    Frequency,
    Runs,
    Serial { lag: usize },
    Gap,
    Borel { order: usize },
    IteratedLog,
}

/// First prefix length considered by the iterated-logarithm statistic.
pub const ITERLOG_START: usize = 16;

/// Largest run of zeros tracked by the gap statistic.
pub const GAP_MAX: usize = 3;

impl Statistic {
    pub fn name(&self) -> String {
        match self {
            Statistic::Frequency => "frequency".into(),
            Statistic::Runs => "runs".into(),
            Statistic::Serial { lag } => format!("serial-lag{lag}"),
            Statistic::Gap => "gap".into(),
            Statistic::Borel { order } => format!("borel-{order}"),
            Statistic::IteratedLog => "iterated-log".into(),
        }
    }

    /// Shortest input on which the statistic is defined.
    pub fn min_len(&self) -> usize {
        match self {
            Statistic::Frequency | Statistic::Runs | Statistic::Gap => 0,
            Statistic::Serial { lag } => *lag,
            Statistic::Borel { order } => *order,
            Statistic::IteratedLog => ITERLOG_START,
        }
    }

    pub fn score(&self, x: &BitString) -> f64 {
        let b = x.bits();
        let n = b.len();
        match *self {
            Statistic::Frequency => (2.0 * x.ones() as f64 - n as f64).abs(),
            Statistic::Runs => {
                if n < 2 {
                    return 0.0;
                }
                let changes = b.windows(2).filter(|w| w[0] != w[1]).count();
                (2.0 * changes as f64 - (n - 1) as f64).abs()
            }
            Statistic::Serial { lag } => {
                if n <= lag {
                    return 0.0;
                }
                let mut cnt = [0i64; 4];
                for i in 0..n - lag {
                    cnt[(2 * b[i] + b[i + lag]) as usize] += 1;
                }
                let m = (n - lag) as i64;
                cnt.iter().map(|&c| (4 * c - m).abs()).max().unwrap() as f64
            }
            Statistic::Gap => {
                let mut worst: f64 = 0.0;
                for r in 0..=GAP_MAX {
                    if n < r + 2 {
                        break;
                    }
                    let windows = n - r - 1;
                    let g = (0..windows)
                        .filter(|&i| b[i] == 1 && b[i + r + 1] == 1 && b[i + 1..=i + r].iter().all(|&z| z == 0))
                        .count() as f64;
                    let e = windows as f64 / (1u64 << (r + 2)) as f64;
                    worst = worst.max((g - e).abs() / (r + 2) as f64);
                }
                worst
            }
            Statistic::Borel { order } => {
                let k = n / order;
                let mut cnt = vec![0i64; 1 << order];
                for blk in b.chunks_exact(order).take(k) {
                    let w = blk.iter().fold(0usize, |a, &bit| (a << 1) | bit as usize);
                    cnt[w] += 1;
                }
                cnt.iter().map(|&c| ((c << order) - k as i64).abs()).max().unwrap_or(0) as f64
            }
            Statistic::IteratedLog => {
                let mut s = 0i64;
                let mut worst: f64 = 0.0;
                for (i, &bit) in b.iter().enumerate() {
                    s += bit as i64;
                    let k = i + 1;
                    if k >= ITERLOG_START {
                        let kf = k as f64;
                        let dev = (s as f64 - kf / 2.0).abs();
                        worst = worst.max(dev / (kf * kf.ln().ln()).sqrt());
                    }
                }
                worst
            }
        }
    }

    /// Upper bound on `log2 P(score >= s)` for uniformly random `x ∈ Σ^n`.
    pub fn log2_tail_bound(&self, n: usize, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let nf = n as f64;
        let ln2 = std::f64::consts::LN_2;
        let b = match *self {
            Statistic::Frequency => log2_binomial_two_sided_tail(n, s),
            Statistic::Runs => {
                if n < 2 {
                    return 0.0;
                }
                log2_binomial_two_sided_tail(n - 1, s)
            }
            // one symbol moves at most two pairs
            Statistic::Serial { .. } => 3.0 - s * s / (32.0 * nf) / ln2,
            // one symbol touches at most r + 2 windows
            Statistic::Gap => 3.0 - 2.0 * s * s / nf / ln2,
            Statistic::Borel { order } => {
                let k = (n / order) as f64;
                if k == 0.0 {
                    return 0.0;
                }
                let words = (1u64 << order) as f64;
                1.0 + order as f64 - 2.0 * s * s / (words * words * k) / ln2
            }
            Statistic::IteratedLog => log2_iterated_log_tail(n, s),
        };
        b.min(0.0)
    }

    pub fn tail_bound(&self, n: usize, s: f64) -> f64 {
        self.log2_tail_bound(n, s).exp2()
    }
}

/// Exact `P(|2B - n| >= s)` for `B ~ Bin(n, 1/2)`.
pub fn binomial_two_sided_tail(n: usize, s: f64) -> f64 {
    log2_binomial_two_sided_tail(n, s).exp2()
}

pub fn log2_binomial_two_sided_tail(n: usize, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    // |2k - n| >= s  <=>  k >= (n + s)/2  or  k <= (n - s)/2
    let hi = ((n as f64 + s) / 2.0 - 1e-9).ceil().max(0.0) as usize;
    if hi > n {
        return f64::NEG_INFINITY;
    }
    (1.0 + binomial_upper_tail_log2(n, hi)).min(0.0)
}

/// `log2 P(Bin(n, 1/2) >= k)` by log-sum-exp over exact log-binomials.
fn binomial_upper_tail_log2(n: usize, k: usize) -> f64 {
    let mut lc = 0.0f64; // ln C(n, j)
    for i in 0..k {
        lc += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    let mut terms = Vec::with_capacity(n - k + 1);
    for j in k..=n {
        terms.push(lc);
        if j < n {
            lc += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
        }
    }
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - m).exp()).sum();
    (m + sum.ln()) / std::f64::consts::LN_2 - n as f64
}

/// Maximal-inequality bound over dyadic blocks `[2^j, 2^(j+1))`, `j >= 4`.
fn log2_iterated_log_tail(n: usize, c: f64) -> f64 {
    // natural-log exponents of the block terms 2 exp(-2 c^2 2^j lnln 2^j / N_j)
    let mut exps = Vec::new();
    let mut j = 4u32;
    while (1usize << j) <= n {
        let lo = (1usize << j) as f64;
        let horizon = ((1usize << (j + 1)) - 1).min(n) as f64;
        exps.push(2f64.ln() - 2.0 * c * c * lo * lo.ln().ln() / horizon);
        j += 1;
    }
    if exps.is_empty() {
        return 0.0;
    }
    let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (m + exps.iter().map(|e| (e - m).exp()).sum::<f64>().ln()) / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    #[test]
    fn scores_of_simple_words() {
        assert_eq!(Statistic::Frequency.score(&bs("0110")), 0.0);
        assert_eq!(Statistic::Frequency.score(&bs("000")), 3.0);
        assert_eq!(Statistic::Runs.score(&bs("0101")), 3.0);
        assert_eq!(Statistic::Runs.score(&bs("0011")), 1.0);
        // lag-1 pairs of 0000: 00 x3 -> |12 - 3|
        assert_eq!(Statistic::Serial { lag: 1 }.score(&bs("0000")), 9.0);
        assert_eq!(Statistic::Borel { order: 1 }.score(&BitString::repeat("01", 8)), 0.0);
        assert_eq!(Statistic::Borel { order: 2 }.score(&bs("0001")), 2.0);
    }

    #[test]
    fn gap_counts_windows() {
        // windows "11" (r=0): positions 1,2 in 1101 -> one; "101" once; expectations subtracted
        let x = bs("1101");
        let g0 = (1.0f64 - 3.0 / 4.0).abs() / 2.0;
        let g1 = (1.0f64 - 2.0 / 8.0).abs() / 3.0;
        let g2 = (0.0f64 - 1.0 / 16.0).abs() / 4.0;
        let want = g0.max(g1).max(g2);
        assert!((Statistic::Gap.score(&x) - want).abs() < 1e-15);
    }

    /// Compare the exact tail with a direct sum over binomial coefficients.
    #[test]
    fn binomial_tail_matches_direct_count() {
        for n in [1usize, 5, 16, 40] {
            for s in 0..=n {
                let mut cnt = 0f64;
                for k in 0..=n {
                    if (2 * k as i64 - n as i64).unsigned_abs() as usize >= s {
                        cnt += crate::coding::binomial(n as u64, k as u64).to_string().parse::<f64>().unwrap();
                    }
                }
                let want = cnt / 2f64.powi(n as i32);
                let got = binomial_two_sided_tail(n, s as f64);
                assert!((got - want.min(1.0)).abs() < 1e-12 * want.max(1e-300) + 1e-15, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn bounds_are_monotone_in_s() {
        let stats = [
            Statistic::Frequency,
            Statistic::Runs,
            Statistic::Serial { lag: 2 },
            Statistic::Gap,
            Statistic::Borel { order: 3 },
            Statistic::IteratedLog,
        ];
        for st in stats {
            let mut prev = 1.0;
            for i in 0..200 {
                let b = st.tail_bound(4096, i as f64 * 0.7);
                assert!(b <= prev + 1e-15, "{st:?}");
                prev = b;
            }
        }
    }
}
