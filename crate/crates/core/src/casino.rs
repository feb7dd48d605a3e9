//! Quantum casinos of the first, second and third kind.

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{ensure, Result};
use crate::linalg::{c, operator_norm, spectral_radius_2x2, CMatrix};
use crate::quantum::{bloch, trace_distance};
use crate::report::Check;
use crate::rng::{gaussian, stream_rng, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CasinoKind {
    /// Pure qubit states.
    First,
    /// Density operators from the Bloch ball.
    Second,
    /// 2×2 complex matrices.
    Third,
}

impl CasinoKind {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(CasinoKind::First),
            2 => Ok(CasinoKind::Second),
            3 => Ok(CasinoKind::Third),
            _ => Err(crate::Error::Usage(format!("casino kind must be 1, 2 or 3, got {k}"))),
        }
    }
}

/// How `‖a − b‖` is measured in the third kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum MatrixDistance {
    #[default]
    SpectralRadius,
    OperatorNorm,
}

#[derive(Clone, Debug, Serialize)]
pub struct CasinoConfig {
    pub kind: CasinoKind,
    pub epsilon: f64,
    pub scale: f64,
    pub seed: u64,
    pub distance: MatrixDistance,
}

impl CasinoConfig {
    pub fn new(kind: CasinoKind, epsilon: f64, seed: u64) -> Result<Self> {
        let cfg = CasinoConfig { kind, epsilon, scale: 10.0, seed, distance: MatrixDistance::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        self.scale = scale;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.epsilon >= 0.0 && !self.epsilon.is_nan(), Validation, "ε must be non-negative, got {}", self.epsilon);
        ensure!(self.scale > 0.0 && self.scale.is_finite(), Validation, "scale must be positive, got {}", self.scale);
        Ok(())
    }
}

/// A coin value or a bet object; qubit states are carried as Bloch vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Outcome {
    State([f64; 3]),
    Matrix(CMatrix),
}

impl Outcome {
    pub fn matrix(&self) -> Option<&CMatrix> {
        match self {
            Outcome::Matrix(m) => Some(m),
            Outcome::State(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Outcome::State(r) => format!("bloch({:.6},{:.6},{:.6})", r[0], r[1], r[2]),
            Outcome::Matrix(m) => {
                if m.max_abs_diff(&CMatrix::pauli_x()) == 0.0 {
                    "σx".into()
                } else if m.max_abs_diff(&CMatrix::pauli_y()) == 0.0 {
                    "σy".into()
                } else if m.max_abs_diff(&CMatrix::pauli_z()) == 0.0 {
                    "σz".into()
                } else {
                    m.to_string().replace('\n', " ")
                }
            }
        }
    }
}

fn unit_vector<R: RngCore + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn sample_coin<R: RngCore + ?Sized>(kind: CasinoKind, scale: f64, rng: &mut R) -> Outcome {
    match kind {
        CasinoKind::First => Outcome::State(unit_vector(rng)),
        CasinoKind::Second => {
            let u = unit_vector(rng);
            let r = rng.random::<f64>().cbrt();
            Outcome::State([u[0] * r, u[1] * r, u[2] * r])
        }
        CasinoKind::Third => {
            let mut m = CMatrix::zeros(2);
            for i in 0..2 {
                for j in 0..2 {
                    m[(i, j)] = c(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale));
                }
            }
            Outcome::Matrix(m)
        }
    }
}

pub fn distance(kind: CasinoKind, mode: MatrixDistance, outcome: &Outcome, bet: &Outcome) -> Result<f64> {
    match (kind, outcome, bet) {
        (CasinoKind::First | CasinoKind::Second, Outcome::State(a), Outcome::State(b)) => {
            trace_distance(&bloch(*a)?, &bloch(*b)?)
        }
        (CasinoKind::Third, Outcome::Matrix(a), Outcome::Matrix(b)) => {
            ensure!(a.dim() == 2 && b.dim() == 2, Usage, "third-kind objects are 2×2 matrices");
            let d = a - b;
            match mode {
                MatrixDistance::SpectralRadius => spectral_radius_2x2(&d),
                MatrixDistance::OperatorNorm => operator_norm(&d),
            }
        }
        _ => Err(crate::Error::Usage(format!("outcome and bet do not match a {kind:?} casino"))),
    }
}

/// Partial map from histories to bets; `None` means no bet.
pub trait QStrategy: Sync {
    fn name(&self) -> &str;
    fn kind(&self) -> Option<CasinoKind>;
    fn decide(&self, history: &[Outcome]) -> Option<Outcome>;
}

/// Bets σx, σy or σz according to `Tr(ā†ā)` of the tensor history against `0` and `2^n`.
pub struct PauliHeight;

/// `log2 Tr(ā(n)† ā(n))`, using multiplicativity of the trace over tensor factors.
pub fn log2_history_trace(history: &[Outcome]) -> f64 {
    history
        .iter()
        .map(|o| {
            let m = o.matrix().expect("third-kind history");
            m.hs_inner(m).re.log2()
        })
        .sum()
}

/// Tensor product of the history, for explicit checks on short histories.
pub fn history_tensor(history: &[CMatrix]) -> CMatrix {
    history.iter().skip(1).fold(history[0].clone(), |acc, m| acc.kron(m))
}

impl QStrategy for PauliHeight {
    fn name(&self) -> &str {
        "pauli-height"
    }

    fn kind(&self) -> Option<CasinoKind> {
        Some(CasinoKind::Third)
    }

    fn decide(&self, history: &[Outcome]) -> Option<Outcome> {
        if history.is_empty() {
            return None;
        }
        let l = log2_history_trace(history);
        let m = if l == f64::NEG_INFINITY {
            CMatrix::pauli_x()
        } else if l < history.len() as f64 {
            CMatrix::pauli_y()
        } else {
            CMatrix::pauli_z()
        };
        Some(Outcome::Matrix(m))
    }
}

pub fn pauli_height_strategy() -> PauliHeight {
    PauliHeight
}

/// Always the same bet.
pub struct FixedBet {
    name: String,
    bet: Outcome,
    kind: CasinoKind,
}

impl FixedBet {
    pub fn new(name: &str, kind: CasinoKind, bet: Outcome) -> Self {
        FixedBet { name: name.into(), bet, kind }
    }

    /// `I/2` for qubit casinos, `σz` for the third kind.
    pub fn blind(kind: CasinoKind) -> Self {
        match kind {
            CasinoKind::Third => FixedBet::new("blind-fixed", kind, Outcome::Matrix(CMatrix::pauli_z())),
            CasinoKind::First => FixedBet::new("blind-fixed", kind, Outcome::State([0.0, 0.0, 1.0])),
            CasinoKind::Second => FixedBet::new("blind-fixed", kind, Outcome::State([0.0; 3])),
        }
    }
}

impl QStrategy for FixedBet {
    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> Option<CasinoKind> {
        Some(self.kind)
    }

    fn decide(&self, _: &[Outcome]) -> Option<Outcome> {
        Some(self.bet.clone())
    }
}

/// Bets the previous outcome.
pub struct RepeatLast;

impl QStrategy for RepeatLast {
    fn name(&self) -> &str {
        "repeat-last"
    }

    fn kind(&self) -> Option<CasinoKind> {
        None
    }

    fn decide(&self, history: &[Outcome]) -> Option<Outcome> {
        history.last().cloned()
    }
}

/// Bets the running average of past outcomes.
pub struct HistoryMean;

impl QStrategy for HistoryMean {
    fn name(&self) -> &str {
        "history-mean"
    }

    fn kind(&self) -> Option<CasinoKind> {
        None
    }

    fn decide(&self, history: &[Outcome]) -> Option<Outcome> {
        let n = history.len() as f64;
        match history.first()? {
            Outcome::State(_) => {
                let mut s = [0.0; 3];
                for o in history {
                    if let Outcome::State(r) = o {
                        (0..3).for_each(|k| s[k] += r[k] / n);
                    }
                }
                Some(Outcome::State(s))
            }
            Outcome::Matrix(_) => {
                let mut s = CMatrix::zeros(2);
                for o in history {
                    s = &s + &o.matrix().expect("third-kind history").scale_re(1.0 / n);
                }
                Some(Outcome::Matrix(s))
            }
        }
    }
}

pub const BUILTIN_QSTRATEGIES: [&str; 4] = ["pauli-height", "blind-fixed", "repeat-last", "history-mean"];

pub fn builtin_qstrategy(name: &str, kind: CasinoKind) -> Result<Box<dyn QStrategy>> {
    let s: Box<dyn QStrategy> = match name {
        "pauli-height" => Box::new(PauliHeight),
        "blind-fixed" => Box::new(FixedBet::blind(kind)),
        "repeat-last" => Box::new(RepeatLast),
        "history-mean" => Box::new(HistoryMean),
        _ => return Err(crate::Error::Usage(format!("unknown strategy {name:?}; known: {}", BUILTIN_QSTRATEGIES.join(", ")))),
    };
    if let Some(k) = s.kind() {
        ensure!(k == kind, Usage, "strategy {name} plays in a {k:?} casino, not {kind:?}");
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct TurnRecord {
    pub turn: usize,
    pub outcome: Outcome,
    pub bet: Option<Outcome>,
    pub distance: Option<f64>,
    pub won: Option<bool>,
    pub payoff: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameRecord {
    pub turns: Vec<TurnRecord>,
    pub wins: u64,
    pub losses: u64,
}

impl GameRecord {
    pub fn payoff(&self) -> i64 {
        self.turns.last().map_or(0, |t| t.payoff)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("turn,bet,distance,result,payoff\n");
        for t in &self.turns {
            let bet = t.bet.as_ref().map_or("↑".to_string(), |b| b.label());
            let dist = t.distance.map_or(String::new(), |d| format!("{d:.6}"));
            let res = match t.won {
                Some(true) => "win",
                Some(false) => "lose",
                None => "none",
            };
            out.push_str(&format!("{},\"{}\",{},{},{}\n", t.turn, bet, dist, res, t.payoff));
        }
        out
    }
}

/// Plays the given outcome sequence.
pub fn play_outcomes(cfg: &CasinoConfig, strategy: &dyn QStrategy, outcomes: Vec<Outcome>) -> Result<GameRecord> {
    cfg.validate()?;
    let mut history: Vec<Outcome> = Vec::with_capacity(outcomes.len());
    let mut rec = GameRecord { turns: Vec::with_capacity(outcomes.len()), wins: 0, losses: 0 };
    let mut payoff = 0i64;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let bet = strategy.decide(&history);
        let (dist, won) = match &bet {
            Some(b) => {
                let d = distance(cfg.kind, cfg.distance, &outcome, b)?;
                let w = d <= cfg.epsilon;
                if w {
                    payoff += 1;
                    rec.wins += 1;
                } else {
                    payoff -= 1;
                    rec.losses += 1;
                }
                (Some(d), Some(w))
            }
            None => (None, None),
        };
        history.push(outcome.clone());
        rec.turns.push(TurnRecord { turn: i + 1, outcome, bet, distance: dist, won, payoff });
    }
    Ok(rec)
}

pub fn play(cfg: &CasinoConfig, strategy: &dyn QStrategy, turns: usize) -> Result<GameRecord> {
    ensure!(turns >= 1, Usage, "need at least one turn");
    let mut rng = stream_rng(cfg.seed, Stream::Casino);
    let outcomes = (0..turns).map(|_| sample_coin(cfg.kind, cfg.scale, &mut rng)).collect();
    play_outcomes(cfg, strategy, outcomes)
}

fn m2(rows: [[(f64, f64); 2]; 2]) -> CMatrix {
    CMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(re, im)| c(re, im)).collect()).collect())
        .expect("2×2 literal")
}

/// The five coin values of the worked third-kind evening; the last two are the printed
/// differences with `σz` added back.
pub fn reference_outcomes() -> Vec<CMatrix> {
    let sz = CMatrix::pauli_z();
    vec![
        m2([[(5.21295, -0.543424), (-5.83373, -1.51207)], [(-5.72507, 5.64286), (0.264194, -5.36408)]]),
        m2([[(-2.21604, -8.29818), (2.29687, -9.22925)], [(-7.10612, 4.25443), (-8.19842, 6.03258)]]),
        m2([[(9.80519, -7.0523), (-7.72367, -6.40421)], [(-0.227234, 7.87254), (6.36604, 6.81784)]]),
        &m2([[(3.55982, -1.58403), (2.19976, -1.67009)], [(0.284886, 2.77311), (-7.06443, -6.30601)]]) + &sz,
        &m2([[(-8.49908, 1.07129), (-0.361299, -7.07676)], [(9.60704, 6.81686), (-1.16288, -3.10934)]]) + &sz,
    ]
}

pub const REFERENCE_NORMS: [f64; 4] = [11.5984, 15.3175, 10.0665, 14.1717];

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub checks: Vec<Check>,
    pub record: GameRecord,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn replay_paper_example() -> Result<ReplayReport> {
    let a = reference_outcomes();
    let mut checks = Vec::new();
    let t1 = a[0].hs_inner(&a[0]).re;
    checks.push(Check::close("Tr(a(1)†a(1))", t1, 157.25, 0.05));
    let a2 = history_tensor(&a[..2]);
    let t2 = a2.hs_inner(&a2).re;
    checks.push(Check::close("Tr(ā(2)†ā(2))", t2, 52903.4, 0.5));
    let sz = CMatrix::pauli_z();
    for (k, want) in REFERENCE_NORMS.iter().enumerate() {
        let d = spectral_radius_2x2(&(&a[k + 1] - &sz))?;
        checks.push(Check::close(format!("‖a({}) − σz‖", k + 2), d, *want, 1e-3));
    }
    let cfg = CasinoConfig::new(CasinoKind::Third, 10.0, 0)?;
    let record = play_outcomes(&cfg, &PauliHeight, a.into_iter().map(Outcome::Matrix).collect())?;
    let bets: Vec<&TurnRecord> = record.turns.iter().filter(|t| t.bet.is_some()).collect();
    checks.push(Check::with("first turn has no bet", record.turns[0].bet.is_none(), true, record.turns[0].bet.is_none()));
    let all_z = bets.iter().all(|t| t.bet.as_ref().and_then(Outcome::matrix).is_some_and(|m| *m == sz));
    checks.push(Check::with("every bet is σz", all_z && bets.len() == 4, "4 × σz", format!("{} bets", bets.len())));
    checks.push(Check::with("every bet loses at ε = 10", record.wins == 0, 0, record.wins));
    checks.push(Check::with("final payoff", record.payoff() == -4, -4, record.payoff()));
    Ok(ReplayReport { checks, record })
}

#[derive(Clone, Debug, Serialize)]
pub struct PayoffEstimate {
    pub strategy: String,
    pub games: usize,
    pub turns: usize,
    pub bets: u64,
    pub mean: f64,
    pub stderr: f64,
    pub baseline_mean: f64,
    pub baseline_stderr: f64,
    pub z: f64,
}

fn mean_se(sum: f64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let m = sum / n as f64;
    let var = (1.0 - m * m).max(0.0);
    let se = if n > 1 { (var * n as f64 / (n - 1) as f64 / n as f64).sqrt() } else { 0.0 };
    (m, se)
}

/// Mean per-bet payoff over independent games, and the blind baseline: the same bets scored
/// against fresh coins from a separate stream.
pub fn expected_payoff_mc(cfg: &CasinoConfig, strategy: &dyn QStrategy, games: usize, turns: usize) -> Result<PayoffEstimate> {
    ensure!(games * turns >= 1000, Usage, "need at least 1000 turns in total, got {}", games * turns);
    ensure!(turns >= 1, Usage, "need at least one turn per game");
    let mut rng = stream_rng(cfg.seed, Stream::Casino);
    let mut base_rng = stream_rng(cfg.seed, Stream::CasinoBaseline);
    let (mut bets, mut sum, mut base_sum) = (0u64, 0.0, 0.0);
    for _ in 0..games {
        let outcomes: Vec<Outcome> = (0..turns).map(|_| sample_coin(cfg.kind, cfg.scale, &mut rng)).collect();
        let rec = play_outcomes(cfg, strategy, outcomes)?;
        for t in &rec.turns {
            if let (Some(b), Some(w)) = (&t.bet, t.won) {
                bets += 1;
                sum += if w { 1.0 } else { -1.0 };
                let fresh = sample_coin(cfg.kind, cfg.scale, &mut base_rng);
                base_sum += if distance(cfg.kind, cfg.distance, &fresh, b)? <= cfg.epsilon { 1.0 } else { -1.0 };
            }
        }
    }
    let (mean, stderr) = mean_se(sum, bets);
    let (baseline_mean, baseline_stderr) = mean_se(base_sum, bets);
    let pooled = (stderr * stderr + baseline_stderr * baseline_stderr).sqrt();
    let z = if pooled > 0.0 { (mean - baseline_mean) / pooled } else if mean == baseline_mean { 0.0 } else { f64::INFINITY };
    Ok(PayoffEstimate { strategy: strategy.name().to_string(), games, turns, bets, mean, stderr, baseline_mean, baseline_stderr, z })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_laws() {
        let mut rng = stream_rng(1, Stream::Casino);
        let n = 100_000;
        let mut mean = [0.0; 3];
        let mut radii = Vec::with_capacity(n);
        let mut prev: Option<[f64; 3]> = None;
        let mut corr = 0.0;
        for _ in 0..n {
            let Outcome::State(r) = sample_coin(CasinoKind::Second, 10.0, &mut rng) else { unreachable!() };
            (0..3).for_each(|k| mean[k] += r[k] / n as f64);
            radii.push((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt());
            if let Some(p) = prev {
                corr += (p[0] * r[0] + p[1] * r[1] + p[2] * r[2]) / n as f64;
            }
            prev = Some(r);
        }
        assert!(mean.iter().all(|m| m.abs() < 0.02));
        // E(r·r') for independent draws is 0; E|r|² = 3/5 normalizes
        assert!((corr / 0.6).abs() < 0.03);
        radii.sort_by(f64::total_cmp);
        let ks = radii.iter().enumerate().map(|(i, r)| {
            let f = r.powi(3);
            (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
        });
        assert!(ks.fold(0.0, f64::max) < 0.02);

        let mut proj = CMatrix::zeros(2);
        for _ in 0..n {
            let Outcome::State(r) = sample_coin(CasinoKind::First, 10.0, &mut rng) else { unreachable!() };
            assert!(((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) - 1.0).abs() < 1e-12);
            proj = &proj + &bloch(r).unwrap().matrix().scale_re(1.0 / n as f64);
        }
        let dev = &proj - &CMatrix::identity(2).scale_re(0.5);
        assert!(operator_norm(&dev).unwrap() < 0.02);

        for _ in 0..1000 {
            let Outcome::Matrix(m) = sample_coin(CasinoKind::Third, 10.0, &mut rng) else { unreachable!() };
            assert!(m.entries().iter().all(|z| z.norm() <= 10.0 * 2f64.sqrt()));
        }
    }

    #[test]
    fn distances() {
        let sz = CMatrix::pauli_z();
        let a = reference_outcomes();
        let o = Outcome::Matrix(a[1].clone());
        assert_eq!(distance(CasinoKind::Third, MatrixDistance::SpectralRadius, &o, &o).unwrap(), 0.0);
        let d = distance(CasinoKind::Third, MatrixDistance::SpectralRadius, &o, &Outcome::Matrix(sz.clone())).unwrap();
        assert!((d - 11.5984).abs() < 1e-3);
        let d3 = distance(CasinoKind::Third, MatrixDistance::SpectralRadius, &Outcome::Matrix(a[2].clone()), &Outcome::Matrix(sz.clone())).unwrap();
        assert!((d3 - 15.3175).abs() < 1e-3);
        // the largest singular value is a different quantity for these matrices
        let op = distance(CasinoKind::Third, MatrixDistance::OperatorNorm, &o, &Outcome::Matrix(sz)).unwrap();
        assert!(op > d + 1.0);
        let s = Outcome::State([0.0, 0.0, 0.6]);
        assert!((distance(CasinoKind::Second, MatrixDistance::default(), &s, &Outcome::State([0.0, 0.0, -0.2])).unwrap() - 0.4).abs() < 1e-12);
        assert!(distance(CasinoKind::Second, MatrixDistance::default(), &s, &o).is_err());
    }

    #[test]
    fn pauli_height_decisions() {
        assert!(PauliHeight.decide(&[]).is_none());
        let zero = Outcome::Matrix(CMatrix::zeros(2));
        assert_eq!(PauliHeight.decide(&[zero]), Some(Outcome::Matrix(CMatrix::pauli_x())));
        let small = Outcome::Matrix(CMatrix::identity(2).scale_re(0.5));
        assert_eq!(PauliHeight.decide(&[small]), Some(Outcome::Matrix(CMatrix::pauli_y())));
        let a = reference_outcomes();
        assert_eq!(PauliHeight.decide(&[Outcome::Matrix(a[0].clone())]), Some(Outcome::Matrix(CMatrix::pauli_z())));
        for n in 1..=4 {
            let t = history_tensor(&a[..n]);
            let explicit = t.hs_inner(&t).re.log2();
            let hist: Vec<Outcome> = a[..n].iter().cloned().map(Outcome::Matrix).collect();
            assert!((log2_history_trace(&hist) - explicit).abs() < 1e-9);
        }
    }

    #[test]
    fn replay() {
        let r = replay_paper_example().unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        let csv = r.record.to_csv();
        assert!(csv.lines().nth(1).unwrap().starts_with("1,\"↑\",,none,0"));
        assert!(csv.trim_end().ends_with("lose,-4"));
    }

    #[test]
    fn play_rules() {
        let mut cfg = CasinoConfig::new(CasinoKind::Second, 1.0, 3).unwrap();
        let rec = play(&cfg, &FixedBet::blind(CasinoKind::Second), 200).unwrap();
        assert_eq!(rec.wins, 200);
        cfg.epsilon = 0.0;
        let rec = play(&cfg, &RepeatLast, 10_000).unwrap();
        assert_eq!(rec.wins, 0);
        assert_eq!(rec.payoff(), -(rec.losses as i64));
        let a = play(&cfg, &HistoryMean, 50).unwrap();
        let b = play(&cfg, &HistoryMean, 50).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let huge = CasinoConfig::new(CasinoKind::Third, 1e6, 4).unwrap();
        let e = expected_payoff_mc(&huge, &PauliHeight, 200, 5).unwrap();
        assert_eq!(e.mean, 1.0);
        assert!(builtin_qstrategy("pauli-height", CasinoKind::Second).is_err());
        assert!(builtin_qstrategy("nope", CasinoKind::Second).is_err());
    }

    #[test]
    fn blind_ball_baseline() {
        // trace distance to I/2 is |r|/2, so the win probability is 0.5³
        let cfg = CasinoConfig::new(CasinoKind::Second, 0.25, 9).unwrap();
        let e = expected_payoff_mc(&cfg, &FixedBet::blind(CasinoKind::Second), 10_000, 1).unwrap();
        assert!(((e.mean - (2.0 * 0.125 - 1.0)) / e.stderr).abs() <= 4.0);
        assert!(e.z.abs() <= 4.0);
    }
}
