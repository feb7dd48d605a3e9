use std::path::PathBuf;

use clap::{Args, ValueEnum};
use randlab_core::bits::{champernowne_prefix, read_bits_file, BitStream, BitString};
use randlab_core::coding::{
    average_codeword_length, build_prefix_code, huffman_code, joint_entropy_suite, kl_divergence, kraft_sum,
    omega_lower_bound, sanov_decay, shannon_entropy, typical_set, Distribution, ToyChaitinMachine,
};
use randlab_core::exact::{parse_ratio, ratio_string};
use randlab_core::gambling::{
    builtin_strategy, expected_payoff_exhaustive, ext, martingale_sim, payoff_sim, st_petersburg_expected, Strategy,
    TableStrategy,
};
use randlab_core::mltests::{
    complexity_deficiency, default_battery, knuth_battery, registry_certified, run_tests, CalibratedTest, Statistic,
};
use randlab_core::prg::{ghd_full_period, lcg, lcg_cycle, middle_square, middle_square_cycle, GeneratorSpec};
use randlab_core::report::{Check, Report};
use randlab_core::symdyn::{block_entropy_estimate, brudno_rate, exact_entropy_rate, sample_trajectory, ShiftSpec};
use serde_json::{json, Value};

use crate::output::{value_name, write_atomic, Emitted, Format, ReportArgs, Table};
use crate::{CliError, CliResult};

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn need<T: Clone>(v: &Option<T>, flag: &str, op: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{op} needs --{flag}")))
}

/// Comma-separated weights; entries with `/` make the law exact.
fn parse_law(list: &[String]) -> CliResult<Distribution> {
    let exact = list.iter().any(|s| s.contains('/'));
    let v: Value = if exact {
        Value::Array(list.iter().map(|s| Value::String(s.trim().to_string())).collect())
    } else {
        let ws = list
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad weight {s:?}"))))
            .collect::<CliResult<Vec<f64>>>()?;
        json!(ws)
    };
    Ok(Distribution::from_json_value(&v)?)
}

// ---- randtest ----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Battery {
    /// Frequency, serial (lags 1 to 3), runs and gap.
    Default,
    /// The default battery with the 1024-bit minimum of the classic suite.
    Knuth,
    /// Every calibrated statistic, including Borel normality and the iterated logarithm.
    Full,
}

#[derive(Args, Debug)]
pub struct RandtestArgs {
    /// Bit file, ASCII `0`/`1` or packed `BST1`.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Battery::Default)]
    battery: Battery,
    /// Fail when the universal level reaches this value.
    #[arg(long)]
    max_level: Option<u32>,
    /// Shorthand for `--format json --report-out PATH`.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArgs,
}

impl RandtestArgs {
    pub fn report_args(&self) -> ReportArgs {
        match &self.json {
            Some(p) => ReportArgs { format: Format::Json, report_out: Some(p.clone()), canonical: self.report.canonical },
            None => self.report.clone(),
        }
    }
}

pub fn randtest(a: &RandtestArgs) -> CliResult<Emitted> {
    let x = read_bits_file(&a.input)?;
    let rep = match a.battery {
        Battery::Knuth => knuth_battery(&x)?,
        Battery::Default => run_tests(&default_battery(), &x),
        Battery::Full => {
            let mut tests = default_battery();
            tests.extend((1..=4).map(|order| CalibratedTest::new(Statistic::Borel { order })));
            tests.push(CalibratedTest::new(Statistic::IteratedLog));
            run_tests(&tests, &x)
        }
    };
    let def = complexity_deficiency(&x);
    let mut checks = vec![match registry_certified() {
        Ok(()) => Check::new("registered tests certified for n ≤ 16", true),
        Err(e) => Check::with("registered tests certified for n ≤ 16", false, "certified", e),
    }];
    if let Some(m) = a.max_level {
        checks.push(Check::with("universal level below threshold", rep.universal_level < m, format!("< {m}"), rep.universal_level));
    }
    let mut table = Table::new(["test", "score", "level", "pseudorandom_q"]);
    for o in &rep.outcomes {
        table.push([o.name.clone(), o.score.to_string(), o.level.to_string(), o.pseudorandom_q.to_string()]);
    }
    let report = Report::new(
        "randtest",
        json!({"in": a.input, "battery": value_name(&a.battery), "length": x.len()}),
        json!({"tests": rep, "deficiency": def}),
    )
    .with_checks(checks);
    Ok(Emitted { report, table: Some(table) })
}

// ---- prg ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrgKind {
    Lcg,
    Randu,
    MinimalStandard,
    MiddleSquare,
    LaggedXor,
    Rule30,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Bits,
    Ints,
}

#[derive(Args, Debug)]
pub struct PrgArgs {
    #[arg(long, value_enum)]
    kind: PrgKind,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    /// Modulus.
    #[arg(long)]
    n: Option<u64>,
    /// Digit count for middle-square.
    #[arg(long, default_value_t = 4)]
    digits: u32,
    /// Lags for lagged-xor.
    #[arg(long, default_value_t = 24)]
    p: usize,
    #[arg(long, default_value_t = 55)]
    q: usize,
    /// Seed register for lagged-xor (at least `q` bits).
    #[arg(long)]
    seed_bits: Option<String>,
    /// Automaton width for rule30.
    #[arg(long, default_value_t = 257)]
    width: usize,
    /// Number of outputs (integers or bits).
    #[arg(long, default_value_t = 1024)]
    count: usize,
    #[arg(long, value_enum, default_value_t = Emit::Bits)]
    emit: Emit,
    /// Data file; without it the output is inlined in the report.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also measure the cycle structure.
    #[arg(long)]
    period: bool,
    #[command(flatten)]
    pub report: ReportArgs,
}

fn lcg_params(a: &PrgArgs) -> CliResult<(u64, u64, u64)> {
    Ok(match a.kind {
        PrgKind::Randu => (65539, 0, 1 << 31),
        PrgKind::MinimalStandard => (16807, 0, (1 << 31) - 1),
        _ => (need(&a.a, "a", "lcg")?, a.b.unwrap_or(0), need(&a.n, "n", "lcg")?),
    })
}

pub fn prg(a: &PrgArgs, seed: u64) -> CliResult<Emitted> {
    let spec = match a.kind {
        PrgKind::Lcg | PrgKind::Randu | PrgKind::MinimalStandard => {
            let (ma, mb, mn) = lcg_params(a)?;
            GeneratorSpec::Lcg { a: ma, b: mb, n: mn, seed }
        }
        PrgKind::MiddleSquare => GeneratorSpec::MiddleSquare { digits: a.digits, seed },
        PrgKind::LaggedXor => {
            let bits = match &a.seed_bits {
                Some(s) => s.clone(),
                None => BitStream::uniform(seed).prefix(a.q).to_string(),
            };
            GeneratorSpec::LaggedXor { p: a.p, q: a.q, seed_bits: bits }
        }
        PrgKind::Rule30 => GeneratorSpec::Rule30 { width: a.width, seed_row: None },
    };
    let (data, preview) = match a.emit {
        Emit::Bits => {
            let bits = spec.bits(a.count)?;
            (bits.to_string() + "\n", json!(bits.to_string()))
        }
        Emit::Ints => {
            let ints = match &spec {
                GeneratorSpec::Lcg { a: ma, b: mb, n: mn, seed } => lcg(*ma, *mb, *mn, *seed, a.count)?,
                GeneratorSpec::MiddleSquare { digits, seed } => middle_square(*seed, a.count, *digits)?,
                _ => return usage("--emit ints needs an lcg or middle-square generator"),
            };
            let text: String = ints.iter().map(|v| format!("{v}\n")).collect();
            (text, json!(ints))
        }
    };
    let mut outputs = json!({"count": a.count});
    match &a.out {
        Some(p) => {
            write_atomic(p, data.as_bytes())?;
            outputs["out"] = json!(p);
        }
        None => outputs["values"] = preview,
    }
    let mut checks = Vec::new();
    if a.period {
        match &spec {
            GeneratorSpec::Lcg { a: ma, b: mb, n: mn, seed } => {
                let c = lcg_cycle(*ma, *mb, *mn, *seed)?;
                let full = ghd_full_period(*ma, *mb, *mn);
                outputs["cycle"] = json!(c);
                outputs["full_period_criterion"] = json!(full);
                checks.push(Check::with("criterion agrees with the measured cycle", full == (c.tail == 0 && c.period == *mn), full, format!("tail {} period {}", c.tail, c.period)));
            }
            GeneratorSpec::MiddleSquare { digits, seed } => outputs["cycle"] = json!(middle_square_cycle(*seed, *digits)?),
            _ => return usage("--period needs an lcg or middle-square generator"),
        }
    }
    let report = Report::new("prg", json!({"generator": spec, "emit": value_name(&a.emit)}), outputs)
        .with_seed(seed)
        .with_checks(checks);
    Ok(report.into())
}

// ---- gamble ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GambleMode {
    /// Unit-stake payoff trajectory.
    Payoff,
    /// The subsequence selected by the strategy.
    Ext,
    /// Exact expected payoff over all words of length `--n`.
    Exhaustive,
    /// Doubling stakes after losses.
    Martingale,
    /// Expected payoff of the truncated St. Petersburg game.
    StPetersburg,
}

#[derive(Args, Debug)]
pub struct GambleArgs {
    /// Builtin strategy name.
    #[arg(long, default_value = "last-result", conflicts_with = "table")]
    strategy: String,
    /// JSON lookup table `{history: decision}`.
    #[arg(long, value_name = "PATH")]
    table: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GambleMode::Payoff)]
    mode: GambleMode,
    /// Bit file to play against.
    #[arg(long = "in", value_name = "PATH", conflicts_with_all = ["champernowne", "random"])]
    input: Option<PathBuf>,
    /// Play against the first N Champernowne bits.
    #[arg(long, value_name = "N")]
    champernowne: Option<usize>,
    /// Play against N fair-coin bits from the seed.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    /// Word length for `exhaustive`, term count for `st-petersburg`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    stake: u64,
    #[arg(long, default_value_t = 1000)]
    bankroll: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}

fn load_strategy(a: &GambleArgs) -> CliResult<Box<dyn Strategy>> {
    match &a.table {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let name = p.file_stem().map_or("table".into(), |s| s.to_string_lossy().into_owned());
            Ok(Box::new(TableStrategy::from_json(&name, &text)?))
        }
        None => Ok(builtin_strategy(&a.strategy)?),
    }
}

fn gamble_input(a: &GambleArgs, seed: u64) -> CliResult<BitString> {
    if let Some(p) = &a.input {
        return Ok(read_bits_file(p)?);
    }
    if let Some(n) = a.champernowne {
        return Ok(champernowne_prefix(n));
    }
    if let Some(n) = a.random {
        return Ok(BitStream::uniform(seed).prefix(n));
    }
    usage("give one of --in, --champernowne or --random")
}

pub fn gamble(a: &GambleArgs, seed: u64) -> CliResult<Emitted> {
    let s = load_strategy(a)?;
    let inputs = json!({"strategy": s.name(), "mode": value_name(&a.mode)});
    let (outputs, table, checks) = match a.mode {
        GambleMode::Payoff => {
            let x = gamble_input(a, seed)?;
            let t = payoff_sim(s.as_ref(), &x);
            let mut table = Table::new(["turn", "bet", "outcome", "gain", "payoff"]);
            for r in &t.turns {
                table.push([r.turn.to_string(), r.bet.map_or("-".into(), |b| b.to_string()), r.outcome.to_string(), r.gain.to_string(), r.payoff.to_string()]);
            }
            let wins = t.turns.iter().filter(|r| r.gain > 0).count() as i64;
            let losses = t.turns.iter().filter(|r| r.gain < 0).count() as i64;
            let check = Check::with("payoff equals wins minus losses", t.payoff() == wins - losses, wins - losses, t.payoff());
            (json!({"input": x.to_string(), "payoff": t.payoff(), "bets": t.bets(), "turns": t.turns}), Some(table), vec![check])
        }
        GambleMode::Ext => {
            let x = gamble_input(a, seed)?;
            let selected = ext(s.as_ref(), &BitStream::periodic(&x), x.len());
            (json!({"input": x.to_string(), "selected": selected.to_string(), "length": selected.len()}), None, vec![])
        }
        GambleMode::Exhaustive => {
            let n = need(&a.n, "n", "exhaustive")?;
            let e = expected_payoff_exhaustive(s.as_ref(), n)?;
            let zero = ratio_string(&e) == "0/1";
            (json!({"n": n, "expected_payoff": ratio_string(&e)}), None, vec![Check::with("expected payoff is zero", zero, "0/1", ratio_string(&e))])
        }
        GambleMode::Martingale => {
            let x = gamble_input(a, seed)?;
            let turns = martingale_sim(s.as_ref(), &x, a.stake, a.bankroll);
            let mut table = Table::new(["turn", "stake", "bet", "outcome", "gain", "bankroll"]);
            for r in &turns {
                table.push([r.turn.to_string(), r.stake.to_string(), r.bet.map_or("-".into(), |b| b.to_string()), r.outcome.to_string(), r.gain.to_string(), r.bankroll.to_string()]);
            }
            (json!({"turns": turns, "final_bankroll": turns.last().map_or(a.bankroll as i64, |r| r.bankroll)}), Some(table), vec![])
        }
        GambleMode::StPetersburg => {
            let n = need(&a.n, "n", "st-petersburg")?;
            let r = st_petersburg_expected(u32::try_from(n).map_err(|_| CliError::Usage("--n too large".into()))?)?;
            (json!(r), None, vec![])
        }
    };
    let mut report = Report::new("gamble", inputs, outputs).with_checks(checks);
    if a.random.is_some() {
        report = report.with_seed(seed);
    }
    Ok(Emitted { report, table })
}

// ---- shift-entropy ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShiftKind {
    Bernoulli,
    Markov,
}

#[derive(Args, Debug)]
pub struct ShiftArgs {
    #[arg(long, value_enum)]
    kind: ShiftKind,
    /// Probability of a 1 for the Bernoulli shift.
    #[arg(long)]
    p: Option<f64>,
    /// Initial law of the Markov shift.
    #[arg(long, value_delimiter = ',')]
    e: Vec<f64>,
    /// Transition matrix, row-major.
    #[arg(long = "P", value_delimiter = ',')]
    matrix: Vec<f64>,
    /// Sample length.
    #[arg(long, default_value_t = 1 << 18)]
    n: usize,
    /// Block orders for the plug-in estimator.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4, 8])]
    k: Vec<usize>,
    #[command(flatten)]
    pub report: ReportArgs,
}

pub fn shift_entropy(a: &ShiftArgs, seed: u64) -> CliResult<Emitted> {
    let shift = match a.kind {
        ShiftKind::Bernoulli => ShiftSpec::bernoulli(need(&a.p, "p", "bernoulli")?)?,
        ShiftKind::Markov => {
            if a.e.len() != 2 || a.matrix.len() != 4 {
                return usage("markov needs --e a,b and --P p00,p01,p10,p11");
            }
            let m = &a.matrix;
            ShiftSpec::markov([a.e[0], a.e[1]], [[m[0], m[1]], [m[2], m[3]]])?
        }
    };
    let x = sample_trajectory(&shift, a.n, seed)?;
    let exact = exact_entropy_rate(&shift);
    let mut table = Table::new(["estimator", "k", "rate"]);
    table.push(["exact", "-", &exact.to_string()]);
    let mut blocks = Vec::new();
    for &k in &a.k {
        let rate = block_entropy_estimate(&x, k)?;
        table.push(["block".to_string(), k.to_string(), rate.to_string()]);
        blocks.push(json!({"k": k, "block_entropy": rate * k as f64, "rate": rate}));
    }
    let brudno = brudno_rate(&x).ok();
    if let Some(b) = brudno {
        table.push(["brudno", "-", &b.to_string()]);
    }
    let ones = x.ones() as f64 / x.len().max(1) as f64;
    let report = Report::new("shift-entropy", json!({"shift": shift, "n": a.n}), json!({
        "exact_rate": exact,
        "blocks": blocks,
        "brudno_rate": brudno,
        "frequency_of_ones": ones,
    }))
    .with_seed(seed);
    Ok(Emitted { report, table: Some(table) })
}

// ---- coding ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodingOp {
    Kraft,
    Huffman,
    Entropy,
    Kl,
    Joint,
    Typical,
    Sanov,
    Omega,
}

#[derive(Args, Debug)]
pub struct CodingArgs {
    #[arg(long, value_enum)]
    op: CodingOp,
    /// Codeword lengths for `kraft`.
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<u32>,
    /// A law as comma-separated weights (`p/q` entries make it exact).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p: Vec<String>,
    /// Second law for `kl`.
    #[arg(long, value_delimiter = ',')]
    q: Vec<String>,
    /// A JSON law file, instead of `--p`.
    #[arg(long, value_name = "PATH", conflicts_with = "p")]
    dist: Option<PathBuf>,
    /// Joint law rows for `joint`, as `a,b;c,d`.
    #[arg(long)]
    joint: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Sample sizes for `sanov`.
    #[arg(long, value_delimiter = ',')]
    ns: Vec<usize>,
    /// Frequency of ones defining the rare event for `sanov`.
    #[arg(long)]
    q1: Option<String>,
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}

fn law(a: &CodingArgs) -> CliResult<Distribution> {
    if let Some(p) = &a.dist {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        return Ok(Distribution::parse_json(&text)?);
    }
    if a.p.is_empty() {
        return usage("this op needs --p or --dist");
    }
    parse_law(&a.p)
}

pub fn coding(a: &CodingArgs) -> CliResult<Emitted> {
    let mut table = None;
    let (inputs, outputs, checks) = match a.op {
        CodingOp::Kraft => {
            if a.lengths.is_empty() {
                return usage("kraft needs --lengths");
            }
            let sum = kraft_sum(&a.lengths);
            let code = build_prefix_code(&a.lengths).ok();
            let words: Option<Vec<String>> = code.as_ref().map(|c| c.codewords().iter().map(|w| w.to_string()).collect());
            let check = Check::with("prefix code exists (Kraft sum ≤ 1)", code.is_some(), "≤ 1/1", ratio_string(&sum));
            (json!({"lengths": a.lengths}), json!({"sum": ratio_string(&sum), "feasible": code.is_some(), "codewords": words}), vec![check])
        }
        CodingOp::Huffman => {
            let p = law(a)?;
            let code = huffman_code(&p);
            let l = average_codeword_length(&code, &p)?;
            let h = shannon_entropy(&p);
            let mut t = Table::new(["label", "weight", "codeword"]);
            for ((lab, w), c) in p.labels().iter().zip(p.weights()).zip(code.codewords()) {
                t.push([lab.clone(), w.to_string(), c.to_string()]);
            }
            table = Some(t);
            let words: Vec<String> = code.codewords().iter().map(|w| w.to_string()).collect();
            let check = Check::with("H ≤ L < H + 1", h <= l + 1e-12 && l < h + 1.0, format!("[{h}, {})", h + 1.0), l);
            (json!({"law": p.weights()}), json!({"codewords": words, "average_length": l, "entropy": h}), vec![check])
        }
        CodingOp::Entropy => {
            let p = law(a)?;
            (json!({"law": p.weights()}), json!({"entropy_bits": shannon_entropy(&p)}), vec![])
        }
        CodingOp::Kl => {
            let p = law(a)?;
            if a.q.is_empty() {
                return usage("kl needs --q");
            }
            let q = parse_law(&a.q)?;
            let d = kl_divergence(&p, &q)?;
            (json!({"p": p.weights(), "q": q.weights()}), json!({"kl_bits": d}), vec![Check::with("divergence is non-negative", d >= -1e-12, "≥ 0", d)])
        }
        CodingOp::Joint => {
            let text = need(&a.joint, "joint", "joint")?;
            let rows = text
                .split(';')
                .map(|r| r.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad entry {v:?}")))).collect())
                .collect::<CliResult<Vec<Vec<f64>>>>()?;
            let j = joint_entropy_suite(&rows)?;
            let chain = (j.h_ab - (j.h_a + j.h_b_given_a)).abs();
            (json!({"joint": rows}), json!(j), vec![
                Check::with("chain rule", chain <= 1e-10, "≤ 1e-10", chain),
                Check::with("mutual information non-negative", j.mutual >= -1e-12, "≥ 0", j.mutual),
            ])
        }
        CodingOp::Typical => {
            let p = law(a)?;
            let n = need(&a.n, "n", "typical")?;
            let r = typical_set(&p, n, a.eps)?;
            let check = Check::with("cardinality ≤ 2^(n(H+ε))", r.bound_holds, format!("log2 ≤ {}", r.log2_bound), r.log2_members);
            (json!({"law": p.weights(), "n": n, "epsilon": a.eps}), json!(r), vec![check])
        }
        CodingOp::Sanov => {
            let mu = law(a)?;
            let q1 = need(&a.q1, "q1", "sanov")?;
            let q1 = parse_ratio(&q1).ok_or_else(|| CliError::Usage(format!("bad rational {q1:?}")))?;
            let ns = if a.ns.is_empty() { vec![10, 20, 40, 80] } else { a.ns.clone() };
            let rows = sanov_decay(&mu, &q1, &ns)?;
            let mut t = Table::new(["n", "realizable", "ones", "probability", "rate", "kl"]);
            for r in &rows {
                t.push([r.n.to_string(), r.realizable.to_string(), r.ones.to_string(), r.probability.to_string(), r.rate.to_string(), r.kl.to_string()]);
            }
            table = Some(t);
            (json!({"mu": mu.weights(), "q1": ratio_string(&q1), "ns": ns}), json!({"rows": rows}), vec![])
        }
        CodingOp::Omega => {
            let m = ToyChaitinMachine::demo();
            let mut t = Table::new(["max_len", "max_steps", "bound", "value"]);
            let mut prev = None;
            let mut monotone = true;
            for l in 0..=a.max_len {
                let v = omega_lower_bound(&m, l, a.steps);
                if prev.as_ref().is_some_and(|p| &v < p) {
                    monotone = false;
                }
                t.push([l.to_string(), a.steps.to_string(), v.to_string(), v.to_f64().to_string()]);
                prev = Some(v);
            }
            table = Some(t);
            let last = prev.expect("at least one length");
            let checks = vec![
                Check::new("monotone in length", monotone),
                Check::with("bounded by 1", last.to_f64() <= 1.0, "≤ 1", &last),
            ];
            (json!({"machine": m.name(), "max_len": a.max_len, "max_steps": a.steps}), json!({"bound": last.to_string(), "value": last.to_f64()}), checks)
        }
    };
    let op = format!("coding.{}", value_name(&a.op));
    Ok(Emitted { report: Report::new(op, inputs, outputs).with_checks(checks), table })
}
