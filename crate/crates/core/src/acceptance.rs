//! The acceptance suite: sixteen end-to-end criteria with pinned tolerances and time budgets.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::bits::{bs, BitStream};
use crate::casino::{self, CasinoConfig, CasinoKind};
use crate::coding::{
    average_codeword_length, build_prefix_code, huffman_code, is_prefix_free, kraft_sum, omega_lower_bound,
    shannon_entropy, typical_set, Distribution, ToyChaitinMachine,
};
use crate::error::Result;
use crate::exact::Dyadic;
use crate::freeprob;
use crate::gambling::{self, LastResult, LessFrequent, Strategy, TableStrategy};
use crate::linalg::random_pure_state;
use crate::mltests::{registered_tests, verify_level_bound};
use crate::quantum::{self, bloch, DensityOperator, Ensemble};
use crate::report::Check;
use crate::rng::{stream_rng, substream_rng, Stream};
use crate::symdyn::{brudno_rate, exact_entropy_rate, sample_trajectory, ShiftSpec};

/// Knobs for the suite; the Bloch tolerance exists so a negative control can tighten it.
#[derive(Clone, Debug)]
pub struct AcceptanceOptions {
    pub seed: u64,
    pub bloch_tolerance: f64,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        AcceptanceOptions { seed: 0, bloch_tolerance: 1e-9 }
    }
}

pub struct Criterion {
    pub id: u8,
    pub module: &'static str,
    pub title: &'static str,
    pub budget: Duration,
    run: fn(&AcceptanceOptions) -> Result<Vec<Check>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub module: String,
    pub title: String,
    pub passed: bool,
    pub elapsed_ms: f64,
    pub budget_ms: f64,
    pub checks: Vec<Check>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {} {} ({:.1} ms of {:.0} ms)",
            self.id,
            self.module,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed_ms,
            self.budget_ms
        )?;
        for c in self.checks.iter().filter(|c| !c.passed) {
            write!(f, "\n    failed: {}", c.name)?;
            if let (Some(e), Some(a)) = (&c.expected, &c.actual) {
                write!(f, " (expected {e}, got {a})")?;
            }
        }
        Ok(())
    }
}

impl Criterion {
    pub fn run(&self, opts: &AcceptanceOptions) -> CriterionResult {
        let start = Instant::now();
        let outcome = (self.run)(opts);
        let elapsed = start.elapsed();
        let mut checks = match outcome {
            Ok(c) => c,
            Err(e) => vec![Check::with("criterion ran without error", false, "ok", e)],
        };
        let within = elapsed <= self.budget;
        checks.push(Check::with("within time budget", within, format!("≤ {:?}", self.budget), format!("{elapsed:?}")));
        CriterionResult {
            id: self.id,
            module: self.module.into(),
            title: self.title.into(),
            passed: checks.iter().all(|c| c.passed),
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
            budget_ms: self.budget.as_secs_f64() * 1e3,
            checks,
        }
    }
}

pub const MODULES: [&str; 7] = ["gambling", "coding", "mltests", "symdyn", "quantum", "casino", "freeprob"];

pub fn criteria() -> Vec<Criterion> {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    vec![
        Criterion { id: 1, module: "gambling", title: "gambling tables", budget: ms(1), run: c01_tables },
        Criterion { id: 2, module: "gambling", title: "place selection on Champernowne", budget: ms(1), run: c02_place_selection },
        Criterion { id: 3, module: "gambling", title: "excluded gambling strategies, exact", budget: s(5), run: c03_excluded },
        Criterion { id: 4, module: "coding", title: "noiseless coding", budget: s(2), run: c04_noiseless },
        Criterion { id: 5, module: "coding", title: "Kraft", budget: s(2), run: c05_kraft },
        Criterion { id: 6, module: "mltests", title: "level bounds", budget: s(60), run: c06_levels },
        Criterion { id: 7, module: "coding", title: "equipartition", budget: s(30), run: c07_aep },
        Criterion { id: 8, module: "symdyn", title: "Brudno rate", budget: s(10), run: c08_brudno },
        Criterion { id: 9, module: "quantum", title: "Bloch law and distance sandwich", budget: s(2), run: c09_bloch },
        Criterion { id: 10, module: "quantum", title: "Holevo bound", budget: s(60), run: c10_holevo },
        Criterion { id: 11, module: "quantum", title: "EPR moments and classical infeasibility", budget: s(5), run: c11_bell },
        Criterion { id: 12, module: "casino", title: "casino regression", budget: s(1), run: c12_casino },
        Criterion { id: 13, module: "casino", title: "excluded quantum gambling", budget: s(60), run: c13_quantum_gambling },
        Criterion { id: 14, module: "freeprob", title: "free probability identities", budget: s(30), run: c14_free },
        Criterion { id: 15, module: "freeprob", title: "Wigner semicircle", budget: s(60), run: c15_wigner },
        Criterion { id: 16, module: "coding", title: "Ω lower bound", budget: s(30), run: c16_omega },
    ]
}

/// Runs every criterion, or those of one module.
pub fn run_criteria(opts: &AcceptanceOptions, module: Option<&str>) -> Vec<CriterionResult> {
    criteria().iter().filter(|c| module.is_none_or(|m| c.module == m)).map(|c| c.run(opts)).collect()
}

fn count_check(name: &str, failures: usize) -> Check {
    Check::with(name, failures == 0, "0 violations", format!("{failures} violations"))
}

fn c01_tables(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let x = bs("1101001001");
    let last = gambling::payoff_sim(&LastResult, &x);
    let less = gambling::payoff_sim(&LessFrequent, &x);
    let last_rows: Vec<i64> = last.turns.iter().map(|t| t.payoff).collect();
    let less_rows: Vec<i64> = less.turns.iter().map(|t| t.payoff).collect();
    Ok(vec![
        Check::with("last-result payoff", last.payoff() == -3, -3, last.payoff()),
        Check::with("less-frequent payoff", less.payoff() == 3, 3, less.payoff()),
        Check::with("last-result rows", last_rows == [0, 1, 0, -1, -2, -1, -2, -3, -2, -3], "[0,1,0,-1,-2,-1,-2,-3,-2,-3]", format!("{last_rows:?}")),
        Check::with("less-frequent rows", less_rows == [0, -1, 0, -1, 0, 1, 1, 2, 2, 3], "[0,-1,0,-1,0,1,1,2,2,3]", format!("{less_rows:?}")),
    ])
}

fn c02_place_selection(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let ch = BitStream::champernowne();
    let a = gambling::ext(&LastResult, &ch, 10).to_string();
    let b = gambling::ext(&LessFrequent, &ch, 13).to_string();
    Ok(vec![
        Check::with("EXT last-result prefix", a.starts_with("0101"), "0101…", a),
        Check::with("EXT less-frequent prefix", b.starts_with("10011011"), "10011011…", b),
    ])
}

fn c03_excluded(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut strategies: Vec<Box<dyn Strategy>> = vec![Box::new(LastResult), Box::new(LessFrequent)];
    let mut rng = stream_rng(opts.seed, Stream::Strategies);
    for k in 0..20 {
        strategies.push(Box::new(TableStrategy::random(&format!("table-{k}"), 14, &mut rng)));
    }
    for s in &strategies {
        let e = gambling::expected_payoff_exhaustive(s.as_ref(), 14)?;
        checks.push(Check::with(format!("E payoff of {} at n = 14", s.name()), e.is_zero(), 0, e));
    }
    Ok(checks)
}

fn c04_noiseless(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut rng = stream_rng(opts.seed, Stream::Coding);
    let mut bad = 0;
    for _ in 0..1000 {
        let k = rng.random_range(1..=8);
        let masses: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let p = Distribution::normalized(&masses)?;
        let code = huffman_code(&p);
        let l = average_codeword_length(&code, &p)?;
        let h = shannon_entropy(&p);
        if !(h <= l + 1e-12 && l < h + 1.0) || !is_prefix_free(code.codewords()) {
            bad += 1;
        }
    }
    Ok(vec![count_check("H ≤ L < H + 1 over 1000 laws", bad)])
}

fn c05_kraft(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut rng = substream_rng(opts.seed, Stream::Coding, 1);
    let one = BigRational::from_integer(1.into());
    let (mut iff_bad, mut code_bad, mut feasible) = (0, 0, 0);
    for _ in 0..10_000 {
        let k = rng.random_range(1..=10);
        let lengths: Vec<u32> = (0..k).map(|_| rng.random_range(1..=8)).collect();
        let fits = kraft_sum(&lengths) <= one;
        match build_prefix_code(&lengths) {
            Ok(code) => {
                feasible += 1;
                let mut got = code.lengths();
                let mut want = lengths.clone();
                got.sort();
                want.sort();
                if !fits {
                    iff_bad += 1;
                }
                if !is_prefix_free(code.codewords()) || got != want {
                    code_bad += 1;
                }
            }
            Err(_) => {
                if fits {
                    iff_bad += 1;
                }
            }
        }
    }
    Ok(vec![
        count_check("success iff Kraft sum ≤ 1", iff_bad),
        count_check("codes prefix-free with requested lengths", code_bad),
        Check::with("both outcomes exercised", feasible > 0 && feasible < 10_000, "mixed", feasible),
    ])
}

fn c06_levels(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for t in registered_tests() {
        let res: Result<()> = (1..=14).try_for_each(|n| verify_level_bound(t.as_ref(), n));
        checks.push(match res {
            Ok(()) => Check::new(format!("{} certified for n ≤ 14", t.name()), true),
            Err(e) => Check::with(format!("{} certified for n ≤ 14", t.name()), false, "no violation", e),
        });
    }
    Ok(checks)
}

fn c07_aep(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let (n, eps, p1) = (20usize, 0.1, 0.3);
    let law = Distribution::from_f64(vec![1.0 - p1, p1])?;
    let rep = typical_set(&law, n, eps)?;
    // independent census over all 2^20 strings
    let h = shannon_entropy(&law);
    let (mut members, mut mass) = (0u64, 0.0);
    for v in 0u32..1 << n {
        let k = v.count_ones() as i32;
        let lp = k as f64 * p1.log2() + (n as i32 - k) as f64 * (1.0 - p1).log2();
        if (-lp / n as f64 - h).abs() <= eps {
            members += 1;
            mass += lp.exp2();
        }
    }
    let bound = (n as f64 * (h + eps)).exp2();
    Ok(vec![
        Check::with("member count matches enumeration", rep.members == members, members, rep.members),
        Check::close("mass matches enumeration", rep.mass, mass, 1e-12),
        Check::with("count ≤ 2^(n(H+ε))", (members as f64) <= bound && rep.bound_holds, format!("≤ {bound:.1}"), members),
    ])
}

fn c08_brudno(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for p in [0.1, 0.3, 0.5] {
        let shift = ShiftSpec::bernoulli(p)?;
        let x = sample_trajectory(&shift, 1 << 18, opts.seed)?;
        let r = brudno_rate(&x)?;
        let h = exact_entropy_rate(&shift);
        checks.push(Check::close(format!("Brudno rate, p = {p}"), r, h, 0.08));
    }
    Ok(checks)
}

fn random_ball<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0);
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

fn c09_bloch(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut rng = stream_rng(opts.seed, Stream::Quantum);
    let (mut max_err, mut lower_bad, mut upper_bad, mut worst_upper) = (0.0f64, 0, 0, 0.0f64);
    for _ in 0..10_000 {
        let (r1, r2) = (random_ball(&mut rng), random_ball(&mut rng));
        let (a, b) = (bloch(r1)?, bloch(r2)?);
        let d = quantum::trace_distance(&a, &b)?;
        let law = r1.iter().zip(&r2).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt() / 2.0;
        max_err = max_err.max((d - law).abs());
        let f = quantum::fidelity(&a, &b)?;
        if 1.0 - f > d + 1e-9 {
            lower_bad += 1;
        }
        let slack = (1.0 - f).max(0.0).sqrt() - d;
        if slack < -1e-9 {
            upper_bad += 1;
            worst_upper = worst_upper.min(slack);
        }
    }
    Ok(vec![
        Check::with("Bloch law max error", max_err <= opts.bloch_tolerance, format!("≤ {:e}", opts.bloch_tolerance), format!("{max_err:e}")),
        count_check("1 − F ≤ D", lower_bad),
        Check::with("D ≤ √(1 − F)", upper_bad == 0, "0 violations", format!("{upper_bad} violations, worst slack {worst_upper:.4}")),
    ])
}

fn c10_holevo(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut rng = substream_rng(opts.seed, Stream::Quantum, 10);
    let (mut above, mut worst) = (0, f64::INFINITY);
    for _ in 0..200 {
        let k = rng.random_range(2..=4);
        let masses: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
        let total: f64 = masses.iter().sum();
        let states = (0..k).map(|_| bloch(random_ball(&mut rng))).collect::<Result<Vec<_>>>()?;
        let e = Ensemble::new(masses.iter().map(|m| m / total).collect(), states)?;
        let a = quantum::accessible_information(&e, 128)?;
        worst = worst.min(a.chi - a.value);
        if a.value > a.chi + 1e-9 {
            above += 1;
        }
    }
    let mut orth_err = 0.0f64;
    for _ in 0..20 {
        let psi = random_pure_state(&mut rng, 2);
        let perp = vec![-psi[1].conj(), psi[0].conj()];
        let w = rng.random_range(0.05..0.95);
        let e = Ensemble::new(vec![w, 1.0 - w], vec![DensityOperator::pure(&psi)?, DensityOperator::pure(&perp)?])?;
        let a = quantum::accessible_information(&e, 128)?;
        orth_err = orth_err.max((a.chi - a.value).abs());
    }
    let gap_e = Ensemble::new(vec![0.5, 0.5], vec![bloch([0.0, 0.0, 1.0])?, bloch([1.0, 0.0, 0.0])?])?;
    let g = quantum::accessible_information(&gap_e, 128)?;
    Ok(vec![
        Check::with("I_acc ≤ χ on 200 ensembles", above == 0, "slack ≥ −1e-9", format!("min slack {worst:.3e}")),
        Check::with("I_acc = χ for orthogonal ensembles", orth_err <= 1e-3, "≤ 1e-3", format!("{orth_err:.3e}")),
        Check::with("gap for {|0⟩, |+⟩}", g.chi - g.value >= 0.1, "≥ 0.1", format!("{:.6}", g.chi - g.value)),
    ])
}

fn c11_bell(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let t = quantum::bell_moment_table();
    let mut err = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            let want = if (i < 3) == (j < 3) { (i == j) as i32 as f64 } else { -((i % 3 == j % 3) as i32 as f64) };
            err = err.max((t.second(i, j).unwrap_or(f64::NAN) - want).abs());
        }
    }
    let singlet = quantum::classical_model_infeasibility(&t)?;
    let control = quantum::classical_model_infeasibility(&quantum::perfectly_correlated_table())?;
    Ok(vec![
        Check::with("moment table entrywise", err <= 1e-10, "≤ 1e-10", format!("{err:e}")),
        Check::with(
            "singlet table infeasible",
            !singlet.feasible && singlet.verified,
            "infeasible",
            if singlet.feasible { "feasible (verified witness)" } else { "infeasible" },
        ),
        Check::with("classical control feasible", control.feasible && control.verified, "feasible", control.feasible),
    ])
}

fn c12_casino(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    Ok(casino::replay_paper_example()?.checks)
}

fn c13_quantum_gambling(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (kind, eps) in [(CasinoKind::Second, 0.25), (CasinoKind::Third, 10.0)] {
        let cfg = CasinoConfig::new(kind, eps, opts.seed)?.with_scale(10.0)?;
        for name in casino::BUILTIN_QSTRATEGIES {
            let Ok(s) = casino::builtin_qstrategy(name, kind) else { continue };
            let e = casino::expected_payoff_mc(&cfg, s.as_ref(), 10_000, 5)?;
            checks.push(Check::with(
                format!("{kind:?} casino, {name}"),
                e.z.abs() <= 4.0,
                "|z| ≤ 4",
                format!("mean {:.4} vs baseline {:.4}, z = {:.2}", e.mean, e.baseline_mean, e.z),
            ));
        }
    }
    Ok(checks)
}

fn c14_free(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let mut cat_bad = 0;
    for m in 0..=7u64 {
        if num_bigint::BigUint::from(freeprob::count_noncrossing_pair_partitions(2 * m as usize)?) != freeprob::catalan(m) {
            cat_bad += 1;
        }
    }
    let mut sc_err = 0.0f64;
    for m in 0..=7u32 {
        let exact = crate::exact::ratio_to_f64(&BigRational::from_integer(freeprob::semicircle_moment(2 * m as u64).into()));
        sc_err = sc_err.max((freeprob::semicircle_moment_numeric(2 * m) - exact).abs());
    }
    let abab = freeprob::fock_free_moments(2, 4, &[0, 1, 0, 1])?;
    let abba = freeprob::fock_free_moments(2, 4, &[0, 1, 1, 0])?;
    let mut clt_err = 0.0f64;
    for n in 1..=5 {
        let ms = freeprob::free_clt_moments(n, 8, 8)?;
        for (k, v) in ms.moments.iter().enumerate() {
            let want = crate::exact::ratio_to_f64(&BigRational::from_integer(freeprob::semicircle_moment(k as u64).into()));
            clt_err = clt_err.max((v - want).abs());
        }
    }
    Ok(vec![
        count_check("Catalan = non-crossing count to 2m = 14", cat_bad),
        Check::with("semicircle moments vs quadrature", sc_err <= 1e-8, "≤ 1e-8", format!("{sc_err:e}")),
        Check::close("E(abab)", abab, 0.0, 1e-12),
        Check::close("E(ab²a)", abba, 1.0, 1e-12),
        Check::with("free CLT moments to order 8", clt_err <= 1e-12, "≤ 1e-12", format!("{clt_err:e}")),
    ])
}

fn c15_wigner(opts: &AcceptanceOptions) -> Result<Vec<Check>> {
    let samples = freeprob::wigner_samples(freeprob::WignerEnsemble::Gue, 200, 50, opts.seed)?;
    let ks = freeprob::spectral_ks_to_semicircle(&samples)?;
    Ok(vec![Check::with("GUE KS distance", ks <= 0.05, "≤ 0.05", format!("{ks:.4}"))])
}

fn c16_omega(_: &AcceptanceOptions) -> Result<Vec<Check>> {
    let m = ToyChaitinMachine::demo();
    let steps = [10u64, 100, 1000, 10_000];
    let table: Vec<Vec<Dyadic>> = (1..=12).map(|l| steps.iter().map(|&t| omega_lower_bound(&m, l, t)).collect()).collect();
    let mut mono_bad = 0;
    let mut over = 0;
    for (li, row) in table.iter().enumerate() {
        for (ti, v) in row.iter().enumerate() {
            if ti > 0 && *v < row[ti - 1] {
                mono_bad += 1;
            }
            if li > 0 && *v < table[li - 1][ti] {
                mono_bad += 1;
            }
            if *v > Dyadic::one() {
                over += 1;
            }
        }
    }
    Ok(vec![
        count_check("monotone in length and steps", mono_bad),
        count_check("bounded by 1", over),
        Check::with("regression value at length 12, 10⁴ steps", table[11][3].to_string() == "651/2048", "651/2048", &table[11][3]),
    ])
}
