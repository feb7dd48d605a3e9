use clap::{Args, ValueEnum};
use randlab_core::exact::{ratio_string, ratio_to_f64};
use randlab_core::freeprob::{
    catalan, count_noncrossing_pair_partitions, count_pair_partitions, fock_free_moments, free_clt_moments,
    free_walk_return, gaussian_moment, gue_sample, hermitian_spectrum, mixed_moment_abab, normalized_trace_square,
    parse_pattern, semicircle_moment, semicircle_moment_numeric, spectral_ks_to_semicircle, wigner_samples,
    zd_walk_return, WignerEnsemble,
};
use randlab_core::report::{Check, Report};
use serde_json::json;

use crate::output::{value_name, Emitted, ReportArgs, Table};
use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FreeOp {
    /// Pooled spectra of Wigner matrices against the semicircle.
    Wigner,
    /// Gaussian and semicircle moments with pair-partition counts.
    Moments,
    /// Return probabilities of the walks on Z^d and on the free group.
    Walk,
    /// Vacuum expectation of a word in free semicircular fields.
    Fock,
    /// Moments of a normalized sum of free semicirculars.
    Clt,
    /// Mixed moment tr(ABAB) of two independent GUE matrices.
    Abab,
}

#[derive(Args, Debug)]
pub struct FreeprobArgs {
    #[arg(long, value_enum)]
    op: FreeOp,
    #[arg(long, default_value = "gue")]
    ensemble: String,
    /// Matrix size.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    draws: usize,
    /// Highest moment order.
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// Lattice dimension or number of free generators.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Walk length.
    #[arg(long, default_value_t = 10)]
    t: usize,
    /// Word such as `abab` or `ab²a`.
    #[arg(long, default_value = "abab")]
    word: String,
    /// Summand count for `clt`.
    #[arg(long, default_value_t = 8)]
    summands: usize,
    /// Fock-space truncation depth.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[command(flatten)]
    pub report: ReportArgs,
}

pub fn freeprob(a: &FreeprobArgs, seed: u64) -> CliResult<Emitted> {
    let op = format!("freeprob.{}", value_name(&a.op));
    let mut table = None;
    let mut seeded = false;
    let (inputs, outputs, checks) = match a.op {
        FreeOp::Wigner => {
            let ens: WignerEnsemble = a.ensemble.parse()?;
            seeded = true;
            let samples = wigner_samples(ens, a.n, a.draws, seed)?;
            let ks = spectral_ks_to_semicircle(&samples)?;
            let m2 = samples.iter().map(normalized_trace_square).sum::<f64>() / samples.len() as f64;
            let mut spectrum = Vec::new();
            for s in &samples {
                spectrum.extend(hermitian_spectrum(s)?);
            }
            let (lo, hi) = spectrum.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
            let check = Check::with("KS distance to the semicircle", ks <= 0.05, "≤ 0.05", ks);
            (json!({"ensemble": ens, "n": a.n, "draws": a.draws}), json!({"ks": ks, "mean_second_moment": m2, "min_eigenvalue": lo, "max_eigenvalue": hi}), vec![check])
        }
        FreeOp::Moments => {
            let mut t = Table::new(["k", "gaussian", "pairings", "semicircle", "noncrossing", "semicircle_numeric"]);
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for k in 0..=a.order {
                let g = gaussian_moment(k as u64);
                let s = semicircle_moment(k as u64);
                let num = semicircle_moment_numeric(k as u32);
                worst = worst.max((num - s.to_string().parse::<f64>().unwrap_or(f64::NAN)).abs());
                let (pairs, nc) = if k % 2 == 0 && k <= 14 {
                    (count_pair_partitions(k)?.to_string(), count_noncrossing_pair_partitions(k)?.to_string())
                } else {
                    ("-".into(), "-".into())
                };
                t.push([k.to_string(), g.to_string(), pairs.clone(), s.to_string(), nc.clone(), num.to_string()]);
                rows.push(json!({"k": k, "gaussian": g.to_string(), "semicircle": s.to_string(), "catalan": if k % 2 == 0 { Some(catalan(k as u64 / 2).to_string()) } else { None }, "pairings": pairs, "noncrossing": nc, "semicircle_numeric": num}));
            }
            table = Some(t);
            (json!({"order": a.order}), json!({"rows": rows}), vec![Check::with("numeric semicircle moments", worst <= 1e-8, "≤ 1e-8", worst)])
        }
        FreeOp::Walk => {
            let free = free_walk_return(a.dim, a.t)?;
            let lattice = zd_walk_return(a.dim, a.t).ok();
            (
                json!({"dim": a.dim, "t": a.t}),
                json!({
                    "free_group": {"exact": ratio_string(&free), "value": ratio_to_f64(&free)},
                    "lattice": lattice.as_ref().map(|r| json!({"exact": ratio_string(r), "value": ratio_to_f64(r)})),
                }),
                vec![],
            )
        }
        FreeOp::Fock => {
            let word = parse_pattern(&a.word)?;
            let letters = word.iter().max().map_or(1, |m| m + 1);
            let v = fock_free_moments(letters, a.depth.max(word.len()), &word)?;
            (json!({"word": a.word, "depth": a.depth}), json!({"value": v}), vec![])
        }
        FreeOp::Clt => {
            let ms = free_clt_moments(a.summands, a.order, a.depth.max(a.order))?;
            let worst = ms
                .moments
                .iter()
                .enumerate()
                .map(|(k, v)| (v - semicircle_moment(k as u64).to_string().parse::<f64>().unwrap_or(f64::NAN)).abs())
                .fold(0.0, f64::max);
            (json!({"summands": a.summands, "order": a.order}), json!(ms), vec![Check::with("moments equal the semicircle's", worst <= 1e-12, "≤ 1e-12", worst)])
        }
        FreeOp::Abab => {
            seeded = true;
            let (x, y) = (gue_sample(a.n, seed, 0)?, gue_sample(a.n, seed, 1)?);
            let m = mixed_moment_abab(&x, &y);
            (json!({"n": a.n}), json!({"abab": m}), vec![Check::with("close to the free value 0", m.abs() <= 0.1, "|·| ≤ 0.1", m)])
        }
    };
    let mut report = Report::new(op, inputs, outputs).with_checks(checks);
    if seeded {
        report = report.with_seed(seed);
    }
    Ok(Emitted { report, table })
}
