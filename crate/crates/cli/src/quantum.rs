use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use randlab_core::casino::{self, CasinoConfig, CasinoKind, MatrixDistance};
use randlab_core::quantum::{
    accessible_information, angle_distance, bell_moment_table, bloch, bloch_inverse, chsh_moment_table,
    classical_model_infeasibility, fidelity, frustrated_moment_table, holevo_chi, perfectly_correlated_table,
    schatten_decomposition, trace_distance, umegaki_relative_entropy, von_neumann_entropy, DensityOperator, Ensemble,
};
use randlab_core::report::{Check, Report};
use serde_json::json;

use crate::output::{value_name, Emitted, ReportArgs, Table};
use crate::{CliError, CliResult};

fn read(p: &Path) -> CliResult<String> {
    std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn state(p: &Option<PathBuf>, flag: &str) -> CliResult<DensityOperator> {
    let p = p.as_ref().ok_or_else(|| CliError::Usage(format!("this op needs --{flag}")))?;
    serde_json::from_str(&read(p)?).map_err(|e| CliError::Core(e.into()))
}

fn ensemble(p: &Option<PathBuf>) -> CliResult<Ensemble> {
    let p = p.as_ref().ok_or_else(|| CliError::Usage("this op needs --ensemble".into()))?;
    Ok(Ensemble::parse_json(&read(p)?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QOp {
    Fidelity,
    TraceDistance,
    Angle,
    Entropy,
    RelativeEntropy,
    Holevo,
    Accessible,
    Schatten,
    Bloch,
    Bell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BellTable {
    /// Singlet moments of the three spin observables per side.
    Singlet,
    /// Two settings per side at the angles that maximize the CHSH value.
    Chsh,
    /// Three pairwise anticorrelated ±1 variables.
    Frustrated,
    /// A classical table: all six variables equal to one fair coin.
    Classical,
}

#[derive(Args, Debug)]
pub struct QinfoArgs {
    #[arg(long, value_enum)]
    op: QOp,
    /// State JSON `{"dim", "entries"}`.
    #[arg(long, value_name = "PATH")]
    a: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    b: Option<PathBuf>,
    /// Ensemble JSON `{"weights", "states"}`.
    #[arg(long, value_name = "PATH")]
    ensemble: Option<PathBuf>,
    /// Bloch vector for `bloch`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r: Vec<f64>,
    /// Measurement directions searched by `accessible`.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = BellTable::Singlet)]
    table: BellTable,
    #[command(flatten)]
    pub report: ReportArgs,
}

pub fn qinfo(a: &QinfoArgs) -> CliResult<Emitted> {
    let op = format!("qinfo.{}", value_name(&a.op));
    let mut table = None;
    let (outputs, checks) = match a.op {
        QOp::Fidelity | QOp::TraceDistance | QOp::Angle | QOp::RelativeEntropy => {
            let (x, y) = (state(&a.a, "a")?, state(&a.b, "b")?);
            let v = match a.op {
                QOp::Fidelity => fidelity(&x, &y)?,
                QOp::TraceDistance => trace_distance(&x, &y)?,
                QOp::Angle => angle_distance(&x, &y)?,
                _ => umegaki_relative_entropy(&x, &y)?,
            };
            (json!({"value": v}), vec![])
        }
        QOp::Entropy => (json!({"entropy_bits": von_neumann_entropy(&state(&a.a, "a")?)}), vec![]),
        QOp::Holevo => {
            let e = ensemble(&a.ensemble)?;
            (json!({"chi": holevo_chi(&e), "dim": e.dim(), "size": e.weights().len()}), vec![])
        }
        QOp::Accessible => {
            let e = ensemble(&a.ensemble)?;
            let r = accessible_information(&e, a.grid)?;
            let check = Check::with("I_acc ≤ χ", r.value <= r.chi + 1e-9, format!("≤ {}", r.chi), r.value);
            (json!(r), vec![check])
        }
        QOp::Schatten => {
            let rho = state(&a.a, "a")?;
            let d = schatten_decomposition(&rho)?;
            (json!({"weights": d.weights(), "states": d.states()}), vec![])
        }
        QOp::Bloch => {
            if a.r.len() != 3 {
                return Err(CliError::Usage("bloch needs --r x,y,z".into()));
            }
            let rho = bloch([a.r[0], a.r[1], a.r[2]])?;
            let back = bloch_inverse(&rho)?;
            (json!({"state": rho, "bloch_vector": back, "entropy_bits": von_neumann_entropy(&rho)}), vec![])
        }
        QOp::Bell => {
            let t = match a.table {
                BellTable::Singlet => bell_moment_table(),
                BellTable::Chsh => chsh_moment_table(),
                BellTable::Frustrated => frustrated_moment_table(),
                BellTable::Classical => perfectly_correlated_table(),
            };
            let f = classical_model_infeasibility(&t)?;
            let mut csv = Table::new(std::iter::once("").chain(t.labels.iter().map(String::as_str)));
            for (i, row) in t.second.iter().enumerate() {
                csv.push(std::iter::once(t.labels[i].clone()).chain(row.iter().map(|v| v.map_or(String::new(), |x| x.to_string()))));
            }
            table = Some(csv);
            let check = Check::with("feasibility verdict verified in exact arithmetic", f.verified, true, f.verified);
            (json!({"table": t, "classical_model": f}), vec![check])
        }
    };
    let inputs = json!({"a": a.a, "b": a.b, "ensemble": a.ensemble});
    Ok(Emitted { report: Report::new(op, inputs, outputs).with_checks(checks), table })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Distance {
    SpectralRadius,
    OperatorNorm,
}

#[derive(Args, Debug)]
pub struct CasinoArgs {
    /// Casino kind: 1 pure states, 2 density operators, 3 matrices.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    kind: u8,
    #[arg(long, default_value_t = 10.0)]
    eps: f64,
    /// Entry range of kind-3 coins.
    #[arg(long, default_value_t = 10.0)]
    scale: f64,
    #[arg(long, default_value = "pauli-height")]
    strategy: String,
    #[arg(long, default_value_t = 5)]
    turns: usize,
    /// Number of games; above one the mean payoff is compared with the blind baseline.
    #[arg(long, default_value_t = 1)]
    games: usize,
    #[arg(long, value_enum, default_value_t = Distance::SpectralRadius)]
    distance: Distance,
    /// Replay the recorded five-turn episode and check its values.
    #[arg(long)]
    replay_paper: bool,
    #[command(flatten)]
    pub report: ReportArgs,
}

fn episode_table(g: &casino::GameRecord) -> Table {
    let mut t = Table::new(["turn", "bet", "distance", "result", "payoff"]);
    for r in &g.turns {
        let result = match r.won {
            Some(true) => "win",
            Some(false) => "loss",
            None => "-",
        };
        t.push([
            r.turn.to_string(),
            r.bet.as_ref().map_or("-".into(), |b| b.label()),
            r.distance.map_or("-".into(), |d| format!("{d:.4}")),
            result.to_string(),
            r.payoff.to_string(),
        ]);
    }
    t
}

pub fn casino(a: &CasinoArgs, seed: u64) -> CliResult<Emitted> {
    if a.replay_paper {
        let r = casino::replay_paper_example()?;
        let table = episode_table(&r.record);
        let report = Report::new("casino.replay", json!({"kind": 3, "eps": 10.0}), json!({"payoff": r.record.payoff(), "record": r.record}))
            .with_checks(r.checks);
        return Ok(Emitted { report, table: Some(table) });
    }
    let kind = CasinoKind::from_number(a.kind)?;
    let mut cfg = CasinoConfig::new(kind, a.eps, seed)?.with_scale(a.scale)?;
    cfg.distance = match a.distance {
        Distance::SpectralRadius => MatrixDistance::SpectralRadius,
        Distance::OperatorNorm => MatrixDistance::OperatorNorm,
    };
    let s = casino::builtin_qstrategy(&a.strategy, kind)?;
    let inputs = json!({"config": cfg, "strategy": a.strategy, "turns": a.turns, "games": a.games});
    if a.games > 1 {
        let e = casino::expected_payoff_mc(&cfg, s.as_ref(), a.games, a.turns)?;
        let check = Check::with("mean payoff within 4 stderr of the blind baseline", e.z.abs() <= 4.0, "|z| ≤ 4", e.z);
        let report = Report::new("casino.estimate", inputs, json!(e)).with_seed(seed).with_checks(vec![check]);
        return Ok(report.into());
    }
    let g = casino::play(&cfg, s.as_ref(), a.turns)?;
    let table = episode_table(&g);
    let check = Check::with("payoff equals wins minus losses", g.payoff() == g.wins as i64 - g.losses as i64, g.wins as i64 - g.losses as i64, g.payoff());
    let report = Report::new("casino.play", inputs, json!({"payoff": g.payoff(), "record": g})).with_seed(seed).with_checks(vec![check]);
    Ok(Emitted { report, table: Some(table) })
}
