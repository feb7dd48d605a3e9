use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use randlab_core::report::Report;
use serde_json::Value;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Debug)]
pub struct ReportArgs {
    /// Output format of the report.
    #[arg(long, alias = "report", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long = "report-out", value_name = "PATH")]
    pub report_out: Option<PathBuf>,
    /// Omit the timestamp so replays compare byte for byte.
    #[arg(long)]
    pub canonical: bool,
}

/// A rectangular table rendered for `--format csv`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|v| v.to_string()).collect());
    }
}

pub struct Emitted {
    pub report: Report,
    pub table: Option<Table>,
}

impl From<Report> for Emitted {
    fn from(report: Report) -> Self {
        Emitted { report, table: None }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Table) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => out.push([prefix.to_string(), scalar(other)]),
    }
}

fn render_csv(e: &Emitted) -> Result<String, CliError> {
    let table = match &e.table {
        Some(t) => t.clone(),
        None => {
            let mut t = Table::new(["key", "value"]);
            flatten("", &e.report.outputs, &mut t);
            t
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).map_err(|err| CliError::Io(err.to_string()))?;
    for r in &table.rows {
        w.write_record(r).map_err(|err| CliError::Io(err.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|err| CliError::Io(err.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_text(r: &Report) -> String {
    let mut s = format!("{} (schema {})\n", r.op, r.schema_version);
    if let Some(seed) = r.seed {
        s += &format!("seed: {seed}\n");
    }
    if let Some(ts) = &r.timestamp {
        s += &format!("time: {ts}\n");
    }
    let mut t = Table::default();
    flatten("", &r.outputs, &mut t);
    for row in &t.rows {
        s += &format!("{}: {}\n", row[0], row[1]);
    }
    for c in &r.checks {
        s += &format!("[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
        if let (Some(e), Some(a)) = (&c.expected, &c.actual) {
            s += &format!(" (expected {e}, got {a})");
        }
        s.push('\n');
    }
    s
}

pub fn render(e: &Emitted, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => e.report.to_json() + "\n",
        Format::Csv => render_csv(e)?,
        Format::Text => render_text(&e.report),
    })
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |err: std::io::Error| CliError::Io(format!("{}: {err}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|err| io(err.error))?;
    Ok(())
}

pub fn emit(mut e: Emitted, args: &ReportArgs) -> Result<bool, CliError> {
    if !args.canonical {
        e.report.timestamp = OffsetDateTime::now_utc().format(&Rfc3339).ok();
    }
    let text = render(&e, args.format)?;
    match &args.report_out {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(e.report.passed())
}

/// The command-line spelling of an enum value.
pub fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map_or_else(String::new, |p| p.get_name().to_string())
}
