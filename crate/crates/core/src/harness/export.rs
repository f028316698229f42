use serde::Serialize;

use super::{Residual, Series, Status, SuiteReport};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Invalid(format!("format must be json, csv or text, not `{s}`"))),
        }
    }
}

/// Text cells are cut at this many characters; JSON and CSV keep everything.
const CELL: usize = 48;

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    }
}

fn residual(r: &Residual) -> String {
    match r {
        Residual::Numeric(x) => format!("{x:.3e}"),
        Residual::Exact(s) => s.clone(),
    }
}

fn cut(s: &str) -> String {
    if s.chars().count() <= CELL {
        s.to_string()
    } else {
        s.chars().take(CELL - 1).chain(['…']).collect()
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

fn checks_csv(report: &SuiteReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "name", "status", "expected", "got", "residual", "reference"]).map_err(csv_err)?;
    for c in &report.checks {
        let row = [&report.suite, &c.name, status(c.status), &c.expected, &c.got, &residual(&c.residual), &c.reference];
        w.write_record(row).map_err(csv_err)?;
    }
    w.into_inner().map_err(csv_err)
}

/// One row per sample of a series.
pub fn export_series_csv(series: &Series) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&series.columns).map_err(csv_err)?;
    for row in &series.rows {
        w.write_record(row.iter().map(|x| format!("{x:e}"))).map_err(csv_err)?;
    }
    w.into_inner().map_err(csv_err)
}

fn text(report: &SuiteReport) -> String {
    let rows: Vec<[String; 5]> = report
        .checks
        .iter()
        .map(|c| [status(c.status).into(), c.name.clone(), cut(&c.expected), cut(&c.got), cut(&residual(&c.residual))])
        .collect();
    let header = ["status", "check", "expected", "got", "residual"].map(String::from);
    let mut width = [0usize; 5];
    for r in rows.iter().chain([&header]) {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |r: &[String; 5]| {
        let cells: Vec<String> = r.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        cells.join("  ").trim_end().to_string() + "\n"
    };
    let ring = &report.ring;
    let mut s = format!("suite {}  (d = {}, mc-scale {}, Q = {})\n", report.suite, ring.d, ring.mc_scale, ring.q_convention);
    s += &line(&header);
    for r in &rows {
        s += &line(r);
    }
    let count = |st| report.checks.iter().filter(|c| c.status == st).count();
    s += &format!("{} passed, {} failed, {} skipped\n", count(Status::Pass), count(Status::Fail), count(Status::Skipped));
    s
}

/// Serialize a report. JSON carries everything, including series and timing;
/// the text table omits timing so that it is reproducible byte for byte.
pub fn export_report(report: &SuiteReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(report)?),
        Format::Csv => checks_csv(report),
        Format::Text => Ok(text(report).into_bytes()),
    }
}
