//! CSV and JSON serialization of the reports.
//!
//! Every floating-point number is rounded to 15 significant digits before it
//! is written, so a report read back equals the written report after the
//! same rounding. Files are replaced atomically.
//!
//! JSON files hold `{"report": <type>, "data": ...}` with `<type>` one of
//! `moments`, `angle-pair`, `survival`, `sums`, `measure`. CSV files hold one
//! table whose header identifies the type:
//!
//! | type | columns |
//! |------|---------|
//! | moments | the fields of `MomentReport`, one row per report |
//! | angle-pair | the fields of `AnglePairReport`, one row |
//! | survival | `kind,source,t,g`, one row per grid point |
//! | sums | `parameter,computed,predicted,residual`, one row per report |
//! | measure | `order,interval,nx,ny,pair_count,discrepancy,ix,iy,count,empirical,reference`, one row per bin |
//!
//! Absent optional values are empty CSV fields and JSON `null`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bcz::{BinSpec, EmpiricalMeasure};
use crate::distributions::{SurvivalCurve, SurvivalSource};
use crate::error::{Error, Result};
use crate::geom::StatisticKind;
use crate::moments::{AnglePairReport, MomentReport};
use crate::rational::RationalInterval;
use crate::sums::SumReport;

/// Significant digits kept for every written float.
pub const SIGNIFICANT_DIGITS: usize = 15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", content = "data", rename_all = "kebab-case")]
pub enum Report {
    Moments(Vec<MomentReport>),
    AnglePair(AnglePairReport),
    Survival(Vec<SurvivalCurve>),
    Sums(Vec<SumReport>),
    Measure(EmpiricalMeasure),
}

impl From<MomentReport> for Report {
    fn from(r: MomentReport) -> Self {
        Report::Moments(vec![r])
    }
}

impl From<AnglePairReport> for Report {
    fn from(r: AnglePairReport) -> Self {
        Report::AnglePair(r)
    }
}

impl From<SurvivalCurve> for Report {
    fn from(c: SurvivalCurve) -> Self {
        Report::Survival(vec![c])
    }
}

impl From<SumReport> for Report {
    fn from(r: SumReport) -> Self {
        Report::Sums(vec![r])
    }
}

impl From<EmpiricalMeasure> for Report {
    fn from(m: EmpiricalMeasure) -> Self {
        Report::Measure(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// Format implied by a `.csv` or `.json` extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(ReportFormat::Csv),
            "json" => Some(ReportFormat::Json),
            _ => None,
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Parse(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// `v` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .unwrap_or(v)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_significant).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn rounded<T: Serialize + DeserializeOwned>(t: &T) -> Result<T> {
    let mut v = serde_json::to_value(t)?;
    round_value(&mut v);
    Ok(serde_json::from_value(v)?)
}

/// `report` with every float rounded as it would be written.
pub fn round_report(report: &Report) -> Result<Report> {
    rounded(report)
}

#[derive(Serialize, Deserialize)]
struct SurvivalRow {
    kind: StatisticKind,
    source: SurvivalSource,
    t: f64,
    g: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureRow {
    order: u64,
    interval: RationalInterval,
    nx: usize,
    ny: usize,
    pair_count: u64,
    discrepancy: f64,
    ix: usize,
    iy: usize,
    count: u64,
    empirical: f64,
    reference: f64,
}

fn csv_bytes(report: &Report) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report {
        Report::Moments(rs) => rs.iter().try_for_each(|r| w.serialize(r))?,
        Report::AnglePair(r) => w.serialize(r)?,
        Report::Sums(rs) => rs.iter().try_for_each(|r| w.serialize(r))?,
        Report::Survival(curves) => {
            for c in curves {
                for (&t, &g) in c.t().iter().zip(c.g()) {
                    w.serialize(SurvivalRow {
                        kind: c.kind(),
                        source: c.source(),
                        t,
                        g,
                    })?;
                }
            }
        }
        Report::Measure(m) => {
            for iy in 0..m.bins.ny {
                for ix in 0..m.bins.nx {
                    let k = iy * m.bins.nx + ix;
                    w.serialize(MeasureRow {
                        order: m.order,
                        interval: m.interval,
                        nx: m.bins.nx,
                        ny: m.bins.ny,
                        pair_count: m.pair_count,
                        discrepancy: m.discrepancy,
                        ix,
                        iy,
                        count: m.counts[k],
                        empirical: m.empirical[k],
                        reference: m.reference[k],
                    })?;
                }
            }
        }
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Serializes `report` to the given format, in memory.
pub fn format_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>> {
    let report = round_report(report)?;
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&report)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => csv_bytes(&report),
    }
}

/// Writes `report` to `path`, replacing any existing file in one step.
pub fn write_report(report: &Report, format: ReportFormat, path: &Path) -> Result<()> {
    let bytes = format_report(report, format)?;
    write_atomic(path, &bytes)
}

pub fn read_report(path: &Path, format: ReportFormat) -> Result<Report> {
    let bytes = std::fs::read(path)?;
    parse_report(&bytes, format)
}

pub fn parse_report(bytes: &[u8], format: ReportFormat) -> Result<Report> {
    match format {
        ReportFormat::Json => Ok(serde_json::from_slice(bytes)?),
        ReportFormat::Csv => parse_csv(bytes),
    }
}

fn rows<T: DeserializeOwned>(r: &mut csv::Reader<&[u8]>) -> Result<Vec<T>> {
    Ok(r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

fn parse_csv(bytes: &[u8]) -> Result<Report> {
    let mut r = csv::Reader::from_reader(bytes);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let head: Vec<&str> = header.iter().take(4).map(String::as_str).collect();
    match head.as_slice() {
        ["kind", "order", "interval", "pair_count"] => Ok(Report::Moments(rows(&mut r)?)),
        ["order", "interval", "pair_count", "angle_sum"] => {
            let mut all: Vec<AnglePairReport> = rows(&mut r)?;
            if all.len() != 1 {
                return Err(Error::Parse(format!("expected one angle-pair row, found {}", all.len())));
            }
            Ok(Report::AnglePair(all.remove(0)))
        }
        ["parameter", "computed", "predicted", "residual"] => Ok(Report::Sums(rows(&mut r)?)),
        ["kind", "source", "t", "g"] => {
            let all: Vec<SurvivalRow> = rows(&mut r)?;
            let mut curves = Vec::new();
            let mut start = 0;
            for i in 1..=all.len() {
                let split = i == all.len()
                    || all[i].kind != all[start].kind
                    || all[i].source != all[start].source;
                if split {
                    let part = &all[start..i];
                    curves.push(SurvivalCurve::new(
                        part[0].kind,
                        part[0].source,
                        part.iter().map(|p| p.t).collect(),
                        part.iter().map(|p| p.g).collect(),
                    )?);
                    start = i;
                }
            }
            Ok(Report::Survival(curves))
        }
        ["order", "interval", "nx", "ny"] => {
            let all: Vec<MeasureRow> = rows(&mut r)?;
            let first = all.first().ok_or_else(|| Error::Parse("measure table is empty".into()))?;
            let bins = BinSpec::new(first.nx, first.ny)?;
            if all.len() != bins.len() {
                return Err(Error::Parse(format!(
                    "{} rows for a {}x{} histogram",
                    all.len(),
                    bins.nx,
                    bins.ny
                )));
            }
            let mut m = EmpiricalMeasure {
                order: first.order,
                interval: first.interval,
                bins,
                pair_count: first.pair_count,
                counts: vec![0; bins.len()],
                empirical: vec![0.0; bins.len()],
                reference: vec![0.0; bins.len()],
                discrepancy: first.discrepancy,
            };
            for row in &all {
                if row.ix >= bins.nx || row.iy >= bins.ny {
                    return Err(Error::Parse(format!("bin ({}, {}) out of range", row.ix, row.iy)));
                }
                let k = row.iy * bins.nx + row.ix;
                m.counts[k] = row.count;
                m.empirical[k] = row.empirical;
                m.reference[k] = row.reference;
            }
            Ok(Report::Measure(m))
        }
        _ => Err(Error::Parse(format!("unrecognized CSV header `{}`", header.join(",")))),
    }
}
