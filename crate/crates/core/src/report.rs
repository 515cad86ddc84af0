//! Row schemas and CSV / JSON-lines writers and readers.
//!
//! JSON lines use the same field names and string renderings as the CSV
//! columns, so a row read back from either format compares equal.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::liminf::LiminfPoint;
use crate::bounds::{BoundReport, ClassicalCheckpoint, Comparison};
use crate::error::{Error, Result};
use crate::numeric::{EvalValue, VerdictState};
use crate::recurrence::{RecurrenceRun, RecurrenceStatus};
use crate::xi::{TwinCandidate, XiRecord};

/// A float rendered with 17 significant digits: positional for
/// `1e-6 <= |x| < 1e17`, scientific otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-6..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        format!("{:.16e}", x)
    }
}

impl fmt::Display for Sig17 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sig17(self.0))
    }
}

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_sig17(self.0))
    }
}

impl<'de> Deserialize<'de> for Sig17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<f64>()
            .map(Sig17)
            .map_err(|_| D::Error::custom(format!("invalid number `{text}`")))
    }
}

/// Exact values as `num/den`, floats as [`Sig17`].
pub fn format_value(v: &EvalValue) -> String {
    match v {
        EvalValue::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
        EvalValue::Float { value, .. } => format_sig17(*value),
    }
}

/// Inverse of [`format_value`]; floats come back with no error bound.
pub fn parse_value(text: &str) -> Result<EvalValue> {
    let bad = || Error::Number(text.to_string());
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(EvalValue::Exact(BigRational::new(num, den)));
    }
    let value = text.parse::<f64>().map_err(|_| bad())?;
    Ok(EvalValue::Float { value, rel_err: 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRow {
    pub n: u64,
    pub p_n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiRow {
    pub n: u64,
    pub p_n: u64,
    pub p_next: u64,
    pub g: u64,
    #[serde(rename = "Q")]
    pub bound: Sig17,
    pub verdict: VerdictState,
    pub ratio_verdict: VerdictState,
    pub exact: bool,
    pub margin: Sig17,
}

impl From<&XiRecord> for XiRow {
    fn from(r: &XiRecord) -> Self {
        Self {
            n: r.n,
            p_n: r.p_n,
            p_next: r.p_next,
            g: r.g,
            bound: Sig17(r.bound.to_f64()),
            verdict: r.verdict.state,
            ratio_verdict: r.ratio_verdict.state,
            exact: r.verdict.exact,
            margin: Sig17(r.verdict.margin),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: u64,
    pub g: u64,
    pub rhs: Sig17,
    pub verdict: VerdictState,
}

impl From<&BoundReport> for BoundRow {
    fn from(r: &BoundReport) -> Self {
        Self {
            n: r.n,
            g: r.lhs,
            rhs: Sig17(r.rhs.to_f64()),
            verdict: r.verdict.state,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u64,
    pub sharp_rhs: Sig17,
    pub kourbatov_rhs: Sig17,
    pub sharp_smaller: VerdictState,
}

impl From<&Comparison> for ComparisonRow {
    fn from(c: &Comparison) -> Self {
        Self {
            n: c.n,
            sharp_rhs: Sig17(c.sharp_rhs.to_f64()),
            kourbatov_rhs: Sig17(c.kourbatov_rhs.to_f64()),
            sharp_smaller: c.verdict.state,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRow {
    pub n: u64,
    pub p_n: u64,
    pub pnt_ratio: Sig17,
    pub nth_root: Sig17,
}

impl From<&ClassicalCheckpoint> for CheckpointRow {
    fn from(c: &ClassicalCheckpoint) -> Self {
        Self {
            n: c.n,
            p_n: c.p_n,
            pnt_ratio: Sig17(c.pnt_ratio),
            nth_root: Sig17(c.nth_root),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiminfRow {
    pub n: u64,
    pub metric: String,
    pub value: Option<Sig17>,
    pub running_min: Option<Sig17>,
    pub argmin: Option<u64>,
}

impl From<&LiminfPoint> for LiminfRow {
    fn from(p: &LiminfPoint) -> Self {
        Self {
            n: p.n,
            metric: p.metric.clone(),
            value: p.value.map(Sig17),
            running_min: p.running_min.map(Sig17),
            argmin: p.argmin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRow {
    pub n: u64,
    pub q_n: String,
    /// Empty where q_{n+1} is not available.
    #[serde(rename = "Q_n")]
    pub bound: String,
    pub status: String,
}

/// One row per positive q_n, plus a final row for a non-positive value.
pub fn recurrence_rows(run: &RecurrenceRun) -> Vec<RecurrenceRow> {
    let mut rows: Vec<RecurrenceRow> = run
        .values
        .iter()
        .enumerate()
        .map(|(i, q)| RecurrenceRow {
            n: i as u64 + 1,
            q_n: format_value(q),
            bound: run.q_trace.get(i).map(format_value).unwrap_or_default(),
            status: "positive".to_string(),
        })
        .collect();
    if let (RecurrenceStatus::PositivityFailed(n), Some(v)) = (run.status, &run.failing_value) {
        rows.push(RecurrenceRow {
            n,
            q_n: format_value(v),
            bound: String::new(),
            status: "positivity_failed".to_string(),
        });
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinRow {
    pub n: u64,
    pub p_n: u64,
    pub p_next: u64,
    pub g: u64,
}

impl From<&TwinCandidate> for TwinRow {
    fn from(c: &TwinCandidate) -> Self {
        Self {
            n: c.n,
            p_n: c.p_n,
            p_next: c.p_next,
            g: c.g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub trial: u64,
    /// Empty when nothing was found in range.
    pub n_prime: Option<u64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueRow {
    pub n: u64,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::Config(format!("unknown format `{other}` (expected csv or jsonl)"))),
        }
    }
}

enum Sink<W: Write> {
    Csv(Box<csv::Writer<W>>),
    Jsonl(BufWriter<W>),
}

/// Writes rows of one schema in either format.
pub struct RecordWriter<W: Write> {
    sink: Sink<W>,
    rows: u64,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(writer: W, format: Format) -> Self {
        let sink = match format {
            Format::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(writer))),
            Format::Jsonl => Sink::Jsonl(BufWriter::new(writer)),
        };
        Self { sink, rows: 0 }
    }

    pub fn write<T: Serialize>(&mut self, row: &T) -> Result<()> {
        match &mut self.sink {
            Sink::Csv(w) => w.serialize(row)?,
            Sink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, row)?;
                w.write_all(b"\n")?;
            }
        }
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn finish(self) -> Result<()> {
        match self.sink {
            Sink::Csv(mut w) => w.flush()?,
            Sink::Jsonl(mut w) => w.flush()?,
        }
        Ok(())
    }
}

impl RecordWriter<File> {
    pub fn create(path: impl AsRef<Path>, format: Format) -> Result<Self> {
        Ok(Self::new(File::create(path)?, format))
    }
}

pub fn read_records<T: DeserializeOwned, R: Read>(reader: R, format: Format) -> Result<Vec<T>> {
    match format {
        Format::Csv => csv::Reader::from_reader(reader)
            .into_deserialize()
            .map(|r| r.map_err(Error::from))
            .collect(),
        Format::Jsonl => BufReader::new(reader)
            .lines()
            .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
            .map(|line| Ok(serde_json::from_str(&line?)?))
            .collect(),
    }
}

pub fn read_records_path<T: DeserializeOwned>(path: impl AsRef<Path>, format: Format) -> Result<Vec<T>> {
    read_records(File::open(path)?, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_rendering() {
        assert_eq!(format_sig17(4.4), "4.4000000000000004");
        assert_eq!(format_sig17(0.0), "0");
        assert_eq!(format_sig17(-0.5), "-0.50000000000000000");
        assert_eq!(format_sig17(1e20), "1.0000000000000000e20");
        assert_eq!(format_sig17(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(format_sig17(123456.0), "123456.00000000000");
        for x in [4.4, -3.25e-6, 7.0e300, 1.0 / 3.0, 2f64.sqrt() * 1e16] {
            assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn values_round_trip() {
        let r = EvalValue::Exact(BigRational::new((-1).into(), 15.into()));
        assert_eq!(format_value(&r), "-1/15");
        assert_eq!(parse_value("-1/15").unwrap(), r);
        assert_eq!(parse_value("2.5").unwrap().to_f64(), 2.5);
        assert!(parse_value("1/0").is_err());
        assert!(parse_value("x").is_err());
    }

    fn rows() -> Vec<LiminfRow> {
        vec![
            LiminfRow {
                n: 1,
                metric: "gap_over_log".into(),
                value: Some(Sig17(std::f64::consts::LOG2_E)),
                running_min: Some(Sig17(std::f64::consts::LOG2_E)),
                argmin: Some(1),
            },
            LiminfRow {
                n: 2,
                metric: "xi_n_u".into(),
                value: None,
                running_min: None,
                argmin: None,
            },
        ]
    }

    #[test]
    fn both_formats_round_trip() {
        for format in [Format::Csv, Format::Jsonl] {
            let mut buf = Vec::new();
            let mut w = RecordWriter::new(&mut buf, format);
            for r in rows() {
                w.write(&r).unwrap();
            }
            assert_eq!(w.rows(), 2);
            w.finish().unwrap();
            let back: Vec<LiminfRow> = read_records(&buf[..], format).unwrap();
            assert_eq!(back, rows());
        }
    }

    #[test]
    fn csv_header_matches_schema() {
        let mut buf = Vec::new();
        let mut w = RecordWriter::new(&mut buf, Format::Csv);
        w.write(&BoundRow {
            n: 4,
            g: 4,
            rhs: Sig17(3.5),
            verdict: VerdictState::Fails,
        })
        .unwrap();
        w.finish().unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,g,rhs,verdict\n4,4,3.5000000000000000,fails\n");
    }

    #[test]
    fn format_names() {
        assert_eq!("jsonl".parse::<Format>().unwrap(), Format::Jsonl);
        assert!("xml".parse::<Format>().is_err());
    }
}
