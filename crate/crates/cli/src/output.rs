//! Records and the three output formats.

use std::io::{self, Write};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

/// 17 significant digits, the shortest width that round-trips every double.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    /// An exact value, `p/q` in lowest terms or a (possibly huge) integer.
    Exact(String),
    Text(String),
    Floats(Vec<f64>),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Floats(v) => v.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(";"),
            Cell::Empty => String::new(),
        }
    }
}

fn float_number(x: f64) -> Option<serde_json::Number> {
    x.is_finite().then(|| format_float(x).parse().expect("valid JSON number"))
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(n) => s.serialize_i64(*n),
            // non-finite values have no JSON spelling; they become null
            Cell::Float(x) => float_number(*x).serialize(s),
            Cell::Exact(v) | Cell::Text(v) => s.serialize_str(v),
            Cell::Floats(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(&float_number(*x))?;
                }
                seq.end()
            }
            Cell::Empty => s.serialize_none(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

/// Key-value pairs kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fields(pub Vec<(String, Cell)>);

impl Fields {
    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl Serialize for Fields {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Fields,
    pub value: Cell,
    pub terms_used: usize,
    pub stop_reason: String,
    pub error_estimate: Cell,
    pub extra: Fields,
}

/// Where a table column takes its cells from.
#[derive(Debug, Clone)]
pub enum Source {
    Input(String),
    Value,
    TermsUsed,
    StopReason,
    ErrorEstimate,
    Extra(String),
}

#[derive(Debug, Clone)]
pub struct Column {
    pub header: String,
    pub source: Source,
}

pub fn col(header: impl Into<String>, source: Source) -> Column {
    Column {
        header: header.into(),
        source,
    }
}

/// The usual columns of a single series evaluation.
pub fn report_columns(inputs: &[&'static str], extras: &[&'static str]) -> Vec<Column> {
    let mut cols: Vec<Column> = inputs.iter().map(|k| col(*k, Source::Input(k.to_string()))).collect();
    cols.push(col("value", Source::Value));
    cols.push(col("terms_used", Source::TermsUsed));
    cols.push(col("stop_reason", Source::StopReason));
    cols.push(col("error_estimate", Source::ErrorEstimate));
    cols.extend(extras.iter().map(|k| col(*k, Source::Extra(k.to_string()))));
    cols
}

impl OutputRecord {
    fn cell(&self, source: &Source) -> Cell {
        match source {
            Source::Input(k) => self.inputs.get(k).cloned().unwrap_or(Cell::Empty),
            Source::Value => self.value.clone(),
            Source::TermsUsed => Cell::Int(self.terms_used as i64),
            Source::StopReason => Cell::Text(self.stop_reason.clone()),
            Source::ErrorEstimate => self.error_estimate.clone(),
            Source::Extra(k) => self.extra.get(k).cloned().unwrap_or(Cell::Empty),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn rows(records: &[OutputRecord], columns: &[Column]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| columns.iter().map(|c| r.cell(&c.source).render()).collect())
        .collect()
}

pub fn write_records(out: &mut dyn Write, format: Format, records: &[OutputRecord], columns: &[Column]) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(columns.iter().map(|c| c.header.as_str()))?;
            for row in rows(records, columns) {
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        Format::Table => {
            let body = rows(records, columns);
            let mut widths: Vec<usize> = columns.iter().map(|c| c.header.chars().count()).collect();
            for row in &body {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(columns.iter().map(|c| c.header.as_str()).collect()))?;
            for row in &body {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> OutputRecord {
        OutputRecord {
            command: "demo".into(),
            inputs: Fields::default().with("x", Cell::Exact("1/2".into())),
            value: Cell::Float(0.1),
            terms_used: 3,
            stop_reason: "tolerance".into(),
            error_estimate: Cell::Float(f64::INFINITY),
            extra: Fields::default().with("b", 1usize).with("a", "t"),
        }
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, f64::MAX] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(s.split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
        }
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn json_keeps_field_order() {
        let s = serde_json::to_string(&record()).unwrap();
        assert_eq!(
            s,
            r#"{"command":"demo","inputs":{"x":"1/2"},"value":1.0000000000000001e-1,"terms_used":3,"stop_reason":"tolerance","error_estimate":null,"extra":{"b":1,"a":"t"}}"#
        );
    }

    #[test]
    fn csv_and_table_layouts() {
        let cols = report_columns(&["x"], &["a", "missing"]);
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Csv, &[record()], &cols).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,value,terms_used,stop_reason,error_estimate,a,missing\n1/2,1.0000000000000001e-1,3,tolerance,inf,t,\n"
        );
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Table, &[record()], &cols[..2]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x    value\n1/2  1.0000000000000001e-1\n");
    }
}
