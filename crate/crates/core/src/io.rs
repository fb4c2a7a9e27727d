//! Matrix text and CSV formats.
//!
//! Text: a header line `rows cols`, then one line per row of
//! whitespace-separated entries. Complex entries are written `re+imi`.

use std::fs;
use std::path::Path;

use crate::error::{Result, TnareError};
use crate::matrix::Mat;
use crate::scalar::{Scalar, C64};

/// Scalars with a textual representation.
pub trait TextEntry: Scalar {
    fn format_entry(self) -> String;
    fn parse_entry(s: &str) -> Result<Self>;
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| TnareError::Parse(format!("bad number `{s}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(TnareError::Parse(format!("non-finite entry `{s}`")))
    }
}

impl TextEntry for f64 {
    fn format_entry(self) -> String {
        format!("{self:e}")
    }
    fn parse_entry(s: &str) -> Result<Self> {
        parse_f64(s)
    }
}

impl TextEntry for C64 {
    fn format_entry(self) -> String {
        if self.im.is_sign_negative() {
            format!("{:e}{:e}i", self.re, self.im)
        } else {
            format!("{:e}+{:e}i", self.re, self.im)
        }
    }

    fn parse_entry(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(C64::new(parse_f64(s)?, 0.0));
        };
        let bytes = body.as_bytes();
        // Split at the last sign that is not a leading sign or an exponent sign.
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => Ok(C64::new(parse_f64(&body[..k])?, parse_f64(&body[k..])?)),
            None => Ok(C64::new(0.0, parse_f64(body)?)),
        }
    }
}

pub fn to_text<T: TextEntry>(m: &Mat<T>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| x.format_entry()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text<T: TextEntry>(s: &str) -> Result<Mat<T>> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| TnareError::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| TnareError::Parse(format!("bad header `{header}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(TnareError::Parse(format!("header must be `rows cols`, got `{header}`")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| TnareError::Parse(format!("missing row {r}")))?;
        let before = data.len();
        for tok in line.split_whitespace() {
            data.push(T::parse_entry(tok)?);
        }
        if data.len() - before != cols {
            return Err(TnareError::Parse(format!("row {r} has {} entries, expected {cols}", data.len() - before)));
        }
    }
    if lines.next().is_some() {
        return Err(TnareError::Parse("trailing data after last row".into()));
    }
    Mat::from_vec(rows, cols, data)
}

pub fn read_text<T: TextEntry>(path: impl AsRef<Path>) -> Result<Mat<T>> {
    from_text(&fs::read_to_string(path)?)
}

pub fn write_text<T: TextEntry>(path: impl AsRef<Path>, m: &Mat<T>) -> Result<()> {
    fs::write(path, to_text(m))?;
    Ok(())
}

fn csv_err(e: csv::Error) -> TnareError {
    TnareError::Parse(e.to_string())
}

/// Header-less CSV, one matrix row per record.
pub fn to_csv<T: TextEntry>(m: &Mat<T>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|x| x.format_entry())).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| TnareError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| TnareError::Parse(e.to_string()))
}

pub fn from_csv<T: TextEntry>(s: &str) -> Result<Mat<T>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(s.as_bytes());
    let mut data = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        if let Some(c) = cols {
            if rec.len() != c {
                return Err(TnareError::Parse(format!("csv row {rows} has {} fields, expected {c}", rec.len())));
            }
        } else {
            cols = Some(rec.len());
        }
        for f in rec.iter() {
            data.push(T::parse_entry(f)?);
        }
        rows += 1;
    }
    Mat::from_vec(rows, cols.unwrap_or(0), data)
}
