use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{CompanionMatrix, Family};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    /// Matrix Market coordinate format, integer field, 1-based.
    MatrixMarket,
    /// `row,col,value` lines with a header, 1-based.
    CsvTriplets,
    /// `{"family", "k", "n", "rows"}` with dense integer rows.
    DenseJson,
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix-market" | "mtx" => Ok(MatrixFormat::MatrixMarket),
            "csv-triplets" | "csv" => Ok(MatrixFormat::CsvTriplets),
            "dense-json" | "json" => Ok(MatrixFormat::DenseJson),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl MatrixFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MatrixFormat::MatrixMarket => "mtx",
            MatrixFormat::CsvTriplets => "csv",
            MatrixFormat::DenseJson => "json",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DenseJson {
    family: Family,
    k: u32,
    n: usize,
    rows: Vec<Vec<i64>>,
}

pub fn export_matrix(m: &CompanionMatrix, format: MatrixFormat) -> Vec<u8> {
    let mut out = String::new();
    match format {
        MatrixFormat::MatrixMarket => {
            out.push_str("%%MatrixMarket matrix coordinate integer general\n");
            let _ = writeln!(out, "% family={} k={}", m.family(), m.k());
            let _ = writeln!(out, "{} {} {}", m.n(), m.n(), m.nnz());
            for ((i, j), v) in m.entries() {
                let _ = writeln!(out, "{} {} {v}", i + 1, j + 1);
            }
        }
        MatrixFormat::CsvTriplets => {
            out.push_str("row,col,value\n");
            for ((i, j), v) in m.entries() {
                let _ = writeln!(out, "{},{},{v}", i + 1, j + 1);
            }
        }
        MatrixFormat::DenseJson => {
            let doc = DenseJson {
                family: m.family(),
                k: m.k(),
                n: m.n(),
                rows: m.to_dense_i64(),
            };
            out = serde_json::to_string(&doc).expect("plain data serializes");
            out.push('\n');
        }
    }
    out.into_bytes()
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

fn to_i8(v: i64) -> Result<i8> {
    i8::try_from(v).map_err(|_| Error::Parse(format!("entry {v} is not in {{-1, 0, 1}}")))
}

/// Inverse of [`export_matrix`]. CSV triplets carry no metadata, so the family
/// is taken as `euclid` and `k` from the dimension.
pub fn import_matrix(bytes: &[u8], format: MatrixFormat) -> Result<CompanionMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    match format {
        MatrixFormat::MatrixMarket => {
            let mut lines = text.lines();
            let header = lines.next().unwrap_or_default();
            if !header.starts_with("%%MatrixMarket matrix coordinate") {
                return Err(Error::Parse(format!("unsupported header `{header}`")));
            }
            let mut family = Family::Euclid;
            let mut k = 0;
            let mut size = None;
            let mut entries = Vec::new();
            for line in lines {
                let line = line.trim();
                if let Some(comment) = line.strip_prefix('%') {
                    for kv in comment.split_whitespace() {
                        match kv.split_once('=') {
                            Some(("family", f)) => family = f.parse()?,
                            Some(("k", v)) => k = parse_num(v, "k")?,
                            _ => {}
                        }
                    }
                    continue;
                }
                if line.is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if size.is_none() {
                    if fields.len() != 3 {
                        return Err(Error::Parse(format!("bad size line `{line}`")));
                    }
                    size = Some((
                        parse_num::<usize>(fields[0], "row count")?,
                        parse_num::<usize>(fields[1], "column count")?,
                        parse_num::<usize>(fields[2], "entry count")?,
                    ));
                    continue;
                }
                if fields.len() != 3 {
                    return Err(Error::Parse(format!("bad entry line `{line}`")));
                }
                let i: usize = parse_num(fields[0], "row")?;
                let j: usize = parse_num(fields[1], "column")?;
                let v = to_i8(parse_num(fields[2], "value")?)?;
                if i == 0 || j == 0 {
                    return Err(Error::Parse("Matrix Market indices are 1-based".into()));
                }
                entries.push(((i - 1, j - 1), v));
            }
            let (rows, cols, nnz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
            if rows != cols {
                return Err(Error::Parse(format!("matrix is {rows}x{cols}, not square")));
            }
            if nnz != entries.len() {
                return Err(Error::Parse(format!(
                    "size line announces {nnz} entries, found {}",
                    entries.len()
                )));
            }
            CompanionMatrix::from_entries(rows, entries, family, k)
        }
        MatrixFormat::CsvTriplets => {
            let mut entries = Vec::new();
            let mut n = 0;
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                if line.starts_with("row") {
                    continue;
                }
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 3 {
                    return Err(Error::Parse(format!("bad triplet `{line}`")));
                }
                let i: usize = parse_num(fields[0], "row")?;
                let j: usize = parse_num(fields[1], "column")?;
                if i == 0 || j == 0 {
                    return Err(Error::Parse("triplet indices are 1-based".into()));
                }
                n = n.max(i).max(j);
                entries.push(((i - 1, j - 1), to_i8(parse_num(fields[2], "value")?)?));
            }
            let k = if n.is_power_of_two() { n.trailing_zeros() + 1 } else { 0 };
            CompanionMatrix::from_entries(n, entries, Family::Euclid, k)
        }
        MatrixFormat::DenseJson => {
            let doc: DenseJson = serde_json::from_str(text)?;
            if doc.rows.len() != doc.n || doc.rows.iter().any(|r| r.len() != doc.n) {
                return Err(Error::Parse(format!("rows do not form a {0}x{0} matrix", doc.n)));
            }
            let mut entries = Vec::new();
            for (i, row) in doc.rows.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v != 0 {
                        entries.push(((i, j), to_i8(v)?));
                    }
                }
            }
            CompanionMatrix::from_entries(doc.n, entries, doc.family, doc.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::companion::euclid_companion;

    #[test]
    fn one_by_one_matrix_market() {
        let text = String::from_utf8(export_matrix(&euclid_companion(1).unwrap(), MatrixFormat::MatrixMarket)).unwrap();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('%')).collect();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate integer general\n"));
        assert_eq!(lines, ["1 1 1", "1 1 -1"]);
    }

    #[test]
    fn e2_triplets() {
        let text = String::from_utf8(export_matrix(&euclid_companion(2).unwrap(), MatrixFormat::CsvTriplets)).unwrap();
        let lines: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(lines, ["1,2,1", "2,1,-1", "2,2,-1"]);
    }

    #[test]
    fn round_trips() {
        let m = euclid_companion(5).unwrap();
        for f in [MatrixFormat::MatrixMarket, MatrixFormat::CsvTriplets, MatrixFormat::DenseJson] {
            assert_eq!(import_matrix(&export_matrix(&m, f), f).unwrap(), m, "{f:?}");
        }
    }

    #[test]
    fn unknown_format_rejected() {
        assert!(matches!("harwell-boeing".parse::<MatrixFormat>(), Err(Error::UnknownFormat(_))));
    }

    #[test]
    fn malformed_input_rejected() {
        let f = MatrixFormat::MatrixMarket;
        assert!(import_matrix(b"hello", f).is_err());
        let wrong_count = b"%%MatrixMarket matrix coordinate integer general\n2 2 3\n1 2 1\n";
        assert!(import_matrix(wrong_count, f).is_err());
        let below = b"%%MatrixMarket matrix coordinate integer general\n3 3 1\n3 1 -1\n";
        assert!(matches!(import_matrix(below, f), Err(Error::NotHessenberg { .. })));
        assert!(import_matrix(b"1,1,2\n", MatrixFormat::CsvTriplets).is_err());
    }
}
