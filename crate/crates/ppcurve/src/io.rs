//! CSV ingestion and atomic file output.
//!
//! Paired data is a two-column `x,y` file with a header row; independent
//! samples are two single-column files, each with a header row. The first row
//! is always treated as the header. Malformed rows are hard errors carrying
//! their 1-based line number.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

fn parse_field(field: &str, line: u64) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Data {
        line,
        message: format!("cannot parse '{field}' as a number"),
    })
}

/// Reads paired two-column CSV data.
pub fn read_paired_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Data {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Data {
                line,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        x.push(parse_field(&record[0], line)?);
        y.push(parse_field(&record[1], line)?);
    }
    if x.is_empty() {
        return Err(Error::Data { line: 1, message: "no data rows".into() });
    }
    Ok((x, y))
}

/// Reads a single-column CSV sample.
pub fn read_column_csv(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Data {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 1 {
            return Err(Error::Data {
                line,
                message: format!("expected 1 column, found {}", record.len()),
            });
        }
        out.push(parse_field(&record[0], line)?);
    }
    if out.is_empty() {
        return Err(Error::Data { line: 1, message: "no data rows".into() });
    }
    Ok(out)
}

/// Writes `contents` to `path` via a temporary file and rename, so an
/// interrupted run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paired_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("good.csv");
        fs::write(&good, "x,y\n0.1,0.2\n0.3,0.4\n").unwrap();
        let (x, y) = read_paired_csv(&good).unwrap();
        assert_eq!(x, vec![0.1, 0.3]);
        assert_eq!(y, vec![0.2, 0.4]);

        let bad = dir.path().join("bad.csv");
        fs::write(&bad, "x,y\n0.1,0.2\noops,0.4\n").unwrap();
        match read_paired_csv(&bad) {
            Err(Error::Data { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a data error, got {other:?}"),
        }

        let ragged = dir.path().join("ragged.csv");
        fs::write(&ragged, "x,y\n0.1,0.2,0.9\n").unwrap();
        match read_paired_csv(&ragged) {
            Err(Error::Data { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a data error, got {other:?}"),
        }

        let empty = dir.path().join("empty.csv");
        fs::write(&empty, "x,y\n").unwrap();
        assert!(read_paired_csv(&empty).is_err());
    }

    #[test]
    fn single_column_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("col.csv");
        fs::write(&p, "x\n1\n2\n3\n").unwrap();
        assert_eq!(read_column_csv(&p).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, b"first").unwrap();
        write_atomic(&p, b"second").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"second");
        assert!(!p.with_extension("json.tmp").exists());
    }
}
