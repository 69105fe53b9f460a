//! External data formats: signal CSV, family CSV, and point-set text files.
//!
//! Signal CSV: header `t,re,im`, one row per grid node, nodes uniformly
//! spaced and increasing. Family CSV: header `t,re_1,im_1,re_2,im_2,...`.
//! Point sets: one real number per line; blank lines and `#` comments are
//! ignored.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::QupError;
use crate::grid::{make_grid, Grid, Signal};

/// Maximum relative deviation from uniform spacing tolerated when inferring
/// a grid from a column of abscissae.
const UNIFORMITY_REL_TOL: f64 = 1e-6;

fn infer_grid(ts: &[f64]) -> Result<Grid, QupError> {
    if ts.len() < 2 {
        return Err(QupError::DegenerateGrid(format!(
            "need at least 2 samples, got {}",
            ts.len()
        )));
    }
    let grid = make_grid(ts[0], ts[ts.len() - 1], ts.len())?;
    for (i, &t) in ts.iter().enumerate() {
        if (t - grid.node(i)).abs() > UNIFORMITY_REL_TOL * grid.spacing.max(1.0) {
            return Err(QupError::InvalidInput(format!(
                "abscissae are not uniformly spaced near row {i} (t = {t})"
            )));
        }
    }
    Ok(grid)
}

fn parse_f64(field: &str, row: usize, col: &str) -> Result<f64, QupError> {
    field.trim().parse::<f64>().map_err(|_| {
        QupError::InvalidInput(format!("row {row}: column `{col}` is not a number: {field:?}"))
    })
}

/// Read a single signal from `t,re,im` CSV.
pub fn read_signal_csv<R: Read>(reader: R) -> Result<Signal, QupError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut ts = Vec::new();
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| QupError::InvalidInput(format!("bad CSV record: {e}")))?;
        if record.len() < 3 {
            return Err(QupError::InvalidInput(format!(
                "row {i}: expected 3 columns t,re,im, got {}",
                record.len()
            )));
        }
        ts.push(parse_f64(&record[0], i, "t")?);
        values.push(Complex64::new(
            parse_f64(&record[1], i, "re")?,
            parse_f64(&record[2], i, "im")?,
        ));
    }
    let grid = infer_grid(&ts)?;
    Signal::new(grid, values)
}

/// Write a signal as `t,re,im` CSV.
pub fn write_signal_csv<W: Write>(w: W, signal: &Signal) -> Result<(), QupError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["t", "re", "im"])
        .map_err(|e| QupError::Io(std::io::Error::other(e)))?;
    for i in 0..signal.grid.n {
        let t = signal.grid.node(i);
        let v = signal.values[i];
        wtr.write_record([format!("{t:.17e}"), format!("{:.17e}", v.re), format!("{:.17e}", v.im)])
            .map_err(|e| QupError::Io(std::io::Error::other(e)))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Read a family of signals from `t,re_1,im_1,re_2,im_2,...` CSV.
/// All members share the inferred grid.
pub fn read_family_csv<R: Read>(reader: R) -> Result<Vec<Signal>, QupError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut ts: Vec<f64> = Vec::new();
    let mut columns: Vec<Vec<Complex64>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| QupError::InvalidInput(format!("bad CSV record: {e}")))?;
        if record.len() < 3 || record.len() % 2 == 0 {
            return Err(QupError::InvalidInput(format!(
                "row {i}: expected an odd column count t,re_1,im_1,..., got {}",
                record.len()
            )));
        }
        let members = (record.len() - 1) / 2;
        if columns.is_empty() {
            columns = vec![Vec::new(); members];
        } else if columns.len() != members {
            return Err(QupError::InvalidInput(format!(
                "row {i}: inconsistent member count ({} vs {})",
                members,
                columns.len()
            )));
        }
        ts.push(parse_f64(&record[0], i, "t")?);
        for (k, col) in columns.iter_mut().enumerate() {
            col.push(Complex64::new(
                parse_f64(&record[1 + 2 * k], i, "re")?,
                parse_f64(&record[2 + 2 * k], i, "im")?,
            ));
        }
    }
    let grid = infer_grid(&ts)?;
    columns.into_iter().map(|values| Signal::new(grid, values)).collect()
}

/// Write a family of signals sharing one grid as family CSV.
pub fn write_family_csv<W: Write>(w: W, members: &[Signal]) -> Result<(), QupError> {
    let grid = members
        .first()
        .map(|s| s.grid)
        .ok_or_else(|| QupError::InvalidInput("family is empty".into()))?;
    for m in members {
        if m.grid != grid {
            return Err(QupError::ShapeMismatch("family members live on different grids".into()));
        }
    }
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    for k in 1..=members.len() {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    wtr.write_record(&header)
        .map_err(|e| QupError::Io(std::io::Error::other(e)))?;
    for i in 0..grid.n {
        let mut row = vec![format!("{:.17e}", grid.node(i))];
        for m in members {
            row.push(format!("{:.17e}", m.values[i].re));
            row.push(format!("{:.17e}", m.values[i].im));
        }
        wtr.write_record(&row)
            .map_err(|e| QupError::Io(std::io::Error::other(e)))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Read a point set: one real per line, `#` starts a comment.
pub fn read_point_set<R: Read>(mut reader: R) -> Result<Vec<f64>, QupError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let value: f64 = body.parse().map_err(|_| {
            QupError::InvalidInput(format!("line {}: not a number: {body:?}", lineno + 1))
        })?;
        points.push(value);
    }
    Ok(points)
}

/// Convenience file-based wrappers.
pub fn read_signal_file(path: &Path) -> Result<Signal, QupError> {
    read_signal_csv(std::fs::File::open(path)?)
}

/// Read a family CSV from a file path.
pub fn read_family_file(path: &Path) -> Result<Vec<Signal>, QupError> {
    read_family_csv(std::fs::File::open(path)?)
}

/// Read a point-set file from a file path.
pub fn read_point_set_file(path: &Path) -> Result<Vec<f64>, QupError> {
    read_point_set(std::fs::File::open(path)?)
}
