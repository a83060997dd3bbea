//! File ingestion and report persistence.
//!
//! The CSV dialect here is deliberately tiny: comma-separated fields, one
//! header row, no quoting, '.' as the decimal separator. Parsing by hand
//! keeps error messages pinned to exact 1-based line numbers, which the
//! richer CSV crates trade away behind record iterators.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::data::{DataError, Dataset, UnitTable};
use crate::dimension::UnitVector;
use crate::report::SearchReport;
use crate::rng::SplitMix64;
use crate::Real;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// a field failed to parse; lines are 1-based, header included
    #[error("{path} line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    /// a row has the wrong number of fields
    #[error("{path} line {line}: {message}")]
    Shape { path: String, line: usize, message: String },
    /// a numeric field parsed but is not finite
    #[error("{path} line {line}: {message}")]
    Value { path: String, line: usize, message: String },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("report {path}: {message}")]
    Report { path: String, message: String },
}

/// Loads a dataset from a points CSV whose header names the variables, last
/// column the target, plus an optional units CSV. Without a units file the
/// dataset carries no unit table and dimensional analysis stays off.
pub fn load_dataset(points_path: &Path, units_path: Option<&Path>) -> Result<Dataset<f64>, IoError> {
    let text = fs::read_to_string(points_path)?;
    let (names, points, targets) = parse_points_csv(&text, &points_path.display().to_string())?;
    let mut data = Dataset::new(names, points, targets)?;
    if let Some(path) = units_path {
        let text = fs::read_to_string(path)?;
        let table = parse_units_csv(&text, &data.names, &path.display().to_string())?;
        data = data.with_units(table)?;
    }
    Ok(data)
}

/// Parses the points CSV: header row of variable names with the target
/// last, then one numeric row per point.
pub fn parse_points_csv(
    text: &str,
    path: &str,
) -> Result<(Vec<String>, Vec<Vec<f64>>, Vec<f64>), IoError> {
    let mut lines = numbered_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| shape(path, 1, "empty file, expected a header row"))?;
    let columns: Vec<String> = split_fields(header);
    if columns.len() < 2 {
        return Err(shape(path, 1, "header needs at least one variable and a target column"));
    }
    let names: Vec<String> = columns[..columns.len() - 1].to_vec();
    let mut points = Vec::new();
    let mut targets = Vec::new();
    for (line, row) in lines {
        let fields = split_fields(row);
        if fields.len() != columns.len() {
            return Err(shape(
                path,
                line,
                &format!("row has {} fields, expected {}", fields.len(), columns.len()),
            ));
        }
        let mut values = Vec::with_capacity(fields.len());
        for field in &fields {
            let v: f64 = field.parse().map_err(|_| {
                parse_err(path, line, &format!("not a number: {field:?}"))
            })?;
            if !v.is_finite() {
                return Err(value_err(path, line, &format!("non-finite value: {field:?}")));
            }
            values.push(v);
        }
        let y = values.pop().expect("row has at least two fields");
        points.push(values);
        targets.push(y);
    }
    Ok((names, points, targets))
}

/// Parses the units CSV (`name,dim1,dim2,...`): one row per dataset
/// variable plus a `__target__` row, exponents as exact decimal rationals.
pub fn parse_units_csv(text: &str, var_names: &[String], path: &str) -> Result<UnitTable, IoError> {
    let mut lines = numbered_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| shape(path, 1, "empty file, expected a header row"))?;
    let columns = split_fields(header);
    if columns.len() < 2 || columns[0] != "name" {
        return Err(shape(path, 1, "header must be name,dim1,dim2,..."));
    }
    let dim_names: Vec<String> = columns[1..].to_vec();
    let mut rows: Vec<(usize, String, UnitVector)> = Vec::new();
    for (line, row) in lines {
        let fields = split_fields(row);
        if fields.len() != columns.len() {
            return Err(shape(
                path,
                line,
                &format!("row has {} fields, expected {}", fields.len(), columns.len()),
            ));
        }
        let mut exps = Vec::with_capacity(dim_names.len());
        for field in &fields[1..] {
            let r = UnitVector::parse_decimal(field)
                .map_err(|m| parse_err(path, line, &m))?;
            exps.push(r);
        }
        rows.push((line, fields[0].clone(), UnitVector(exps)));
    }
    let mut target_units = None;
    let mut var_units: Vec<Option<UnitVector>> = vec![None; var_names.len()];
    for (line, name, units) in rows {
        if name == "__target__" {
            if target_units.replace(units).is_some() {
                return Err(parse_err(path, line, "duplicate __target__ row"));
            }
            continue;
        }
        match var_names.iter().position(|n| *n == name) {
            Some(i) => {
                if var_units[i].replace(units).is_some() {
                    return Err(parse_err(path, line, &format!("duplicate row for {name:?}")));
                }
            }
            None => {
                return Err(parse_err(path, line, &format!("unknown variable {name:?}")));
            }
        }
    }
    let target_units =
        target_units.ok_or_else(|| shape(path, 1, "missing __target__ row"))?;
    let mut units = Vec::with_capacity(var_names.len());
    for (i, u) in var_units.into_iter().enumerate() {
        match u {
            Some(u) => units.push(u),
            None => {
                return Err(shape(path, 1, &format!("no units row for variable {:?}", var_names[i])));
            }
        }
    }
    Ok(UnitTable { dim_names, var_units: units, target_units })
}

/// Returns a copy with each target scaled by `1 + level * g`, `g` standard
/// normal from the seeded generator. Level zero returns a bit-identical
/// clone. Inputs and units are never touched.
pub fn inject_noise<S: Real>(data: &Dataset<S>, level: S, seed: u64) -> Dataset<S> {
    let mut out = data.clone();
    if level == S::zero() {
        return out;
    }
    let mut rng = SplitMix64::new(seed);
    for y in &mut out.targets {
        let g = S::of(rng.standard_normal());
        *y = *y * (S::one() + level * g);
    }
    out
}

pub fn save_report<S: Real>(report: &SearchReport<S>, path: &Path) -> Result<(), IoError> {
    fs::write(path, report.to_json())?;
    Ok(())
}

pub fn load_report<S: Real>(path: &Path) -> Result<SearchReport<S>, IoError> {
    let text = fs::read_to_string(path)?;
    SearchReport::from_json(&text).map_err(|e| IoError::Report {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Lines paired with their 1-based numbers. Blank lines are skipped but
/// still counted, so reported numbers always match the file.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn split_fields(line: &str) -> Vec<String> {
    line.split(',').map(|f| f.trim().to_string()).collect()
}

fn parse_err(path: &str, line: usize, message: &str) -> IoError {
    IoError::Parse { path: path.to_string(), line, message: message.to_string() }
}

fn shape(path: &str, line: usize, message: &str) -> IoError {
    IoError::Shape { path: path.to_string(), line, message: message.to_string() }
}

fn value_err(path: &str, line: usize, message: &str) -> IoError {
    IoError::Value { path: path.to_string(), line, message: message.to_string() }
}
