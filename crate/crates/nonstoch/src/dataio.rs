//! CSV ingestion, row-wise policy application and sanitized output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nonstoch_core::privacy::{PolicyError, QuadratureParams, StripPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::output::{format_num, write_atomic};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid column map {0:?}: {1}")]
    ColumnMap(String, &'static str),
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("column {0:?} matches more than one header")]
    AmbiguousColumn(String),
    #[error("no row has every mapped column filled")]
    NoUsableRows,
    #[error("row {row}: missing value in column {column:?}")]
    MissingValue { row: usize, column: String },
    #[error("column map has {found} dimensions but the policy has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row}")]
    Row { row: usize, source: PolicyError },
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

/// Maps CSV columns to policy coordinates, e.g. `weight:1,height:2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    /// Column name for coordinate `k` (0-based) at position `k`.
    names: Vec<String>,
}

impl ColumnMap {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        ColumnMap { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap::new(["Weight", "Height"])
    }
}

impl FromStr for ColumnMap {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why| DataError::ColumnMap(s.to_string(), why);
        let mut pairs = Vec::new();
        for entry in s.split(',') {
            let (name, dim) = entry.rsplit_once(':').ok_or_else(|| bad("expected name:index"))?;
            let dim: usize = dim.trim().parse().map_err(|_| bad("index is not a positive integer"))?;
            if name.trim().is_empty() {
                return Err(bad("empty column name"));
            }
            pairs.push((dim, name.trim().to_string()));
        }
        pairs.sort();
        if pairs.iter().enumerate().any(|(k, (d, _))| *d != k + 1) {
            return Err(bad("indices must cover 1..=n exactly once"));
        }
        Ok(ColumnMap { names: pairs.into_iter().map(|(_, n)| n).collect() })
    }
}

impl fmt::Display for ColumnMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, n) in self.names.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}:{}", k + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Rows with a missing mapped cell are kept and passed through.
    #[default]
    PassThrough,
    /// A missing mapped cell is an error.
    Reject,
}

/// A CSV table with some columns mapped to policy coordinates.
///
/// Cells keep their original text so unmapped columns and untouched values
/// are written back byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Header index of each mapped coordinate.
    mapped: Vec<usize>,
    /// Parsed mapped cells per row; `None` when missing or unparseable.
    values: Vec<Vec<Option<f64>>>,
}

fn parse_cell(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn resolve(headers: &[String], name: &str) -> Result<usize, DataError> {
    if let Some(k) = headers.iter().position(|h| h == name) {
        return Ok(k);
    }
    let mut hits = headers.iter().enumerate().filter(|(_, h)| h.trim().eq_ignore_ascii_case(name.trim()));
    match (hits.next(), hits.next()) {
        (Some((k, _)), None) => Ok(k),
        (Some(_), Some(_)) => Err(DataError::AmbiguousColumn(name.to_string())),
        (None, _) => Err(DataError::MissingColumn(name.to_string())),
    }
}

impl DataTable {
    pub fn from_records(
        headers: Vec<String>,
        rows: Vec<Vec<String>>,
        columns: &ColumnMap,
        missing: MissingPolicy,
    ) -> Result<Self, DataError> {
        let mapped = columns.names().iter().map(|n| resolve(&headers, n)).collect::<Result<Vec<_>, _>>()?;
        let mut values = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let v: Vec<Option<f64>> = mapped.iter().map(|&c| row.get(c).and_then(|s| parse_cell(s))).collect();
            if missing == MissingPolicy::Reject {
                if let Some(k) = v.iter().position(Option::is_none) {
                    return Err(DataError::MissingValue { row: r, column: headers[mapped[k]].clone() });
                }
            }
            values.push(v);
        }
        let t = DataTable { headers, rows, mapped, values };
        if t.complete_rows() == 0 {
            return Err(DataError::NoUsableRows);
        }
        Ok(t)
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.mapped.len()
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    /// Header index of coordinate `k` (0-based).
    pub fn mapped_column(&self, k: usize) -> usize {
        self.mapped[k]
    }

    /// Mapped coordinates of row `r`, or `None` if any is missing.
    pub fn point(&self, r: usize) -> Option<Vec<f64>> {
        self.values[r].iter().copied().collect()
    }

    pub fn value(&self, r: usize, k: usize) -> Option<f64> {
        self.values[r][k]
    }

    pub fn complete_rows(&self) -> usize {
        self.values.iter().filter(|v| v.iter().all(Option::is_some)).count()
    }

    /// Missing cells per mapped coordinate.
    pub fn missing_counts(&self) -> Vec<usize> {
        (0..self.dim()).map(|k| self.values.iter().filter(|v| v[k].is_none()).count()).collect()
    }

    fn set_value(&mut self, r: usize, k: usize, v: f64) {
        self.values[r][k] = Some(v);
        self.rows[r][self.mapped[k]] = format_num(v);
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>, DataError> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?)
    }
}

pub fn read_csv<R: std::io::Read>(
    reader: R,
    columns: &ColumnMap,
    missing: MissingPolicy,
) -> Result<DataTable, DataError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec?.iter().map(str::to_string).collect());
    }
    DataTable::from_records(headers, rows, columns, missing)
}

pub fn load_csv(path: &Path, columns: &ColumnMap, missing: MissingPolicy) -> Result<DataTable, DataError> {
    let file = std::fs::File::open(path).map_err(|source| DataError::Read { path: path.to_path_buf(), source })?;
    read_csv(std::io::BufReader::new(file), columns, missing)
}

pub fn write_csv(t: &DataTable, path: &Path) -> Result<(), DataError> {
    let bytes = t.to_csv_bytes()?;
    write_atomic(path, &bytes).map_err(|source| DataError::Write { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SanitizationReport {
    pub rows_total: usize,
    /// Complete rows that fell in the strip and were projected.
    pub rows_modified: usize,
    pub rows_skipped_missing: usize,
    /// Complete rows outside the declared box; they are still sanitized.
    pub rows_outside_box: usize,
    pub max_perturbation: f64,
    pub epsilon: f64,
    pub rho: f64,
}

impl SanitizationReport {
    pub fn rows_unmodified(&self) -> usize {
        self.rows_total - self.rows_modified - self.rows_skipped_missing
    }
}

/// Apply `p` to every complete row. Only the protected cell of a projected
/// row is rewritten, and only when its value actually changes.
pub fn sanitize_table(t: &DataTable, p: &StripPolicy) -> Result<(DataTable, SanitizationReport), DataError> {
    sanitize_table_with(t, p, &QuadratureParams::default())
}

pub fn sanitize_table_with(
    t: &DataTable,
    p: &StripPolicy,
    quad: &QuadratureParams,
) -> Result<(DataTable, SanitizationReport), DataError> {
    if t.dim() != p.dim() {
        return Err(DataError::DimensionMismatch { expected: p.dim(), found: t.dim() });
    }
    let epsilon = p.epsilon_guarantee(quad)?.epsilon;
    let (out, mut report) = apply_rows(t, p)?;
    report.epsilon = epsilon;
    Ok((out, report))
}

/// Row pass without the ε computation.
pub(crate) fn apply_rows(t: &DataTable, p: &StripPolicy) -> Result<(DataTable, SanitizationReport), DataError> {
    let i = p.protected_index() - 1;
    let mut out = t.clone();
    let mut report = SanitizationReport {
        rows_total: t.len(),
        rows_modified: 0,
        rows_skipped_missing: 0,
        rows_outside_box: 0,
        max_perturbation: 0.0,
        epsilon: f64::NAN,
        rho: p.rho(),
    };
    for r in 0..t.len() {
        let Some(mut x) = t.point(r) else {
            report.rows_skipped_missing += 1;
            continue;
        };
        if !p.in_domain(&x) {
            report.rows_outside_box += 1;
        }
        let before = x[i];
        if p.apply_in_place(&mut x).map_err(|source| DataError::Row { row: r, source })? {
            report.rows_modified += 1;
            report.max_perturbation = report.max_perturbation.max((x[i] - before).abs());
            if x[i].to_bits() != before.to_bits() {
                out.set_value(r, i, x[i]);
            }
        }
    }
    Ok((out, report))
}

/// Synthetic survey-like table with columns
/// `Id,Gender,Age,Height,Weight`: heights in cm, weights in kg, both with one
/// decimal, about 2% of each measurement left blank.
pub fn generate_fixture(seed: u64, n: usize) -> DataTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let male_height = Normal::new(178.0, 7.0).unwrap();
    let female_height = Normal::new(165.0, 6.5).unwrap();
    let bmi = Normal::new(22.5, 3.5).unwrap();
    let headers = ["Id", "Gender", "Age", "Height", "Weight"].map(String::from).to_vec();
    let mut rows = Vec::with_capacity(n);
    for id in 1..=n {
        let male = rng.random_bool(0.5);
        let age: u32 = rng.random_range(15..=30);
        let h: f64 = if male { male_height.sample(&mut rng) } else { female_height.sample(&mut rng) };
        let h = (h.clamp(140.0, 210.0) * 10.0).round() / 10.0;
        let b: f64 = bmi.sample(&mut rng);
        let w = (b.clamp(14.0, 45.0) * (h / 100.0).powi(2) * 10.0).round() / 10.0;
        let missing_h = rng.random_bool(0.02);
        let missing_w = rng.random_bool(0.02);
        rows.push(vec![
            id.to_string(),
            if male { "Male" } else { "Female" }.to_string(),
            age.to_string(),
            if missing_h { String::new() } else { format!("{h:.1}") },
            if missing_w { String::new() } else { format!("{w:.1}") },
        ]);
    }
    DataTable::from_records(headers, rows, &ColumnMap::default(), MissingPolicy::PassThrough)
        .expect("fixture always has complete rows")
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), DataError> {
    write_atomic(path, bytes).map_err(|source| DataError::Write { path: path.to_path_buf(), source })
}
