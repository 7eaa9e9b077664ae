//! CSV loading, column-kind inference and region slicing.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use chrono::{NaiveDate, NaiveDateTime};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Point, Side, Statement, TrendValue};

const DATETIME_FORMAT: &str = "%Y-%m-%d %H:%M:%S";
const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Date,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetSchema {
    pub columns: Vec<Column>,
    pub row_count: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Keep only the first `n` data rows.
    pub row_limit: Option<usize>,
}

/// Raw CSV contents, header plus text cells.
///
/// Rows are shared, so truncating to a row limit is cheap.
#[derive(Debug, Clone)]
pub struct Dataset {
    id: String,
    headers: Arc<[String]>,
    rows: Arc<[Vec<String>]>,
    len: usize,
}

impl Dataset {
    /// Reads a CSV with a header row. Ragged rows, a missing header, or
    /// duplicate/empty column names are rejected.
    pub fn from_reader<R: Read>(id: impl Into<String>, reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(reader);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::MalformedCsv(e.to_string()))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::MalformedCsv(e.to_string()))?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Self::from_rows(id, headers, rows)
    }

    /// Loads a CSV file; the dataset id is the file stem.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|_| Error::FileNotFound(path.to_path_buf()))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_reader(id, file)
    }

    pub fn from_rows(
        id: impl Into<String>,
        headers: Vec<String>,
        rows: Vec<Vec<String>>,
    ) -> Result<Self> {
        if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
            return Err(Error::MalformedCsv("missing header row".into()));
        }
        let mut seen = HashSet::new();
        for h in &headers {
            if h.is_empty() {
                return Err(Error::MalformedCsv("empty column name in header".into()));
            }
            if !seen.insert(h.as_str()) {
                return Err(Error::MalformedCsv(format!("duplicate column name {h:?}")));
            }
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != headers.len()) {
            return Err(Error::MalformedCsv(format!(
                "row {} has {} fields, header has {}",
                i + 1,
                row.len(),
                headers.len()
            )));
        }
        let len = rows.len();
        Ok(Self {
            id: id.into(),
            headers: headers.into(),
            rows: rows.into(),
            len,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn row_count(&self) -> usize {
        self.len
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows[..self.len]
    }

    /// The first `n` rows. `n` must be positive and at most the row count.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRowLimit);
        }
        if n > self.len {
            return Err(Error::RowLimitTooLarge {
                requested: n,
                available: self.len,
            });
        }
        Ok(Self {
            len: n,
            ..self.clone()
        })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Infers each column's kind from every non-empty value.
    pub fn schema(&self) -> DatasetSchema {
        let columns = self
            .headers
            .iter()
            .enumerate()
            .map(|(i, name)| Column {
                name: name.clone(),
                kind: infer_kind(self.rows().iter().map(|r| r[i].as_str())),
            })
            .collect();
        DatasetSchema {
            columns,
            row_count: self.len,
        }
    }

    /// Header followed by the first `k` rows, as raw text.
    pub fn preview(&self, k: usize) -> Vec<Vec<String>> {
        std::iter::once(self.headers.to_vec())
            .chain(self.rows().iter().take(k).cloned())
            .collect()
    }
}

fn infer_kind<'a>(values: impl Iterator<Item = &'a str> + Clone) -> ColumnKind {
    let mut non_empty = values.filter(|v| !v.trim().is_empty()).peekable();
    if non_empty.peek().is_none() {
        return ColumnKind::Text;
    }
    if non_empty.clone().all(|v| parse_date(v).is_some()) {
        ColumnKind::Date
    } else if non_empty.all(|v| parse_number(v).is_some()) {
        ColumnKind::Numeric
    } else {
        ColumnKind::Text
    }
}

/// Reads a CSV file, applies the row limit, and infers its schema.
pub fn load_dataset(path: impl AsRef<Path>, options: &LoadOptions) -> Result<(Dataset, DatasetSchema)> {
    let mut dataset = Dataset::from_path(path)?;
    if let Some(n) = options.row_limit {
        dataset = dataset.truncated(n)?;
    }
    let schema = dataset.schema();
    Ok((dataset, schema))
}

fn parse_date(raw: &str) -> Option<i64> {
    let raw = raw.trim();
    if let Ok(dt) = NaiveDateTime::parse_from_str(raw, DATETIME_FORMAT) {
        return Some(dt.and_utc().timestamp());
    }
    NaiveDate::parse_from_str(raw, DATE_FORMAT)
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| dt.and_utc().timestamp())
}

fn parse_number(raw: &str) -> Option<f64> {
    raw.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses a trend coordinate.
///
/// Dates accept `YYYY-MM-DD HH:MM:SS` or `YYYY-MM-DD` (midnight), read as UTC
/// and returned as epoch seconds. Anything else is parsed as a finite number.
pub fn parse_trend_value(raw: &str, is_date: bool) -> Result<TrendValue> {
    let parsed = if is_date {
        parse_date(raw).map(|s| s as f64)
    } else {
        parse_number(raw)
    };
    match parsed {
        Some(v) => TrendValue::new(v),
        None => Err(Error::UnparseableValue {
            text: raw.to_string(),
            expected: if is_date { "date" } else { "number" },
            row: None,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesSource {
    pub dataset_id: String,
    pub trend_column: String,
    pub target_column: String,
}

/// Points of one region, sorted ascending by `x` (ties kept).
#[derive(Debug, Clone, PartialEq)]
pub struct PointSeries {
    points: Vec<Point>,
    source: Option<SeriesSource>,
    dropped_rows: usize,
}

impl PointSeries {
    /// Wraps in-memory points, sorting them by `x`.
    pub fn from_points(mut points: Vec<Point>) -> Self {
        points.sort_by_key(|p| p.x);
        Self {
            points,
            source: None,
            dropped_rows: 0,
        }
    }

    /// Convenience for `(x, y)` tuples; panics on non-finite input.
    pub fn from_xy(xy: &[(f64, f64)]) -> Self {
        Self::from_points(
            xy.iter()
                .map(|&(x, y)| Point::new(x, y).expect("finite point"))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source(&self) -> Option<&SeriesSource> {
        self.source.as_ref()
    }

    /// Rows inside the region whose target was missing or non-numeric.
    pub fn dropped_rows(&self) -> usize {
        self.dropped_rows
    }
}

/// Collects the points of `statement`'s begin or end region.
///
/// Rows with an empty trend cell, or an empty/non-numeric target inside the
/// region, are dropped and counted. A non-empty trend cell that does not parse
/// is an error.
pub fn slice_region(dataset: &Dataset, statement: &Statement, which: Side) -> Result<PointSeries> {
    let trend_idx = dataset.column_index(statement.trend_column())?;
    let target_idx = dataset.column_index(statement.target_column())?;
    let region = match which {
        Side::Begin => statement.regions().begin(),
        Side::End => statement.regions().end(),
    };

    let mut points = Vec::new();
    let mut dropped_rows = 0;
    for (i, row) in dataset.rows().iter().enumerate() {
        let raw_x = row[trend_idx].as_str();
        if raw_x.trim().is_empty() {
            dropped_rows += 1;
            continue;
        }
        let x = parse_trend_value(raw_x, statement.trend_is_date()).map_err(|e| match e {
            Error::UnparseableValue { text, expected, .. } => Error::UnparseableValue {
                text,
                expected,
                row: Some(i + 1),
            },
            other => other,
        })?;
        if !region.contains(x) {
            continue;
        }
        match parse_number(&row[target_idx]) {
            Some(y) => points.push(Point { x, y }),
            None => dropped_rows += 1,
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyRegion(which.label()));
    }
    points.sort_by_key(|p| p.x);
    Ok(PointSeries {
        points,
        source: Some(SeriesSource {
            dataset_id: dataset.id().to_string(),
            trend_column: statement.trend_column().to_string(),
            target_column: statement.target_column().to_string(),
        }),
        dropped_rows,
    })
}
