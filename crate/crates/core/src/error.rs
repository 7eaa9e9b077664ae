use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while loading data or evaluating a statement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("trend value must be finite, got {0}")]
    NonFiniteTrendValue(f64),

    #[error("invalid statement bounds: lower {lo} exceeds upper {hi}")]
    InvalidBounds { lo: f64, hi: f64 },

    #[error("invalid region: from {from} is after to {to}")]
    InvalidRegion { from: f64, to: f64 },

    #[error("begin region [{}, {}] and end region [{}, {}] overlap", .begin.0, .begin.1, .end.0, .end.1)]
    OverlappingRegions { begin: (f64, f64), end: (f64, f64) },

    #[error("window must be a positive finite number, got {0}")]
    InvalidWindow(f64),

    #[error("target and trend columns must differ (both are {0:?})")]
    SameColumns(String),

    #[error("dataset not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("malformed CSV: {0}")]
    MalformedCsv(String),

    #[error("row limit must be positive")]
    InvalidRowLimit,

    #[error("row limit {requested} exceeds the {available} rows in the dataset")]
    RowLimitTooLarge { requested: usize, available: usize },

    #[error("cannot parse {text:?} as a {expected}{}", row_suffix(.row))]
    UnparseableValue {
        text: String,
        expected: &'static str,
        row: Option<usize>,
    },

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("{0} region contains no usable points")]
    EmptyRegion(&'static str),

    #[error("no (begin, end) pairs satisfy the window constraint")]
    EmptyPairSpace,

    #[error("sampling budgets must be non-empty and each at least 1")]
    InvalidSampling,

    #[error("statement width must be a positive finite number, got {0}")]
    InvalidWidth(f64),

    #[error("support threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
}

fn row_suffix(row: &Option<usize>) -> String {
    match row {
        Some(r) => format!(" (row {r})"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
