//! Support scoring and alternative-statement discovery for trendline claims.
//!
//! A trendline statement says that `y(e) - y(b)` falls inside `[lo, hi]`
//! for a beginning point `b` in one region of the trend axis and an end point
//! `e` in another. Its support is the share of admissible `(b, e)` pairs for
//! which that holds; a low score means the statement is cherry-picked.
//!
//! - [`ingest`] loads CSV datasets and slices region point sets.
//! - [`support`] computes support by brute force, binary search, or sampling.
//! - [`discovery`] finds the most-supported statement of a given width and the
//!   tightest statement reaching a support threshold.

pub mod discovery;
pub mod error;
pub mod ingest;
pub mod model;
pub mod pairs;
pub mod support;

pub use discovery::{build_differences, most_supported, tightest, DifferenceList, DEFAULT_MAX_EXACT_PAIRS};
pub use error::{Error, Result};
pub use ingest::{load_dataset, parse_trend_value, slice_region, Dataset, DatasetSchema, LoadOptions, PointSeries};
pub use model::{
    DiscoveredStatement, Point, Region, RegionPair, SamplingConfig, Side, Statement, StatementBounds,
    SupportEstimate, SupportResult, TrendValue, DEFAULT_BUDGETS,
};
pub use support::{support_baseline, support_exact, support_random};
