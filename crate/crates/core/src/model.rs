//! Domain types shared by ingestion, the engines, the service and the CLI.
//!
//! A trendline statement asserts that `y(e) - y(b)` lies inside closed bounds
//! for a beginning point `b` drawn from one region of the trend axis and an
//! end point `e` drawn from another, disjoint region. All types here are
//! immutable once constructed.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coordinate on the trend axis.
///
/// Dates are stored as seconds since the Unix epoch (UTC); numeric trend
/// attributes keep their raw value. Always finite, so it is totally ordered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TrendValue(f64);

impl TrendValue {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::NonFiniteTrendValue(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Eq for TrendValue {}

impl PartialOrd for TrendValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TrendValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for TrendValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One observation: trend coordinate `x` and finite target value `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: TrendValue,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::UnparseableValue {
                text: y.to_string(),
                expected: "finite target value",
                row: None,
            });
        }
        Ok(Self {
            x: TrendValue::new(x)?,
            y,
        })
    }
}

/// Closed interval `[lo, hi]` that `y(e) - y(b)` must fall in.
///
/// Either endpoint may be infinite; a missing lower bound is `-inf` and a
/// missing upper bound is `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatementBounds {
    lo: f64,
    hi: f64,
}

impl StatementBounds {
    pub const UNBOUNDED: Self = Self {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::InvalidBounds { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Builds bounds from optional endpoints, defaulting to the infinities.
    pub fn from_options(lower: Option<f64>, upper: Option<f64>) -> Result<Self> {
        Self::new(
            lower.unwrap_or(f64::NEG_INFINITY),
            upper.unwrap_or(f64::INFINITY),
        )
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Finite lower endpoint, or `None` for `-inf`.
    pub fn lower(&self) -> Option<f64> {
        self.lo.is_finite().then_some(self.lo)
    }

    /// Finite upper endpoint, or `None` for `+inf`.
    pub fn upper(&self) -> Option<f64> {
        self.hi.is_finite().then_some(self.hi)
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    /// Closed-interval membership of a difference `d`.
    #[inline]
    pub fn contains(&self, d: f64) -> bool {
        self.lo <= d && d <= self.hi
    }
}

/// A closed interval `[from, to]` of the trend axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    from: TrendValue,
    to: TrendValue,
}

impl Region {
    pub fn new(from: TrendValue, to: TrendValue) -> Result<Self> {
        if from > to {
            return Err(Error::InvalidRegion {
                from: from.get(),
                to: to.get(),
            });
        }
        Ok(Self { from, to })
    }

    pub fn from_f64(from: f64, to: f64) -> Result<Self> {
        Self::new(TrendValue::new(from)?, TrendValue::new(to)?)
    }

    pub fn from(&self) -> TrendValue {
        self.from
    }

    pub fn to(&self) -> TrendValue {
        self.to
    }

    #[inline]
    pub fn contains(&self, x: TrendValue) -> bool {
        self.from <= x && x <= self.to
    }

    pub fn intersects(&self, other: &Region) -> bool {
        self.from <= other.to && other.from <= self.to
    }
}

/// Disjoint begin and end regions plus an optional window length.
///
/// With a window `w`, only pairs whose trend coordinates differ by exactly
/// `x_e - x_b == w` are admissible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPair {
    begin: Region,
    end: Region,
    window: Option<f64>,
}

impl RegionPair {
    pub fn new(begin: Region, end: Region, window: Option<f64>) -> Result<Self> {
        if let Some(w) = window {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidWindow(w));
            }
        }
        if begin.intersects(&end) {
            return Err(Error::OverlappingRegions {
                begin: (begin.from.get(), begin.to.get()),
                end: (end.from.get(), end.to.get()),
            });
        }
        Ok(Self { begin, end, window })
    }

    pub fn begin(&self) -> Region {
        self.begin
    }

    pub fn end(&self) -> Region {
        self.end
    }

    pub fn window(&self) -> Option<f64> {
        self.window
    }
}

/// Which side of a [`RegionPair`] a point set comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Begin,
    End,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Begin => "begin",
            Side::End => "end",
        }
    }
}

/// A complete trendline statement over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    target_column: String,
    trend_column: String,
    trend_is_date: bool,
    bounds: StatementBounds,
    regions: RegionPair,
}

impl Statement {
    pub fn new(
        target_column: impl Into<String>,
        trend_column: impl Into<String>,
        trend_is_date: bool,
        bounds: StatementBounds,
        regions: RegionPair,
    ) -> Result<Self> {
        let target_column = target_column.into();
        let trend_column = trend_column.into();
        if target_column == trend_column {
            return Err(Error::SameColumns(target_column));
        }
        Ok(Self {
            target_column,
            trend_column,
            trend_is_date,
            bounds,
            regions,
        })
    }

    pub fn target_column(&self) -> &str {
        &self.target_column
    }

    pub fn trend_column(&self) -> &str {
        &self.trend_column
    }

    pub fn trend_is_date(&self) -> bool {
        self.trend_is_date
    }

    pub fn bounds(&self) -> StatementBounds {
        self.bounds
    }

    pub fn regions(&self) -> RegionPair {
        self.regions
    }
}

/// Exact support: the fraction of admissible pairs satisfying the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportResult {
    pub support: f64,
    pub supporting_pairs: u64,
    pub total_pairs: u64,
}

impl SupportResult {
    pub(crate) fn from_counts(supporting_pairs: u64, total_pairs: u64) -> Self {
        debug_assert!(total_pairs > 0 && supporting_pairs <= total_pairs);
        Self {
            support: supporting_pairs as f64 / total_pairs as f64,
            supporting_pairs,
            total_pairs,
        }
    }
}

/// Budgets used when the caller gives none.
pub const DEFAULT_BUDGETS: [u64; 5] = [1_000, 5_000, 10_000, 50_000, 100_000];

/// Budgets (number of sampled pairs) and the seed for the random estimator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingConfig {
    budgets: Vec<u64>,
    seed: u64,
}

impl SamplingConfig {
    pub fn new(budgets: Vec<u64>, seed: u64) -> Result<Self> {
        if budgets.is_empty() || budgets.contains(&0) {
            return Err(Error::InvalidSampling);
        }
        Ok(Self { budgets, seed })
    }

    pub fn with_default_budgets(seed: u64) -> Self {
        Self {
            budgets: DEFAULT_BUDGETS.to_vec(),
            seed,
        }
    }

    pub fn budgets(&self) -> &[u64] {
        &self.budgets
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_budget(&self) -> u64 {
        self.budgets.iter().copied().max().unwrap_or(1)
    }
}

/// Hoeffding radius `sqrt(ln(2/delta) / (2n))` for a mean of `n` draws in [0, 1].
pub fn hoeffding_radius(n: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// A sampled support estimate for one budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportEstimate {
    pub budget: u64,
    pub estimate: f64,
    /// Hoeffding radius at 95% confidence.
    pub epsilon95: f64,
}

/// Bounds found by most-supported or tightest-statement discovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscoveredStatement {
    pub lo: f64,
    pub hi: f64,
    pub support: f64,
    pub width: f64,
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    proptest! {
        #[test]
        fn enlarging_bounds_never_drops_membership(
            lo in -100.0f64..100.0,
            len in 0.0f64..100.0,
            grow_lo in 0.0f64..50.0,
            grow_hi in 0.0f64..50.0,
            d in -300.0f64..300.0,
        ) {
            let inner = StatementBounds::new(lo, lo + len).unwrap();
            let outer = StatementBounds::new(lo - grow_lo, lo + len + grow_hi).unwrap();
            prop_assert!(!inner.contains(d) || outer.contains(d));
        }

        #[test]
        fn region_pair_rejects_exactly_the_listed_inputs(
            a in -10i32..10, b in -10i32..10, c in -10i32..10, d in -10i32..10,
            w in prop::option::of(-3i32..3),
        ) {
            let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
            let begin = Region::from_f64(a, b);
            let end = Region::from_f64(c, d);
            prop_assert_eq!(begin.is_err(), a > b);
            prop_assert_eq!(end.is_err(), c > d);
            if let (Ok(begin), Ok(end)) = (begin, end) {
                let w = w.map(f64::from);
                let overlap = a <= d && c <= b;
                let bad_window = matches!(w, Some(w) if w <= 0.0);
                let res = RegionPair::new(begin, end, w);
                prop_assert_eq!(res.is_ok(), !overlap && !bad_window);
            }
        }
    }
}
