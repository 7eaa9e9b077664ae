//! Alternative statements found by scanning the sorted list of differences.
//!
//! Interval membership is exact over the reals. A most-supported window
//! `[lo, lo + W]` reports `hi` as the largest `f64` not above `lo + W`. A
//! tightest window reports its width as the smallest `f64` not below
//! `hi - lo`. For any `f64` difference `d` this makes `lo <= d && d <= hi`
//! agree with real-interval membership. It also guarantees that a tightest
//! width fed back as a most-supported width covers the same points.

use crate::error::{Error, Result};
use crate::ingest::PointSeries;
use crate::model::{DiscoveredStatement, SamplingConfig};
use crate::pairs::{seeded_rng, PairSpace};

/// Pair-space size above which differences are sampled instead of materialized.
pub const DEFAULT_MAX_EXACT_PAIRS: u64 = 10_000_000;

/// Generator stream reserved for discovery sampling, distinct from the
/// per-budget streams of the support estimator.
const DISCOVERY_STREAM: u64 = u64::MAX;

/// Sorted `y_e - y_b` values over a pair space, or over a sample of it.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceList {
    diffs: Vec<f64>,
    sampled: bool,
    sample_budget: Option<u64>,
}

impl DifferenceList {
    /// Exact list from arbitrary finite values.
    pub fn from_values(mut diffs: Vec<f64>) -> Self {
        debug_assert!(diffs.iter().all(|d| d.is_finite()));
        diffs.sort_unstable_by(f64::total_cmp);
        Self {
            diffs,
            sampled: false,
            sample_budget: None,
        }
    }

    pub fn diffs(&self) -> &[f64] {
        &self.diffs
    }

    pub fn len(&self) -> usize {
        self.diffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diffs.is_empty()
    }

    pub fn sampled(&self) -> bool {
        self.sampled
    }

    pub fn sample_budget(&self) -> Option<u64> {
        self.sample_budget
    }

    /// Number of differences inside `[lo, hi]`.
    pub fn count_within(&self, lo: f64, hi: f64) -> usize {
        let start = self.diffs.partition_point(|&d| d < lo);
        let stop = self.diffs.partition_point(|&d| d <= hi);
        stop.saturating_sub(start)
    }
}

/// Materializes and sorts every difference when the pair space has at most
/// `max_exact_pairs` pairs; otherwise sorts `sampling.max_budget()` pairs drawn
/// uniformly with replacement.
pub fn build_differences(
    begin: &PointSeries,
    end: &PointSeries,
    window: Option<f64>,
    max_exact_pairs: u64,
    sampling: &SamplingConfig,
) -> Result<DifferenceList> {
    let space = PairSpace::new(begin.points(), end.points(), window)?;
    if space.total() <= max_exact_pairs {
        return Ok(DifferenceList::from_values(space.differences().collect()));
    }
    let budget = sampling.max_budget();
    let mut rng = seeded_rng(sampling.seed(), DISCOVERY_STREAM);
    let mut diffs: Vec<f64> = (0..budget)
        .map(|_| space.difference(space.sample(&mut rng)))
        .collect();
    diffs.sort_unstable_by(f64::total_cmp);
    Ok(DifferenceList {
        diffs,
        sampled: true,
        sample_budget: Some(budget),
    })
}

/// Most-supported statement of width `width`.
///
/// Only windows whose lower end sits on a difference need checking: any
/// optimal window slides right onto its smallest member without losing one.
/// Two-pointer sweep, ties go to the smallest `lo`.
pub fn most_supported(diffs: &DifferenceList, width: f64) -> Result<DiscoveredStatement> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidWidth(width));
    }
    let d = diffs.diffs();
    let m = d.len();
    if m == 0 {
        return Err(Error::EmptyPairSpace);
    }

    let mut best = (0usize, d[0], add_round_down(d[0], width));
    let mut j = 0;
    for i in 0..m {
        // A repeated value anchors the same window with fewer members.
        if i > 0 && d[i] == d[i - 1] {
            continue;
        }
        let hi = add_round_down(d[i], width);
        j = j.max(i);
        while j < m && d[j] <= hi {
            j += 1;
        }
        if j - i > best.0 {
            best = (j - i, d[i], hi);
        }
    }
    let (count, lo, hi) = best;
    Ok(DiscoveredStatement {
        lo,
        hi,
        support: count as f64 / m as f64,
        width,
    })
}

/// Narrowest statement whose support is at least `min_support`.
///
/// With `k` the smallest count reaching the threshold, the answer is the
/// tightest run of `k` consecutive sorted differences. Ties go to the
/// smallest `lo`.
pub fn tightest(diffs: &DifferenceList, min_support: f64) -> Result<DiscoveredStatement> {
    if !(min_support > 0.0 && min_support <= 1.0) {
        return Err(Error::InvalidThreshold(min_support));
    }
    let d = diffs.diffs();
    let m = d.len();
    if m == 0 {
        return Err(Error::EmptyPairSpace);
    }
    let k = min_count(min_support, m);

    // Widths compare exactly as (rounded, error) pairs.
    let mut best_i = 0;
    let mut best_w = two_sum(d[k - 1], -d[0]);
    for i in 1..=m - k {
        let w = two_sum(d[i + k - 1], -d[i]);
        if w.0 < best_w.0 || (w.0 == best_w.0 && w.1 < best_w.1) {
            best_i = i;
            best_w = w;
        }
    }
    let (lo, hi) = (d[best_i], d[best_i + k - 1]);
    let width = if best_w.1 > 0.0 { best_w.0.next_up() } else { best_w.0 };
    Ok(DiscoveredStatement {
        lo,
        hi,
        support: diffs.count_within(lo, hi) as f64 / m as f64,
        width,
    })
}

/// Smallest `k` in `1..=m` with `k / m >= tau` as evaluated in `f64`.
fn min_count(tau: f64, m: usize) -> usize {
    let mf = m as f64;
    let mut k = ((tau * mf).ceil() as usize).clamp(1, m);
    while k > 1 && (k - 1) as f64 / mf >= tau {
        k -= 1;
    }
    while k < m && (k as f64 / mf) < tau {
        k += 1;
    }
    k
}

/// Error-free transformation: `a + b == s + e` exactly, `s = fl(a + b)`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Largest `f64` that is `<= a + b` over the reals.
#[inline]
fn add_round_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s == f64::INFINITY {
        f64::MAX
    } else if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}
