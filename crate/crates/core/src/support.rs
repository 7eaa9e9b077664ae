//! Support of a statement: brute force, binary search, and pair sampling.

use crate::error::{Error, Result};
use crate::ingest::PointSeries;
use crate::model::{hoeffding_radius, SamplingConfig, StatementBounds, SupportEstimate, SupportResult};
use crate::pairs::{seeded_rng, window_matches, PairSpace};

/// Confidence level used for the reported estimator radius.
pub const DELTA: f64 = 0.05;

/// Brute force over every `(b, e)` in `begin x end`.
///
/// Deliberately shares nothing with [`support_exact`] beyond the bounds and
/// window predicates, so it can serve as its oracle.
pub fn support_baseline(
    begin: &PointSeries,
    end: &PointSeries,
    bounds: StatementBounds,
    window: Option<f64>,
) -> Result<SupportResult> {
    if let Some(w) = window {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidWindow(w));
        }
    }
    let mut supporting = 0u64;
    let mut total = 0u64;
    for b in begin.points() {
        for e in end.points() {
            if let Some(w) = window {
                if !window_matches(b.x.get(), e.x.get(), w) {
                    continue;
                }
            }
            total += 1;
            if bounds.contains(e.y - b.y) {
                supporting += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::EmptyPairSpace);
    }
    Ok(SupportResult::from_counts(supporting, total))
}

/// Exact support in `O((n_b + n_e) log n_e)`.
///
/// Unconstrained: end targets are sorted once and each begin point counts its
/// matches with two binary searches. Windowed: each begin point looks up the
/// end points at `x_b + w` and tests them directly.
pub fn support_exact(
    begin: &PointSeries,
    end: &PointSeries,
    bounds: StatementBounds,
    window: Option<f64>,
) -> Result<SupportResult> {
    let space = PairSpace::new(begin.points(), end.points(), window)?;
    let total = space.total();

    let supporting = if space.is_windowed() {
        let end = space.end();
        space
            .begin()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                space
                    .end_range(i)
                    .filter(|&j| bounds.contains(end[j].y - b.y))
                    .count() as u64
            })
            .sum()
    } else if bounds.is_unbounded() {
        total
    } else {
        let mut ys: Vec<f64> = end.points().iter().map(|p| p.y).collect();
        ys.sort_unstable_by(f64::total_cmp);
        let (lo, hi) = (bounds.lo(), bounds.hi());
        begin
            .points()
            .iter()
            .map(|b| {
                // y_e - y_b is monotone in y_e, so both cuts are prefixes.
                let below = ys.partition_point(|&ye| ye - b.y < lo);
                let within = ys.partition_point(|&ye| ye - b.y <= hi);
                (within - below) as u64
            })
            .sum()
    };
    Ok(SupportResult::from_counts(supporting, total))
}

/// Estimates support by drawing `N` pairs uniformly with replacement, once per
/// budget. Budget `i` uses stream `i` of the configured seed.
pub fn support_random(
    begin: &PointSeries,
    end: &PointSeries,
    bounds: StatementBounds,
    window: Option<f64>,
    config: &SamplingConfig,
) -> Result<Vec<SupportEstimate>> {
    let space = PairSpace::new(begin.points(), end.points(), window)?;
    Ok(config
        .budgets()
        .iter()
        .enumerate()
        .map(|(i, &budget)| {
            let mut rng = seeded_rng(config.seed(), i as u64);
            let hits = (0..budget)
                .filter(|_| bounds.contains(space.difference(space.sample(&mut rng))))
                .count() as u64;
            SupportEstimate {
                budget,
                estimate: hits as f64 / budget as f64,
                epsilon95: hoeffding_radius(budget, DELTA),
            }
        })
        .collect())
}
