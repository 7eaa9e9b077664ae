//! The space of admissible `(b, e)` pairs.
//!
//! Unconstrained, every begin point pairs with every end point. With a window
//! `w`, only pairs with `x_e - x_b == w` count. Both predicates are evaluated in
//! `f64` exactly as written here so every engine agrees pair-for-pair.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Point;

/// Window predicate shared by every engine.
#[inline]
pub fn window_matches(x_begin: f64, x_end: f64, window: f64) -> bool {
    x_end - x_begin == window
}

/// Index over the admissible pairs of two x-sorted point sets.
#[derive(Debug, Clone)]
pub struct PairSpace<'a> {
    begin: &'a [Point],
    end: &'a [Point],
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Full,
    /// For begin point `i`, admissible end indices are `ranges[i]`;
    /// `offsets[i]` counts admissible pairs before begin point `i`.
    Windowed {
        ranges: Vec<(usize, usize)>,
        offsets: Vec<u64>,
        total: u64,
    },
}

impl<'a> PairSpace<'a> {
    /// `end` must be sorted ascending by `x` (as [`crate::PointSeries`] is).
    pub fn new(begin: &'a [Point], end: &'a [Point], window: Option<f64>) -> Result<Self> {
        if begin.is_empty() || end.is_empty() {
            return Err(Error::EmptyPairSpace);
        }
        let kind = match window {
            None => Kind::Full,
            Some(w) => {
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::InvalidWindow(w));
                }
                debug_assert!(end.windows(2).all(|p| p[0].x <= p[1].x));
                let mut ranges = Vec::with_capacity(begin.len());
                let mut offsets = Vec::with_capacity(begin.len());
                let mut total = 0u64;
                for b in begin {
                    let xb = b.x.get();
                    // x_e - x_b is monotone in x_e, so the matches are contiguous.
                    let start = end.partition_point(|e| e.x.get() - xb < w);
                    let stop = end.partition_point(|e| e.x.get() - xb <= w);
                    offsets.push(total);
                    ranges.push((start, stop));
                    total += (stop - start) as u64;
                }
                if total == 0 {
                    return Err(Error::EmptyPairSpace);
                }
                Kind::Windowed {
                    ranges,
                    offsets,
                    total,
                }
            }
        };
        Ok(Self { begin, end, kind })
    }

    pub fn begin(&self) -> &'a [Point] {
        self.begin
    }

    pub fn end(&self) -> &'a [Point] {
        self.end
    }

    pub fn is_windowed(&self) -> bool {
        matches!(self.kind, Kind::Windowed { .. })
    }

    pub fn total(&self) -> u64 {
        match &self.kind {
            Kind::Full => self.begin.len() as u64 * self.end.len() as u64,
            Kind::Windowed { total, .. } => *total,
        }
    }

    /// End indices admissible for begin index `i` (only meaningful when windowed).
    pub(crate) fn end_range(&self, i: usize) -> std::ops::Range<usize> {
        match &self.kind {
            Kind::Full => 0..self.end.len(),
            Kind::Windowed { ranges, .. } => ranges[i].0..ranges[i].1,
        }
    }

    /// The `idx`-th admissible pair in begin-major order.
    pub fn pair_at(&self, idx: u64) -> (usize, usize) {
        debug_assert!(idx < self.total());
        match &self.kind {
            Kind::Full => {
                let n_end = self.end.len() as u64;
                ((idx / n_end) as usize, (idx % n_end) as usize)
            }
            Kind::Windowed {
                ranges, offsets, ..
            } => {
                let b = offsets.partition_point(|&o| o <= idx) - 1;
                (b, ranges[b].0 + (idx - offsets[b]) as usize)
            }
        }
    }

    #[inline]
    pub fn difference(&self, (b, e): (usize, usize)) -> f64 {
        self.end[e].y - self.begin[b].y
    }

    /// Every admissible difference `y_e - y_b`, begin-major.
    pub fn differences(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.begin.len()).flat_map(move |b| {
            self.end_range(b)
                .map(move |e| self.end[e].y - self.begin[b].y)
        })
    }

    /// Draws one pair uniformly at random.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        self.pair_at(rng.random_range(0..self.total()))
    }
}

/// Deterministic generator for one sampling stream of a seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
