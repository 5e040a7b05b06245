//! Exact interval sets over the path parameter.
//!
//! Feasible sets of affine conditions along a polyline are finite unions of
//! intervals with rational endpoints and explicit open/closed flags; this
//! module holds the small algebra the path-lifting engine needs.

use crate::rat::Rat;

/// Interval `[lo, hi]` with independently open or closed ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Interval {
    pub lo: Rat,
    pub lo_closed: bool,
    pub hi: Rat,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: Rat, hi: Rat) -> Self {
        Interval {
            lo,
            lo_closed: true,
            hi,
            hi_closed: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, t: &Rat) -> bool {
        let above = *t > self.lo || (*t == self.lo && self.lo_closed);
        let below = *t < self.hi || (*t == self.hi && self.hi_closed);
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo.clone(), self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo.clone(), other.lo_closed)
        } else {
            (self.lo.clone(), self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi.clone(), self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi.clone(), other.hi_closed)
        } else {
            (self.hi.clone(), self.hi_closed && other.hi_closed)
        };
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    /// Some rational inside the interval, preferring the left end.
    pub fn pick(&self) -> Option<Rat> {
        if self.is_empty() {
            return None;
        }
        if self.lo_closed {
            return Some(self.lo.clone());
        }
        if self.lo < self.hi {
            return Some((&self.lo + &self.hi) / Rat::int(2));
        }
        None
    }
}

/// Disjoint, sorted union of intervals.
#[derive(Clone, Debug, Default)]
pub(crate) struct IntervalSet {
    pub intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet {
            intervals: Vec::new(),
        }
    }

    pub fn single(iv: Interval) -> Self {
        let mut set = IntervalSet::empty();
        set.push(iv);
        set
    }

    /// Append an interval known to start at-or-after the current end,
    /// merging when it touches the last one.
    pub fn push(&mut self, iv: Interval) {
        if iv.is_empty() {
            return;
        }
        if let Some(last) = self.intervals.last_mut() {
            let touches = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
            if touches {
                if iv.hi > last.hi || (iv.hi == last.hi && iv.hi_closed) {
                    last.hi = iv.hi;
                    last.hi_closed = iv.hi_closed;
                }
                return;
            }
        }
        self.intervals.push(iv);
    }

    pub fn contains(&self, t: &Rat) -> bool {
        self.intervals.iter().any(|iv| iv.contains(t))
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = IntervalSet::empty();
        for a in &self.intervals {
            for b in &other.intervals {
                out.push(a.intersect(b));
            }
        }
        out
    }

    /// Earliest representable point of the set.
    pub fn pick_earliest(&self) -> Option<Rat> {
        self.intervals.iter().find_map(|iv| iv.pick())
    }

    /// Largest downward-closed subinterval `{t : [lo, t] inside the set}`,
    /// where `lo` is the global lower bound of the ambient range.
    ///
    /// Returns `None` when `lo` itself is not in the set.
    pub fn prefix_from(&self, lo: &Rat) -> Option<Interval> {
        let first = self.intervals.iter().find(|iv| iv.contains(lo))?;
        Some(first.clone())
    }

    /// Mirror image of [`IntervalSet::prefix_from`] for suffixes ending at `hi`.
    pub fn suffix_to(&self, hi: &Rat) -> Option<Interval> {
        let last = self.intervals.iter().find(|iv| iv.contains(hi))?;
        Some(last.clone())
    }
}
