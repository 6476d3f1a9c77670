use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Finite union of disjoint half-open intervals `[a, b)`, kept sorted with no
/// two intervals touching.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Union of the given intervals. Overlapping or touching inputs are merged.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &raw {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(invalid(format!("bad interval [{a}, {b})")));
            }
        }
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match intervals.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => intervals.push((a, b)),
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Right end of the convex hull.
    pub fn hull_end(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.1)
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.1 <= x);
        self.intervals.get(idx).is_some_and(|&(a, _)| a <= x)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all).expect("inputs already validated")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let (lo, hi) = (a1.max(a2), b1.min(b2));
            if lo < hi {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { intervals: out }
    }

    /// Measure of `[a, b) ∩ self`.
    pub fn overlap(&self, a: f64, b: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(c, d)| (d.min(b) - c.max(a)).max(0.0))
            .sum()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intervals.iter().all(|&(a, b)| {
            let idx = other.intervals.partition_point(|iv| iv.1 <= a);
            other
                .intervals
                .get(idx)
                .is_some_and(|&(c, d)| c <= a && b <= d)
        })
    }
}

impl TryFrom<Vec<(f64, f64)>> for IntervalSet {
    type Error = crate::Error;

    fn try_from(raw: Vec<(f64, f64)>) -> Result<Self> {
        Self::from_intervals(raw)
    }
}

impl From<IntervalSet> for Vec<(f64, f64)> {
    fn from(set: IntervalSet) -> Self {
        set.intervals
    }
}
