//! Finite unions of intervals and isolated points inside `[0,1]`.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{QsoError, Result};
use crate::map::{ONE_THIRD, TWO_THIRDS};

/// One component of an [`IntervalSet`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Point {
        #[serde(serialize_with = "compact_number")]
        point: f64,
    },
    Interval {
        #[serde(serialize_with = "compact_number")]
        lo: f64,
        closed_lo: bool,
        #[serde(serialize_with = "compact_number")]
        hi: f64,
        closed_hi: bool,
    },
}

/// Integral values are written without a fractional part (`0`, `1`).
fn compact_number<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        s.serialize_i64(*v as i64)
    } else {
        s.serialize_f64(*v)
    }
}

impl Component {
    pub fn point(v: f64) -> Self {
        Component::Point { point: v }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::interval(lo, true, hi, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::interval(lo, false, hi, false)
    }

    /// `(lo, hi]`
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Self::interval(lo, false, hi, true)
    }

    /// `[lo, hi)`
    pub fn right_open(lo: f64, hi: f64) -> Self {
        Self::interval(lo, true, hi, false)
    }

    pub fn interval(lo: f64, closed_lo: bool, hi: f64, closed_hi: bool) -> Self {
        Component::Interval {
            lo,
            closed_lo,
            hi,
            closed_hi,
        }
    }

    pub fn lo(&self) -> f64 {
        match *self {
            Component::Point { point } => point,
            Component::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Component::Point { point } => point,
            Component::Interval { hi, .. } => hi,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Component::Point { point } => x == point,
            Component::Interval {
                lo,
                closed_lo,
                hi,
                closed_hi,
            } => {
                let above = if closed_lo { x >= lo } else { x > lo };
                let below = if closed_hi { x <= hi } else { x < hi };
                above && below
            }
        }
    }

    pub fn length(&self) -> f64 {
        self.hi() - self.lo()
    }

    /// Smallest member, or the first double past an open endpoint.
    pub fn first_member(&self) -> f64 {
        match *self {
            Component::Point { point } => point,
            Component::Interval { lo, closed_lo, .. } => {
                if closed_lo {
                    lo
                } else {
                    lo.next_up()
                }
            }
        }
    }

    pub fn last_member(&self) -> f64 {
        match *self {
            Component::Point { point } => point,
            Component::Interval { hi, closed_hi, .. } => {
                if closed_hi {
                    hi
                } else {
                    hi.next_down()
                }
            }
        }
    }
}

/// Sorted, pairwise disjoint components.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Component>", into = "Vec<Component>")]
pub struct IntervalSet {
    components: Vec<Component>,
}

impl TryFrom<Vec<Component>> for IntervalSet {
    type Error = QsoError;

    fn try_from(components: Vec<Component>) -> Result<Self> {
        IntervalSet::new(components)
    }
}

impl From<IntervalSet> for Vec<Component> {
    fn from(set: IntervalSet) -> Self {
        set.components
    }
}

impl IntervalSet {
    /// Validates and normalizes `components`: degenerate closed intervals
    /// become points, and the list must be sorted and pairwise disjoint.
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(components.len());
        for c in components {
            match c {
                Component::Point { point } => {
                    if !(0.0..=1.0).contains(&point) {
                        return Err(QsoError::InvalidIntervalSet(format!(
                            "point {point} outside [0,1]"
                        )));
                    }
                    normalized.push(c);
                }
                Component::Interval {
                    lo,
                    closed_lo,
                    hi,
                    closed_hi,
                } => {
                    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
                        return Err(QsoError::InvalidIntervalSet(format!(
                            "interval ({lo},{hi}) outside [0,1]"
                        )));
                    }
                    if lo > hi {
                        return Err(QsoError::InvalidIntervalSet(format!("lo {lo} exceeds hi {hi}")));
                    }
                    if lo == hi {
                        if closed_lo && closed_hi {
                            normalized.push(Component::point(lo));
                        } else {
                            return Err(QsoError::InvalidIntervalSet(format!("empty interval at {lo}")));
                        }
                    } else {
                        normalized.push(c);
                    }
                }
            }
        }
        for pair in normalized.windows(2) {
            let (left, right) = (pair[0], pair[1]);
            let touching = left.hi() == right.lo();
            let overlap = left.hi() > right.lo()
                || (touching && left.contains(left.hi()) && right.contains(right.lo()));
            if overlap {
                return Err(QsoError::InvalidIntervalSet(format!(
                    "components {left:?} and {right:?} are unsorted or overlap"
                )));
            }
        }
        Ok(Self {
            components: normalized,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    /// Isolated points of the set.
    pub fn isolated_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.components.iter().filter_map(|c| match c {
            Component::Point { point } => Some(*point),
            _ => None,
        })
    }

    /// Hull `[inf, sup]` of the set, or `None` when empty.
    pub fn hull(&self) -> Option<(f64, f64)> {
        let first = self.components.first()?;
        let last = self.components.last()?;
        Some((first.lo(), last.hi()))
    }

    /// `n` points spread over the interval components proportionally to
    /// length, at the midpoints of equal strata. Never returns an endpoint,
    /// so open ends and isolated points are avoided. Falls back to the
    /// isolated points when the set has no interval component.
    pub fn stratified_interior(&self, n: usize) -> Vec<f64> {
        let intervals: Vec<&Component> = self
            .components
            .iter()
            .filter(|c| matches!(c, Component::Interval { .. }))
            .collect();
        if intervals.is_empty() {
            return self.isolated_points().collect();
        }
        let total: f64 = intervals.iter().map(|c| c.length()).sum();
        let mut out = Vec::with_capacity(n);
        let mut assigned = 0usize;
        for (i, c) in intervals.iter().enumerate() {
            let count = if i + 1 == intervals.len() {
                n - assigned
            } else {
                ((n as f64) * c.length() / total).round() as usize
            };
            let count = count.min(n - assigned);
            assigned += count;
            let width = c.length() / count.max(1) as f64;
            for j in 0..count {
                let x = c.lo() + (j as f64 + 0.5) * width;
                if c.contains(x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Sample points for invariance checks: `n` stratified interior points
    /// plus every extreme member (endpoints, or the adjacent double for open
    /// ends), the isolated points, and the doubles on either side of the
    /// breakpoints when they belong to the set.
    pub fn probe_points(&self, n: usize) -> Vec<f64> {
        let mut pts = self.stratified_interior(n);
        for c in &self.components {
            pts.push(c.first_member());
            pts.push(c.last_member());
        }
        for bp in [ONE_THIRD, TWO_THIRDS] {
            for x in [bp.next_down(), bp, bp.next_up()] {
                if self.contains(x) {
                    pts.push(x);
                }
            }
        }
        pts.retain(|x| self.contains(*x));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Shortest decimal with at most six fractional digits.
pub(crate) fn short_decimal(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Component::Point { point } => write!(f, "{{{}}}", short_decimal(point)),
            Component::Interval {
                lo,
                closed_lo,
                hi,
                closed_hi,
            } => write!(
                f,
                "{}{},{}{}",
                if closed_lo { '[' } else { '(' },
                short_decimal(lo),
                short_decimal(hi),
                if closed_hi { ']' } else { ')' }
            ),
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
