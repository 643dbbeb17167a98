//! Explored-area ledger of the backward sweep.
//!
//! Every influence region is a box `(x_lo, x_hi) × [t_lo, 0]` anchored at
//! the observation time, so their union is the set of points lying above a
//! piecewise-constant floor `depth(x)`. Storing that floor keeps subtraction
//! exact and logarithmic in the number of breakpoints.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::region::{Region, SpaceTimeBox};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Segment {
    hi: f64,
    depth: f64,
}

/// Fresh territory returned by [`ExploredProfile::explore`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Exploration {
    /// Space-time boxes where death marks have not been sampled yet.
    pub boxes: Vec<SpaceTimeBox>,
    /// Spatial strips where calls alive at time 0 have not been sampled yet.
    pub strips: Vec<(f64, f64)>,
}

/// Union of explored boxes `(lo, hi) × [depth, 0]`, plus the explored
/// time-0 strips (every segment's spatial extent).
#[derive(Debug, Clone, Default)]
pub struct ExploredProfile {
    segments: BTreeMap<Key, Segment>,
}

impl ExploredProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks `(lo, hi) × [t_lo, 0]` as explored and returns the part that was
    /// not explored before.
    pub fn explore(&mut self, lo: f64, hi: f64, t_lo: f64) -> Exploration {
        debug_assert!(t_lo <= 0.0);
        let mut fresh = Exploration::default();
        if !(lo < hi) {
            return fresh;
        }

        let mut touched: Vec<(f64, Segment)> = Vec::new();
        if let Some((k, s)) = self.segments.range(..Key(lo)).next_back() {
            if s.hi > lo {
                touched.push((k.0, *s));
            }
        }
        touched.extend(self.segments.range(Key(lo)..Key(hi)).map(|(k, s)| (k.0, *s)));

        // New floor over [lo, hi), built left to right.
        let mut pieces: Vec<(f64, f64, f64)> = Vec::with_capacity(touched.len() * 2 + 1);
        let mut cursor = lo;
        for &(s_lo, s) in &touched {
            if s_lo > cursor {
                fresh.boxes.push(SpaceTimeBox::new(cursor, s_lo, t_lo, 0.0));
                fresh.strips.push((cursor, s_lo));
                pieces.push((cursor, s_lo, t_lo));
            }
            let (p_lo, p_hi) = (s_lo.max(lo), s.hi.min(hi));
            if s.depth > t_lo {
                fresh.boxes.push(SpaceTimeBox::new(p_lo, p_hi, t_lo, s.depth));
            }
            pieces.push((p_lo, p_hi, s.depth.min(t_lo)));
            cursor = p_hi;
        }
        if cursor < hi {
            fresh.boxes.push(SpaceTimeBox::new(cursor, hi, t_lo, 0.0));
            fresh.strips.push((cursor, hi));
            pieces.push((cursor, hi, t_lo));
        }
        fresh.boxes.retain(|b| b.area() > 0.0);

        for &(s_lo, _) in &touched {
            self.segments.remove(&Key(s_lo));
        }
        if let Some(&(s_lo, s)) = touched.first() {
            if s_lo < lo {
                self.segments.insert(Key(s_lo), Segment { hi: lo, depth: s.depth });
            }
        }
        if let Some(&(_, s)) = touched.last() {
            if s.hi > hi {
                self.segments.insert(Key(hi), Segment { hi: s.hi, depth: s.depth });
            }
        }
        let mut merged: Option<(f64, f64, f64)> = None;
        for (p_lo, p_hi, depth) in pieces {
            match merged.as_mut() {
                Some(m) if m.2 == depth && m.1 == p_lo => m.1 = p_hi,
                _ => {
                    if let Some((m_lo, m_hi, d)) = merged.take() {
                        self.segments.insert(Key(m_lo), Segment { hi: m_hi, depth: d });
                    }
                    merged = Some((p_lo, p_hi, depth));
                }
            }
        }
        if let Some((m_lo, m_hi, d)) = merged {
            self.segments.insert(Key(m_lo), Segment { hi: m_hi, depth: d });
        }
        fresh
    }

    /// Explored space-time area as a box region.
    pub fn to_region(&self) -> Region {
        Region::from_disjoint(
            self.segments
                .iter()
                .filter(|(_, s)| s.depth < 0.0)
                .map(|(k, s)| SpaceTimeBox::new(k.0, s.hi, s.depth, 0.0))
                .collect(),
        )
    }

    /// Explored time-0 strips, merged into maximal intervals.
    pub fn zero_intervals(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (k, s) in &self.segments {
            match out.last_mut() {
                Some(last) if last.1 >= k.0 => last.1 = last.1.max(s.hi),
                _ => out.push((k.0, s.hi)),
            }
        }
        out
    }

    pub fn area(&self) -> f64 {
        self.segments.iter().map(|(k, s)| (s.hi - k.0) * -s.depth).sum()
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }
}
