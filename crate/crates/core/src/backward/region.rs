//! Finite unions of axis-aligned space-time boxes.

use serde::{Deserialize, Serialize};

/// `(x_lo, x_hi) × (t_lo, t_hi)`. Zero-height boxes are allowed and carry no
/// area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl SpaceTimeBox {
    pub fn new(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Self {
        debug_assert!(x_lo <= x_hi && t_lo <= t_hi);
        Self { x_lo, x_hi, t_lo, t_hi }
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        !(self.x_lo < self.x_hi && self.t_lo < self.t_hi)
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        self.x_lo <= x && x < self.x_hi && self.t_lo <= t && t < self.t_hi
    }

    pub fn intersection(&self, other: &SpaceTimeBox) -> Option<SpaceTimeBox> {
        let b = SpaceTimeBox {
            x_lo: self.x_lo.max(other.x_lo),
            x_hi: self.x_hi.min(other.x_hi),
            t_lo: self.t_lo.max(other.t_lo),
            t_hi: self.t_hi.min(other.t_hi),
        };
        (!b.is_empty()).then_some(b)
    }

    /// `self ∖ other` as at most four disjoint boxes: first the slabs below
    /// and above the overlap in time, then the left and right pieces of the
    /// overlapping slab.
    pub fn subtract(&self, other: &SpaceTimeBox) -> Vec<SpaceTimeBox> {
        if self.is_empty() {
            return Vec::new();
        }
        let Some(cut) = self.intersection(other) else {
            return vec![*self];
        };
        let mut out = Vec::with_capacity(4);
        let mut push = |b: SpaceTimeBox| {
            if !b.is_empty() {
                out.push(b);
            }
        };
        push(SpaceTimeBox::new(self.x_lo, self.x_hi, self.t_lo, cut.t_lo));
        push(SpaceTimeBox::new(self.x_lo, self.x_hi, cut.t_hi, self.t_hi));
        push(SpaceTimeBox::new(self.x_lo, cut.x_lo, cut.t_lo, cut.t_hi));
        push(SpaceTimeBox::new(cut.x_hi, self.x_hi, cut.t_lo, cut.t_hi));
        out
    }
}

/// A union of pairwise disjoint boxes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    boxes: Vec<SpaceTimeBox>,
}

impl Region {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A single box. Degenerate boxes are kept so that callers can inspect
    /// them; they contribute no area.
    pub fn from_box(b: SpaceTimeBox) -> Self {
        Self { boxes: vec![b] }
    }

    /// Union of arbitrary, possibly overlapping boxes.
    pub fn union_of<I: IntoIterator<Item = SpaceTimeBox>>(boxes: I) -> Self {
        let mut region = Region::empty();
        for b in boxes {
            region.add(b);
        }
        region
    }

    /// Builds a region from boxes the caller guarantees to be disjoint.
    pub(crate) fn from_disjoint(boxes: Vec<SpaceTimeBox>) -> Self {
        Self { boxes }
    }

    pub fn boxes(&self) -> &[SpaceTimeBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.iter().all(SpaceTimeBox::is_empty)
    }

    pub fn area(&self) -> f64 {
        self.boxes.iter().map(SpaceTimeBox::area).sum()
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        self.boxes.iter().any(|b| b.contains(x, t))
    }

    /// Adds the part of `b` not already covered.
    pub fn add(&mut self, b: SpaceTimeBox) {
        let fresh = Region::from_box(b).subtract(self);
        self.boxes.extend(fresh.boxes);
    }

    /// Disjoint-box decomposition of `self ∖ other`.
    pub fn subtract(&self, other: &Region) -> Region {
        let mut pieces: Vec<SpaceTimeBox> = self.boxes.iter().copied().filter(|b| !b.is_empty()).collect();
        for cutter in other.boxes.iter().filter(|b| !b.is_empty()) {
            pieces = pieces.iter().flat_map(|p| p.subtract(cutter)).collect();
            if pieces.is_empty() {
                break;
            }
        }
        Region { boxes: pieces }
    }

    pub fn intersection_area(&self, other: &Region) -> f64 {
        self.boxes
            .iter()
            .flat_map(|a| other.boxes.iter().filter_map(move |b| a.intersection(b)))
            .map(|b| b.area())
            .sum()
    }
}
