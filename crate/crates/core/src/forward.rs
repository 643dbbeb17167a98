//! Forward sweep: deterministic cleaning of a finished clan under capacity
//! `C`, and extraction of the perfect sample at time 0.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::backward::{build_clan, Clan, ClanStatus, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::model::{blocks, intersects, Configuration, LengthDistribution, ModelParams, Rect, Window};
use crate::streams::stream;

#[derive(Debug, Clone, Copy, PartialEq)]
struct DeathKey(f64);

impl Eq for DeathKey {}

impl PartialOrd for DeathKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DeathKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Replays the loss network on the clan: rectangles are visited in birth
/// order and a birth is accepted unless some point of its basis already
/// carries `capacity` accepted calls.
pub fn clean(clan: &Clan, capacity: u32) -> Result<Vec<Rect>> {
    if clan.status == ClanStatus::Capped {
        return Err(Error::Capped { sampled: clan.sampled });
    }
    Ok(clean_rects(&clan.rects, capacity))
}

/// Birth-order greedy cleaning of an arbitrary rectangle set.
pub fn clean_rects(rects: &[Rect], capacity: u32) -> Vec<Rect> {
    let mut order: Vec<&Rect> = rects.iter().collect();
    order.sort_by(|a, b| a.birth_order(b));

    let mut kept: Vec<Rect> = Vec::new();
    // Accepted calls still alive, keyed by slot; expired lazily by death.
    let mut active: BTreeMap<usize, Rect> = BTreeMap::new();
    let mut expiry: BinaryHeap<Reverse<(DeathKey, usize)>> = BinaryHeap::new();
    for (slot, r) in order.into_iter().enumerate() {
        while let Some(&Reverse((DeathKey(death), s))) = expiry.peek() {
            if death >= r.birth {
                break;
            }
            expiry.pop();
            active.remove(&s);
        }
        if !blocks(r, active.values(), capacity) {
            kept.push(*r);
            active.insert(slot, *r);
            expiry.push(Reverse((DeathKey(r.death), slot)));
        }
    }
    kept
}

/// Capacity-one cleaning by repeated deletion: take the earliest untested
/// rectangle, keep it, and delete every later rectangle that meets it.
///
/// This is an independent implementation of the `C = 1` case of
/// [`clean_rects`], used to cross-check it.
pub fn clean_by_deletion(rects: &[Rect]) -> Vec<Rect> {
    let mut pending: Vec<Rect> = rects.to_vec();
    pending.sort_by(|a, b| a.birth_order(b));
    pending.reverse();
    let mut kept = Vec::new();
    while let Some(first) = pending.pop() {
        pending.retain(|r| !intersects(r, &first));
        kept.push(first);
    }
    kept
}

/// Bases of kept calls alive at time 0 that meet the window.
pub fn extract_sample(kept: &[Rect], window: &Window) -> Configuration {
    let mut calls: Vec<(f64, f64)> =
        kept.iter().filter(|r| r.alive_at(0.0) && r.basis_meets_window(window)).map(|r| (r.xi, r.right())).collect();
    calls.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Configuration { calls }
}

/// Result of one run of the backward-forward sampler.
#[derive(Debug, Clone)]
pub struct PerfectSample {
    pub configuration: Configuration,
    pub clan_size: usize,
    pub generations: u32,
    pub sampled: usize,
}

/// Draws one perfect sample of the stationary loss network on `window`.
///
/// Replication `replication` of run `seed` always yields the same sample.
pub fn perfect_sample(
    window: Window,
    params: &ModelParams,
    seed: u64,
    replication: u64,
    cap: usize,
) -> Result<PerfectSample> {
    let mut rng = stream(seed, replication);
    let clan = build_clan(window, params, &mut rng, cap);
    let kept = clean(&clan, params.capacity())?;
    Ok(PerfectSample {
        configuration: extract_sample(&kept, &window),
        clan_size: clan.len(),
        generations: clan.generations(),
        sampled: clan.sampled,
    })
}

/// [`perfect_sample`] with the default cap and replication 0.
pub fn perfect_sample_default(window: Window, params: &ModelParams, seed: u64) -> Result<PerfectSample> {
    perfect_sample(window, params, seed, 0, DEFAULT_CAP)
}

/// JSON form of a perfect sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub window: (f64, f64),
    pub lambda: f64,
    pub capacity: u32,
    pub pi: LengthDistribution,
    pub seed: u64,
    pub calls: Vec<(f64, f64)>,
    pub clan_size: usize,
    pub generations: u32,
}

impl SampleRecord {
    pub fn new(window: Window, params: &ModelParams, seed: u64, sample: &PerfectSample) -> Self {
        Self {
            window: (window.a, window.b),
            lambda: params.lambda(),
            capacity: params.capacity(),
            pi: params.pi().clone(),
            seed,
            calls: sample.configuration.calls.clone(),
            clan_size: sample.clan_size,
            generations: sample.generations,
        }
    }
}
