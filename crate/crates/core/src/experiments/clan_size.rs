use rayon::prelude::*;

use super::{Accumulator, MeanSe};
use crate::backward::{build_clan_with, ClanOptions, ClanStatus};
use crate::error::{Error, Result};
use crate::model::{ModelParams, Window};
use crate::streams::stream;

/// Clan size of one point replication, conditioned on a nonempty
/// generation 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClanSizeSample {
    pub size: usize,
    pub generations: u32,
    /// Draws needed until the point was covered (at least 1).
    pub attempts: u32,
    pub capped: bool,
}

/// Builds point clans at `(x, 0)` from `stream(seed, replication)` until
/// one has a nonempty generation 0, and reports that clan.
pub fn point_clan_size(
    params: &ModelParams,
    x: f64,
    options: &ClanOptions,
    seed: u64,
    replication: u64,
) -> ClanSizeSample {
    let mut rng = stream(seed, replication);
    let window = Window { a: x, b: x };
    let mut attempts = 0;
    loop {
        attempts += 1;
        let clan = build_clan_with(window, params, &mut rng, options);
        if !clan.roots.is_empty() {
            return ClanSizeSample {
                size: clan.len(),
                generations: clan.generations(),
                attempts,
                capped: clan.status == ClanStatus::Capped,
            };
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ClanSizeEstimate {
    pub mean: f64,
    pub se: f64,
    pub reps: usize,
    pub capped: usize,
    pub mean_attempts: f64,
}

/// Mean point-clan size `N` over `reps` replications, conditioned on the
/// point being covered. Capped runs are excluded from the mean and counted
/// separately.
pub fn estimate_mean_clan_size(
    params: &ModelParams,
    x: f64,
    reps: usize,
    cap: usize,
    seed: u64,
) -> Result<ClanSizeEstimate> {
    estimate_mean_clan_size_with(params, x, reps, &ClanOptions::with_cap(cap), seed)
}

pub fn estimate_mean_clan_size_with(
    params: &ModelParams,
    x: f64,
    reps: usize,
    options: &ClanOptions,
    seed: u64,
) -> Result<ClanSizeEstimate> {
    if reps == 0 {
        return Err(Error::InvalidArgument("reps must be >= 1".into()));
    }
    let samples: Vec<ClanSizeSample> =
        (0..reps as u64).into_par_iter().map(|i| point_clan_size(params, x, options, seed, i)).collect();
    let mut sizes = Accumulator::default();
    let mut capped = 0;
    for s in &samples {
        if s.capped {
            capped += 1;
        } else {
            sizes.push(s.size as f64);
        }
    }
    if capped == reps {
        return Err(Error::AllCapped { reps, cap: options.cap });
    }
    let MeanSe { mean, se, .. } = sizes.finish();
    let mean_attempts = samples.iter().map(|s| s.attempts as f64).sum::<f64>() / reps as f64;
    Ok(ClanSizeEstimate { mean, se, reps, capped, mean_attempts })
}
