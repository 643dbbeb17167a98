//! Monte Carlo studies: clan-size statistics, the dominating branching
//! processes, and the critical-rate estimator built on clan sweeps.
//!
//! Replication `i` of a run always draws from `stream(seed, i)`, results are
//! collected in replication order, and every reduction runs sequentially over
//! that order, so outputs do not depend on the thread count.

mod branching;
mod clan_size;
mod colored;
mod fit;
mod sweep;

pub use branching::{offspring_types, simulate_branching_total, simulate_point_branching_total, BranchingEstimate};
pub use clan_size::{
    estimate_mean_clan_size, estimate_mean_clan_size_with, point_clan_size, ClanSizeEstimate, ClanSizeSample,
};
pub use colored::{simulate_colored_branching, ColoredStats, TypeBucket};
pub use fit::{
    estimate_lambda_c, fit_points, fit_reciprocal_log, LambdaEstimate, PolyFit, CONDITION_LIMIT, DEFAULT_DEGREE,
};
pub use sweep::{lambda_grid_sweep, parse_grid, SweepMetadata, SweepRow, SweepTable, CSV_HEADER};

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

impl MeanSe {
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut acc = Accumulator::default();
        for v in values {
            acc.push(v);
        }
        acc.finish()
    }
}

/// Running sums for a mean and its standard error.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    pub(crate) fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub(crate) fn finish(&self) -> MeanSe {
        if self.n == 0 {
            return MeanSe { mean: f64::NAN, se: f64::NAN, n: 0 };
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        let se = if self.n > 1 {
            let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            f64::NAN
        };
        MeanSe { mean, se, n: self.n }
    }
}
