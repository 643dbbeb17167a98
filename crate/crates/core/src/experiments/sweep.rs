//! Clan-size sweeps over a grid of arrival rates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::clan_size::estimate_mean_clan_size;
use crate::error::{Error, Result};
use crate::model::{LengthDistribution, ModelParams};
use crate::streams::GENERATOR_NAME;

pub const CSV_HEADER: &str = "lambda,reps,mean_N,se_N,capped";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub reps: usize,
    /// Mean over non-capped replications; NaN when every run was capped.
    pub mean_n: f64,
    pub se_n: f64,
    pub capped: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn new(rows: Vec<SweepRow>) -> Result<Self> {
        if rows.windows(2).any(|w| !(w[0].lambda < w[1].lambda)) {
            return Err(Error::InvalidArgument("sweep lambdas must be strictly increasing".into()));
        }
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.lambda).collect()
    }

    /// CSV text with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{:?},{},{:?},{:?},{}", r.lambda, r.reps, r.mean_n, r.se_n, r.capped);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::InvalidArgument(format!("csv line {line}: {what}"));
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == CSV_HEADER => {}
            _ => return Err(bad(1, &format!("expected header `{CSV_HEADER}`"))),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 5 {
                return Err(bad(i + 1, "expected 5 fields"));
            }
            let float = |s: &str| s.parse::<f64>().map_err(|_| bad(i + 1, &format!("bad number `{s}`")));
            let int = |s: &str| s.parse::<usize>().map_err(|_| bad(i + 1, &format!("bad count `{s}`")));
            rows.push(SweepRow {
                lambda: float(f[0])?,
                reps: int(f[1])?,
                mean_n: float(f[2])?,
                se_n: float(f[3])?,
                capped: int(f[4])?,
            });
        }
        Self::new(rows)
    }
}

/// Run metadata written next to a sweep CSV. Holds everything needed to
/// regenerate the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub seed: u64,
    pub cap: usize,
    pub pi: LengthDistribution,
    pub conditioning: String,
    pub generator: String,
    pub reps: usize,
    pub point: f64,
    pub lambdas: Vec<f64>,
    /// Capped runs are excluded from `mean_N` and counted in `capped`.
    pub capped_policy: String,
}

impl SweepMetadata {
    pub fn new(pi: &LengthDistribution, lambdas: &[f64], reps: usize, cap: usize, seed: u64) -> Self {
        Self {
            seed,
            cap,
            pi: pi.clone(),
            conditioning: "nonempty_gen0".into(),
            generator: GENERATOR_NAME.into(),
            reps,
            point: 0.0,
            lambdas: lambdas.to_vec(),
            capped_policy: "excluded_from_mean".into(),
        }
    }
}

/// Point-clan size statistics at each rate of `grid`. Every rate reuses the
/// replication streams `0..reps`, so neighbouring rows are positively
/// correlated.
pub fn lambda_grid_sweep(base: &ModelParams, grid: &[f64], reps: usize, cap: usize, seed: u64) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let params = base.with_lambda(lambda)?;
        let row = match estimate_mean_clan_size(&params, 0.0, reps, cap, seed) {
            Ok(e) => SweepRow { lambda, reps, mean_n: e.mean, se_n: e.se, capped: e.capped },
            Err(Error::AllCapped { .. }) => {
                log::warn!("all {reps} runs capped at lambda = {lambda}");
                SweepRow { lambda, reps, mean_n: f64::NAN, se_n: f64::NAN, capped: reps }
            }
            Err(e) => return Err(e),
        };
        log::info!("lambda = {lambda}: mean N = {} ({} capped)", row.mean_n, row.capped);
        rows.push(row);
    }
    SweepTable::new(rows)
}

/// Parses `a:b:step` into `a, a + step, ...` up to `b` inclusive (with a
/// small tolerance for rounding).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("grid `{spec}` is not a:b:step with a <= b, step > 0"));
    let parts: Vec<f64> =
        spec.split(':').map(|s| s.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(a.is_finite() && b.is_finite() && step > 0.0 && a <= b) {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    // Round to the decimals written in the spec so 0.1 steps give 1.2, not
    // 1.2000000000000002.
    let decimals = spec.split(':').map(|s| s.trim().split_once('.').map_or(0, |(_, f)| f.len())).max().unwrap_or(0);
    Ok((0..=n)
        .map(|k| {
            let x = a + k as f64 * step;
            if decimals <= 15 {
                format!("{x:.decimals$}").parse().unwrap_or(x)
            } else {
                x
            }
        })
        .collect())
}
