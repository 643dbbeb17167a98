//! The multitype Galton–Watson process dominating the clan: an individual of
//! length `w` has Poisson(`lambda pi(v) (w + v)`) children of length `v`.

use rand::Rng;
use rayon::prelude::*;

use super::{Accumulator, MeanSe};
use crate::backward::poisson_count;
use crate::model::ModelParams;
use crate::streams::stream;

/// Appends the child lengths of one individual of length `w` to `out`.
///
/// Discrete laws draw one Poisson count per atom. Other laws draw the total
/// count from Poisson(`lambda (w + rho1)`) and each child length from the
/// mixture `pi(v) (w + v) / (w + rho1)`, i.e. from `pi` with probability
/// `w / (w + rho1)` and from the size-biased law otherwise.
pub fn offspring_types<R: Rng + ?Sized>(params: &ModelParams, w: f64, rng: &mut R, out: &mut Vec<f64>) {
    let lambda = params.lambda();
    let pi = params.pi();
    if let Some(atoms) = pi.atoms() {
        for (v, p) in atoms {
            let n = poisson_count(rng, lambda * p * (w + v));
            out.extend(std::iter::repeat_n(v, n as usize));
        }
        return;
    }
    let rho1 = pi.moments().0;
    let n = poisson_count(rng, lambda * (w + rho1));
    let plain = w / (w + rho1);
    for _ in 0..n {
        let v = if rng.random::<f64>() < plain { pi.sample(rng) } else { pi.sample_size_biased(rng) };
        out.push(v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BranchingEstimate {
    /// Mean total population (roots included) over runs that went extinct
    /// within the cap.
    pub mean: f64,
    pub se: f64,
    pub reps: usize,
    pub capped: usize,
    pub extinct_fraction: f64,
}

/// Total population started from `roots`, or `None` once it exceeds `cap`.
fn total_population<R: Rng + ?Sized>(params: &ModelParams, roots: &[f64], cap: usize, rng: &mut R) -> Option<usize> {
    let mut stack: Vec<f64> = roots.to_vec();
    let mut total = stack.len();
    if total > cap {
        return None;
    }
    let mut children = Vec::new();
    while let Some(w) = stack.pop() {
        children.clear();
        offspring_types(params, w, rng, &mut children);
        total += children.len();
        if total > cap {
            return None;
        }
        stack.extend_from_slice(&children);
    }
    Some(total)
}

fn summarize(totals: &[Option<usize>]) -> BranchingEstimate {
    let mut acc = Accumulator::default();
    for t in totals.iter().flatten() {
        acc.push(*t as f64);
    }
    let MeanSe { mean, se, n } = acc.finish();
    BranchingEstimate {
        mean,
        se,
        reps: totals.len(),
        capped: totals.len() - n,
        extinct_fraction: n as f64 / totals.len().max(1) as f64,
    }
}

/// Total progeny of a single root of length `root_type`.
pub fn simulate_branching_total(
    params: &ModelParams,
    root_type: f64,
    reps: usize,
    cap: usize,
    seed: u64,
) -> BranchingEstimate {
    let totals: Vec<Option<usize>> = (0..reps as u64)
        .into_par_iter()
        .map(|i| total_population(params, &[root_type], cap, &mut stream(seed, i)))
        .collect();
    summarize(&totals)
}

/// Branching counterpart of the conditioned point clan: the roots are the
/// calls covering a point (Poisson(`lambda rho1`) of them, conditioned to be
/// at least one, with size-biased lengths).
pub fn simulate_point_branching_total(params: &ModelParams, reps: usize, cap: usize, seed: u64) -> BranchingEstimate {
    let mean_roots = params.lambda() * params.pi().moments().0;
    let totals: Vec<Option<usize>> = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let n = loop {
                let n = poisson_count(&mut rng, mean_roots);
                if n > 0 {
                    break n;
                }
            };
            let roots: Vec<f64> = (0..n).map(|_| params.pi().sample_size_biased(&mut rng)).collect();
            total_population(params, &roots, cap, &mut rng)
        })
        .collect();
    summarize(&totals)
}
