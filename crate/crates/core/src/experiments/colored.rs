//! Two-generation coloured branching process.
//!
//! Individuals carry explicit geometry. A child `V` of length `v` of a parent
//! with basis `(xi, xi + u)` and birth `b` has its left end uniform on
//! `(xi - v, xi + u)`, death `b + Exp(1)` and birth `b - Exp(1)`. From the
//! third generation on, a child of a green parent is black when it would
//! also be an ancestor of its grandparent `G`: its left end lies in
//! `L = [max(xi - v, xi_G - v), min(xi + u, xi_G + u_G)]` and it is still
//! alive at `G`'s birth. Children of black parents are black.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use super::branching::offspring_types;
use super::{Accumulator, MeanSe};
use crate::error::{Error, Result};
use crate::model::{Color, ModelParams};
use crate::streams::stream;

/// Population bound per replication.
const COLORED_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy)]
struct Individual {
    xi: f64,
    u: f64,
    birth: f64,
    color: Color,
    parent: Option<usize>,
    generation: u32,
}

/// Offspring statistics for one child-length class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeBucket {
    /// Child length, or `None` when all lengths are pooled (continuous laws).
    pub v: Option<f64>,
    /// `pi(v)`, or 1 when pooled.
    pub mass: f64,
    /// `v pi(v)`, or `rho1` when pooled.
    pub size_mass: f64,
    pub black: MeanSe,
    pub green: MeanSe,
    pub total: MeanSe,
    /// `lambda pi(v) v / 2`.
    pub black_lower_bound: f64,
    /// `lambda pi(v) (mean_u + v / 2)`.
    pub green_upper_bound: f64,
    /// `lambda pi(v) (mean_u + v)`.
    pub total_expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColoredStats {
    /// Green parents with a (necessarily green) parent of their own whose
    /// offspring were observed.
    pub green_green_parents: usize,
    /// Mean length of those parents.
    pub mean_parent_u: f64,
    pub buckets: Vec<TypeBucket>,
    pub black_parent_children: usize,
    pub green_children_of_black: usize,
    /// `E exp(-(birth_G - birth_P))` over green-green parents `P`.
    pub birth_gap: MeanSe,
    pub capped_runs: usize,
}

#[derive(Default)]
struct RunTally {
    // Per green-green parent: (u, black counts per bucket, green counts per bucket).
    parents: Vec<(f64, Vec<u32>, Vec<u32>)>,
    gaps: Vec<f64>,
    black_parent_children: usize,
    green_children_of_black: usize,
    capped: bool,
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

fn run_one(params: &ModelParams, generations: u32, atoms: &Option<Vec<(f64, f64)>>, rng: &mut impl Rng) -> RunTally {
    let n_buckets = atoms.as_ref().map_or(1, Vec::len);
    let bucket_of = |v: f64| -> usize { atoms.as_ref().and_then(|a| a.iter().position(|&(x, _)| x == v)).unwrap_or(0) };
    let mut tally = RunTally::default();

    // The root covers (0, 0): size-biased length, alive at time 0.
    let u = params.pi().sample_size_biased(rng);
    let mut pop = vec![Individual {
        xi: -u * rng.random::<f64>(),
        u,
        birth: -exp1(rng),
        color: Color::Green,
        parent: None,
        generation: 0,
    }];
    let mut children = Vec::new();
    let mut next = 0;
    while next < pop.len() {
        let p = pop[next];
        next += 1;
        if p.generation + 1 >= generations {
            continue;
        }
        children.clear();
        offspring_types(params, p.u, rng, &mut children);
        let grandparent = p.parent.map(|g| pop[g]);
        let mut black = vec![0u32; n_buckets];
        let mut green = vec![0u32; n_buckets];
        for &v in &children {
            let xi = p.xi - v + (p.u + v) * rng.random::<f64>();
            let death = p.birth + exp1(rng);
            let birth = p.birth - exp1(rng);
            let color = match (p.color, grandparent) {
                (Color::Black, _) => Color::Black,
                (Color::Green, Some(g)) => {
                    let lo = (p.xi - v).max(g.xi - v);
                    let hi = (p.xi + p.u).min(g.xi + g.u);
                    if lo <= xi && xi <= hi && death >= g.birth {
                        Color::Black
                    } else {
                        Color::Green
                    }
                }
                (Color::Green, None) => Color::Green,
            };
            if p.color == Color::Black {
                tally.black_parent_children += 1;
                if color == Color::Green {
                    tally.green_children_of_black += 1;
                }
            }
            match color {
                Color::Black => black[bucket_of(v)] += 1,
                Color::Green => green[bucket_of(v)] += 1,
            }
            pop.push(Individual { xi, u: v, birth, color, parent: Some(next - 1), generation: p.generation + 1 });
        }
        if let (Color::Green, Some(g)) = (p.color, grandparent) {
            tally.parents.push((p.u, black, green));
            tally.gaps.push((-(g.birth - p.birth)).exp());
        }
        if pop.len() > COLORED_CAP {
            tally.capped = true;
            break;
        }
    }
    tally
}

/// Simulates `reps` coloured trees of `generations` generations and
/// estimates the conditional offspring means of green parents with green
/// grandparents, per child length.
pub fn simulate_colored_branching(
    params: &ModelParams,
    generations: u32,
    reps: usize,
    seed: u64,
) -> Result<ColoredStats> {
    if generations < 3 {
        return Err(Error::InvalidArgument("coloured branching needs at least 3 generations".into()));
    }
    let atoms = params.pi().atoms();
    let tallies: Vec<RunTally> =
        (0..reps as u64).into_par_iter().map(|i| run_one(params, generations, &atoms, &mut stream(seed, i))).collect();

    let n_buckets = atoms.as_ref().map_or(1, Vec::len);
    let mut black = vec![Accumulator::default(); n_buckets];
    let mut green = vec![Accumulator::default(); n_buckets];
    let mut total = vec![Accumulator::default(); n_buckets];
    let mut u_sum = 0.0;
    let mut parents = 0usize;
    let mut gaps = Accumulator::default();
    let (mut bpc, mut gcb, mut capped_runs) = (0, 0, 0);
    for t in &tallies {
        for (u, b, g) in &t.parents {
            parents += 1;
            u_sum += u;
            for k in 0..n_buckets {
                black[k].push(b[k] as f64);
                green[k].push(g[k] as f64);
                total[k].push((b[k] + g[k]) as f64);
            }
        }
        for &gap in &t.gaps {
            gaps.push(gap);
        }
        bpc += t.black_parent_children;
        gcb += t.green_children_of_black;
        capped_runs += t.capped as usize;
    }
    let mean_u = if parents > 0 { u_sum / parents as f64 } else { f64::NAN };
    let lambda = params.lambda();
    let classes: Vec<(Option<f64>, f64, f64)> = match &atoms {
        Some(a) => a.iter().map(|&(v, p)| (Some(v), p, v * p)).collect(),
        None => vec![(None, 1.0, params.pi().moments().0)],
    };
    let buckets = classes
        .into_iter()
        .enumerate()
        .map(|(k, (v, mass, size_mass))| TypeBucket {
            v,
            mass,
            size_mass,
            black: black[k].finish(),
            green: green[k].finish(),
            total: total[k].finish(),
            black_lower_bound: 0.5 * lambda * size_mass,
            green_upper_bound: lambda * (mass * mean_u + 0.5 * size_mass),
            total_expected: lambda * (mass * mean_u + size_mass),
        })
        .collect();
    Ok(ColoredStats {
        green_green_parents: parents,
        mean_parent_u: mean_u,
        buckets,
        black_parent_children: bpc,
        green_children_of_black: gcb,
        birth_gap: gaps.finish(),
        capped_runs,
    })
}
