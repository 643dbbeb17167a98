//! Clan-size statistics, the optional birth restriction, and domination by
//! the branching process.

mod common;

use common::{ks_two_sample, mean_se};
use lossnet_core::backward::ClanOptions;
use lossnet_core::experiments::{
    estimate_mean_clan_size, point_clan_size, simulate_branching_total, simulate_point_branching_total,
};
use lossnet_core::streams::stream;
use lossnet_core::{LengthDistribution, ModelParams};

fn uniform(lambda: f64) -> ModelParams {
    ModelParams::new(lambda, 1, LengthDistribution::uniform01()).unwrap()
}

#[test]
fn mean_clan_size_grows_with_the_rate() {
    let mut prev = 0.0;
    for lambda in [0.3, 0.5, 0.7] {
        let e = estimate_mean_clan_size(&uniform(lambda), 0.0, 10_000, 1_000_000, 21).unwrap();
        assert_eq!(e.capped, 0);
        assert!(e.mean > prev, "lambda {lambda}: {} <= {prev}", e.mean);
        prev = e.mean;
    }
}

#[test]
fn conditioning_attempts_are_geometric() {
    let lambda = 0.6;
    let params = uniform(lambda);
    let opts = ClanOptions::default();
    let attempts: Vec<f64> = (0..10_000).map(|i| point_clan_size(&params, 0.0, &opts, 22, i).attempts as f64).collect();
    let (m, se) = mean_se(&attempts);
    let p = 1.0 - (-lambda * 0.5f64).exp();
    assert!((m - 1.0 / p).abs() < 3.0 * se, "mean attempts {m}, expected {}", 1.0 / p);
}

#[test]
fn branching_process_dominates_the_clan() {
    for lambda in [0.3, 0.5, 0.7] {
        let params = uniform(lambda);
        let clan = estimate_mean_clan_size(&params, 0.0, 10_000, 1_000_000, 23).unwrap();
        let tree = simulate_point_branching_total(&params, 10_000, 1_000_000, 23);
        assert!(clan.mean <= tree.mean + 3.0 * tree.se, "lambda {lambda}: {} vs {}", clan.mean, tree.mean);
    }
}

#[test]
fn single_root_branching_geometric_total() {
    let params = ModelParams::new(0.5, 1, LengthDistribution::point_mass(0.5).unwrap()).unwrap();
    let e = simulate_branching_total(&params, 0.5, 10_000, 100_000, 24);
    assert!((e.mean - 2.0).abs() < 0.1, "{e:?}");
}

/// The birth restriction drops candidates born before the earliest birth of
/// the current frontier. Those can still be ancestors, so the restricted
/// clans come out smaller in distribution.
#[test]
fn birth_restriction_changes_the_clan_size_law() {
    let params = uniform(0.8);
    let full = ClanOptions::default();
    let restricted = ClanOptions { restrict_births: true, ..ClanOptions::default() };
    let sizes = |opts: &ClanOptions, seed| -> Vec<f64> {
        (0..5_000).map(|i| point_clan_size(&params, 0.0, opts, seed, i).size as f64).collect()
    };
    let a = sizes(&full, 25);
    let b = sizes(&restricted, 26);
    let (d, p) = ks_two_sample(a.clone(), b.clone());
    let (ma, _) = mean_se(&a);
    let (mb, _) = mean_se(&b);
    eprintln!("full mean {ma:.4}, restricted mean {mb:.4}, KS D = {d:.4}, p = {p:.3e}");
    assert!(mb <= ma);
    assert!(p < 0.01, "restriction indistinguishable: p = {p}");
}

#[test]
fn same_stream_same_size() {
    let params = uniform(0.7);
    let opts = ClanOptions::default();
    for i in 0..20 {
        assert_eq!(point_clan_size(&params, 0.0, &opts, 27, i), point_clan_size(&params, 0.0, &opts, 27, i));
    }
    let _ = stream(0, 0);
}
