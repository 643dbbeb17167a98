//! Backward sweep: lazy exploration of the stationary free process to build
//! the clan of ancestors of a window.
//!
//! The free process is a space-time Poisson process of calls. Looking back
//! from time 0, two kinds of calls can be ancestors of a call `r`: calls
//! that died during `r`'s life (their death marks fall in
//! `(xi - H, xi + u) × [birth, 0]`) and calls still alive at time 0 whose
//! left end lies in `(xi - H, xi + u)`. Both sets are sampled lazily and
//! every space-time point is sampled at most once.

mod clan;
mod profile;
mod region;

pub use clan::{
    ancestor_closure, build_clan, build_clan_with, build_point_clan, AncestorClosure, Clan, ClanDump, ClanOptions,
    ClanStatus, RectDump, DEFAULT_CAP,
};
pub use profile::{Exploration, ExploredProfile};
pub use region::{Region, SpaceTimeBox};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::model::{ModelParams, Rect};

/// Monotone source of rectangle ids.
#[derive(Debug, Clone, Default)]
pub struct IdSource(u64);

impl IdSource {
    pub fn new() -> Self {
        Self(0)
    }

    pub fn next_id(&mut self) -> u64 {
        let id = self.0;
        self.0 += 1;
        id
    }

    pub fn issued(&self) -> u64 {
        self.0
    }
}

/// Draws a Poisson count with the given mean.
pub fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let draw: f64 = Poisson::new(mean).expect("finite positive mean").sample(rng);
    draw as u64
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// Calls alive at time 0 whose left end lies in the strip `[lo, hi]`.
///
/// Left ends form a rate-`lambda` Poisson process; each call carries a length
/// from `pi` and an age `S ~ Exp(1)`. Lives are truncated at the observation
/// time: `birth = -S`, `death = 0`.
pub fn sample_alive_at_zero<R: Rng + ?Sized>(
    strip: (f64, f64),
    params: &ModelParams,
    rng: &mut R,
    ids: &mut IdSource,
) -> Vec<Rect> {
    let (lo, hi) = strip;
    let width = (hi - lo).max(0.0);
    let n = poisson_count(rng, params.lambda() * width);
    (0..n)
        .map(|_| {
            let xi = lo + width * rng.random::<f64>();
            let u = params.pi().sample(rng);
            let age = exp1(rng);
            Rect::new(ids.next_id(), xi, u, -age, 0.0)
        })
        .collect()
}

/// Calls whose death marks fall in `region`.
///
/// Death marks form a rate-`lambda` Poisson process in space-time; a call
/// dying at `tau` has life `[tau - S, tau]` with `S ~ Exp(1)`.
pub fn sample_deaths_in_region<R: Rng + ?Sized>(
    region: &Region,
    params: &ModelParams,
    rng: &mut R,
    ids: &mut IdSource,
) -> Vec<Rect> {
    let mut out = Vec::new();
    for b in region.boxes() {
        sample_deaths_in_box(b, params, rng, ids, &mut out);
    }
    out
}

pub(crate) fn sample_deaths_in_box<R: Rng + ?Sized>(
    b: &SpaceTimeBox,
    params: &ModelParams,
    rng: &mut R,
    ids: &mut IdSource,
    out: &mut Vec<Rect>,
) {
    let n = poisson_count(rng, params.lambda() * b.area());
    for _ in 0..n {
        let xi = b.x_lo + b.width() * rng.random::<f64>();
        let death = b.t_lo + b.height() * rng.random::<f64>();
        let u = params.pi().sample(rng);
        let life = exp1(rng);
        out.push(Rect::new(ids.next_id(), xi, u, death - life, death));
    }
}

/// The box `(xi - H, xi + u) × [birth, 0]` holding the death marks of every
/// potential ancestor of `r` that died before time 0.
pub fn influence_region(r: &Rect, support_sup: f64) -> Region {
    debug_assert!(support_sup > 0.0);
    Region::from_box(SpaceTimeBox::new(r.xi - support_sup, r.right(), r.birth.min(0.0), 0.0))
}
