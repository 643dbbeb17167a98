use std::collections::{HashMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::profile::ExploredProfile;
use super::region::Region;
use super::{sample_alive_at_zero, sample_deaths_in_box, IdSource};
use crate::model::{intersects, ModelParams, Rect, Window};

/// Default bound on the number of sampled rectangles.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClanStatus {
    Complete,
    /// The sampled-rectangle budget ran out before the exploration closed.
    Capped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClanOptions {
    /// Stop with [`ClanStatus::Capped`] once more than `cap` rectangles have
    /// been sampled.
    pub cap: usize,
    /// Drop candidates of each exploration round that were born no later
    /// than the earliest birth of the round's frontier. This discards some
    /// genuine ancestors, so it is off unless explicitly requested.
    pub restrict_births: bool,
}

impl Default for ClanOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP, restrict_births: false }
    }
}

impl ClanOptions {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap, ..Self::default() }
    }
}

/// The clan of ancestors of a window: the calls alive at time 0 over the
/// window (generation 0) and everything reachable from them through the
/// ancestor relation.
#[derive(Debug, Clone)]
pub struct Clan {
    pub rects: Vec<Rect>,
    pub roots: Vec<u64>,
    /// `(child, ancestor)` pairs.
    pub edges: Vec<(u64, u64)>,
    pub status: ClanStatus,
    /// Rectangles sampled from the free process, ancestors or not.
    pub sampled: usize,
    /// Exploration rounds performed.
    pub rounds: usize,
    explored: ExploredProfile,
}

impl Clan {
    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClanStatus::Complete
    }

    /// Number of generations (0 for an empty clan).
    pub fn generations(&self) -> u32 {
        self.rects.iter().map(|r| r.generation + 1).max().unwrap_or(0)
    }

    pub fn generation_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.generations() as usize];
        for r in &self.rects {
            sizes[r.generation as usize] += 1;
        }
        sizes
    }

    /// Space-time area where death marks were sampled.
    pub fn explored_region(&self) -> Region {
        self.explored.to_region()
    }

    /// Spatial strips where calls alive at time 0 were sampled.
    pub fn explored_zero_intervals(&self) -> Vec<(f64, f64)> {
        self.explored.zero_intervals()
    }

    pub fn explored_area(&self) -> f64 {
        self.explored.area()
    }

    pub fn dump(&self) -> ClanDump {
        ClanDump {
            status: self.status,
            rects: self
                .rects
                .iter()
                .map(|r| RectDump { id: r.id, xi: r.xi, u: r.u, birth: r.birth, death: r.death, gen: r.generation })
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

/// JSON form of a clan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClanDump {
    pub status: ClanStatus,
    pub rects: Vec<RectDump>,
    pub edges: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectDump {
    pub id: u64,
    pub xi: f64,
    pub u: f64,
    pub birth: f64,
    pub death: f64,
    pub gen: u32,
}

/// Rectangles reachable from the roots through ancestor edges, with
/// generations set to BFS depth.
#[derive(Debug, Clone, PartialEq)]
pub struct AncestorClosure {
    pub rects: Vec<Rect>,
    pub edges: Vec<(u64, u64)>,
}

pub fn ancestor_closure(rects: &[Rect], edges: &[(u64, u64)], roots: &[u64]) -> AncestorClosure {
    let mut ancestors: HashMap<u64, Vec<u64>> = HashMap::new();
    for &(child, anc) in edges {
        ancestors.entry(child).or_default().push(anc);
    }
    let mut depth: HashMap<u64, u32> = HashMap::with_capacity(rects.len());
    let mut queue = VecDeque::new();
    for &root in roots {
        if depth.insert(root, 0).is_none() {
            queue.push_back(root);
        }
    }
    while let Some(id) = queue.pop_front() {
        let next = depth[&id] + 1;
        for &anc in ancestors.get(&id).map(Vec::as_slice).unwrap_or(&[]) {
            depth.entry(anc).or_insert_with(|| {
                queue.push_back(anc);
                next
            });
        }
    }
    let rects = rects.iter().filter_map(|r| depth.get(&r.id).map(|&g| Rect { generation: g, ..*r })).collect();
    let edges = edges.iter().copied().filter(|(c, a)| depth.contains_key(c) && depth.contains_key(a)).collect();
    AncestorClosure { rects, edges }
}

/// Clan of ancestors of `window` with the default options and the given cap.
pub fn build_clan<R: Rng + ?Sized>(window: Window, params: &ModelParams, rng: &mut R, cap: usize) -> Clan {
    build_clan_with(window, params, rng, &ClanOptions::with_cap(cap))
}

/// Clan of the space-time point `(x, 0)`: generation 0 is the set of calls
/// covering `x` at time 0.
pub fn build_point_clan<R: Rng + ?Sized>(x: f64, params: &ModelParams, rng: &mut R, cap: usize) -> Clan {
    build_clan(Window { a: x, b: x }, params, rng, cap)
}

pub fn build_clan_with<R: Rng + ?Sized>(
    window: Window,
    params: &ModelParams,
    rng: &mut R,
    options: &ClanOptions,
) -> Clan {
    let h = params.pi().support_sup();
    let mut ids = IdSource::new();
    let mut explored = ExploredProfile::new();
    let mut pool: Vec<Rect> = Vec::new();
    let mut index = AncestorIndex::new(h);

    // Calls alive at time 0 with left end in [a - H, b]; those meeting the
    // window are generation 0.
    let strip = (window.a - h, window.b);
    explored.explore(strip.0, strip.1, 0.0);
    let alive = sample_alive_at_zero(strip, params, rng, &mut ids);
    let mut generation: Vec<Option<u32>> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();
    for r in alive {
        let idx = pool.len();
        generation.push(r.basis_meets_window(&window).then_some(0));
        if generation[idx].is_some() {
            frontier.push(idx);
        }
        index.insert(idx, &r);
        pool.push(r);
    }
    let roots: Vec<u64> = frontier.iter().map(|&i| pool[i].id).collect();

    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut status = ClanStatus::Complete;
    let mut rounds = 0;
    let mut fresh: Vec<Rect> = Vec::new();

    if pool.len() > options.cap {
        status = ClanStatus::Capped;
        frontier.clear();
    }

    'rounds: while !frontier.is_empty() {
        rounds += 1;
        let min_birth = frontier.iter().map(|&i| pool[i].birth).fold(f64::INFINITY, f64::min);

        for &i in &frontier {
            let r = pool[i];
            let exploration = explored.explore(r.xi - h, r.right(), r.birth.min(0.0));
            fresh.clear();
            for b in &exploration.boxes {
                sample_deaths_in_box(b, params, rng, &mut ids, &mut fresh);
            }
            for &s in &exploration.strips {
                fresh.extend(sample_alive_at_zero(s, params, rng, &mut ids));
            }
            for f in fresh.drain(..) {
                if options.restrict_births && f.birth <= min_birth {
                    continue;
                }
                let idx = pool.len();
                index.insert(idx, &f);
                pool.push(f);
                generation.push(None);
            }
            if pool.len() > options.cap {
                status = ClanStatus::Capped;
                break 'rounds;
            }
        }

        let mut next = Vec::new();
        for &i in &frontier {
            let r = pool[i];
            let child_gen = generation[i].expect("frontier members are in the clan") + 1;
            for j in index.candidates(&r) {
                let a = &pool[j];
                if j != i && a.birth <= r.birth && intersects(a, &r) {
                    edges.push((r.id, a.id));
                    if generation[j].is_none() {
                        generation[j] = Some(child_gen);
                        next.push(j);
                    }
                }
            }
        }
        frontier = next;
    }

    let sampled = pool.len();
    let closure = ancestor_closure(&pool, &edges, &roots);
    Clan { rects: closure.rects, roots, edges: closure.edges, status, sampled, rounds, explored }
}

/// Grid over (left end, life) used to find ancestor candidates.
///
/// A rectangle is filed under the column of its left end and under every
/// unit time row its life touches, so all rectangles alive at time `t` sit
/// in row `floor(t)`.
struct AncestorIndex {
    cell_width: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl AncestorIndex {
    fn new(cell_width: f64) -> Self {
        Self { cell_width, cells: HashMap::new() }
    }

    fn column(&self, x: f64) -> i64 {
        (x / self.cell_width).floor() as i64
    }

    fn insert(&mut self, idx: usize, r: &Rect) {
        let col = self.column(r.xi);
        for row in (r.birth.floor() as i64)..=(r.death.floor() as i64) {
            self.cells.entry((col, row)).or_default().push(idx);
        }
    }

    /// Rectangles that may be ancestors of `r`: left end in
    /// `(r.xi - H, r.right())` and life touching `r.birth`'s row.
    fn candidates<'a>(&'a self, r: &Rect) -> impl Iterator<Item = usize> + 'a {
        let row = r.birth.floor() as i64;
        let first = self.column(r.xi - self.cell_width);
        let last = self.column(r.right());
        (first..=last).filter_map(move |col| self.cells.get(&(col, row))).flat_map(|v| v.iter().copied())
    }
}
