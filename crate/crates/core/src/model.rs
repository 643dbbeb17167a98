//! Domain types of the one-dimensional loss network and the interaction
//! predicates that define it.
//!
//! A call is drawn as a space-time rectangle: its basis is the open cable
//! segment `(xi, xi + u)` and its life is the closed interval
//! `[birth, death]`. Two calls interact when both their bases and their
//! lives overlap.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a discrete length law.
const MASS_TOLERANCE: f64 = 1e-12;

/// The call-length law.
///
/// Every constructible variant has compact support, so [`support_sup`] is
/// finite.
///
/// [`support_sup`]: LengthDistribution::support_sup
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLength", into = "RawLength")]
pub struct LengthDistribution {
    kind: LengthKind,
    // Cumulative masses for discrete laws, used for inverse-CDF sampling.
    cumulative: Vec<f64>,
}

/// Variants of [`LengthDistribution`].
#[derive(Debug, Clone, PartialEq)]
pub enum LengthKind {
    PointMass {
        d: f64,
    },
    Uniform01,
    Beta {
        alpha: f64,
        beta: f64,
    },
    /// Atoms `(length, probability)`, sorted by length.
    Discrete {
        atoms: Vec<(f64, f64)>,
    },
}

impl LengthDistribution {
    pub fn point_mass(d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidDistribution(format!("point mass length must be finite and > 0, got {d}")));
        }
        Ok(Self::from_kind(LengthKind::PointMass { d }))
    }

    pub fn uniform01() -> Self {
        Self::from_kind(LengthKind::Uniform01)
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "beta parameters must be finite and > 0, got ({alpha}, {beta})"
            )));
        }
        Ok(Self::from_kind(LengthKind::Beta { alpha, beta }))
    }

    /// A finite discrete law. Atoms must have distinct positive lengths and
    /// masses summing to one within `1e-12`.
    pub fn discrete(atoms: impl Into<Vec<(f64, f64)>>) -> Result<Self> {
        let mut atoms = atoms.into();
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("discrete law needs at least one atom".into()));
        }
        for &(v, p) in &atoms {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidDistribution(format!("atom length must be > 0, got {v}")));
            }
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidDistribution(format!("atom probability must lie in [0, 1], got {p}")));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("atom lengths must be distinct".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("atom probabilities sum to {total}, expected 1")));
        }
        Ok(Self::from_kind(LengthKind::Discrete { atoms }))
    }

    fn from_kind(kind: LengthKind) -> Self {
        let cumulative = match &kind {
            LengthKind::Discrete { atoms } => atoms
                .iter()
                .scan(0.0, |acc, &(_, p)| {
                    *acc += p;
                    Some(*acc)
                })
                .collect(),
            _ => Vec::new(),
        };
        Self { kind, cumulative }
    }

    pub fn kind(&self) -> &LengthKind {
        &self.kind
    }

    /// Atoms of a discrete law (a point mass counts as a single atom).
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match &self.kind {
            LengthKind::PointMass { d } => Some(vec![(*d, 1.0)]),
            LengthKind::Discrete { atoms } => Some(atoms.clone()),
            _ => None,
        }
    }

    /// Exact first and second moments `(E U, E U^2)`.
    pub fn moments(&self) -> (f64, f64) {
        match &self.kind {
            LengthKind::PointMass { d } => (*d, d * d),
            LengthKind::Uniform01 => (0.5, 1.0 / 3.0),
            LengthKind::Beta { alpha, beta } => {
                let s = alpha + beta;
                (alpha / s, alpha * (alpha + 1.0) / (s * (s + 1.0)))
            }
            LengthKind::Discrete { atoms } => {
                atoms.iter().fold((0.0, 0.0), |(m1, m2), &(v, p)| (m1 + p * v, m2 + p * v * v))
            }
        }
    }

    /// Supremum `H` of the support.
    pub fn support_sup(&self) -> f64 {
        match &self.kind {
            LengthKind::PointMass { d } => *d,
            LengthKind::Uniform01 | LengthKind::Beta { .. } => 1.0,
            LengthKind::Discrete { atoms } => atoms.last().map(|a| a.0).unwrap_or(0.0),
        }
    }

    /// Draws one call length. The result is a pure function of the rng
    /// stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            LengthKind::PointMass { d } => *d,
            // 1 - U lies in (0, 1], keeping lengths strictly positive.
            LengthKind::Uniform01 => 1.0 - rng.random::<f64>(),
            LengthKind::Beta { alpha, beta } => {
                let dist = Beta::new(*alpha, *beta).expect("validated at construction");
                let u: f64 = dist.sample(rng);
                u.max(f64::MIN_POSITIVE)
            }
            LengthKind::Discrete { atoms } => {
                let target = rng.random::<f64>();
                let idx = self.cumulative.partition_point(|&c| c <= target).min(atoms.len() - 1);
                atoms[idx].0
            }
        }
    }

    /// Draws from the size-biased law `v pi(dv) / rho1`: the length of the
    /// call covering a fixed point.
    pub fn sample_size_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            LengthKind::PointMass { d } => *d,
            // Density 2v on (0, 1].
            LengthKind::Uniform01 => (1.0 - rng.random::<f64>()).sqrt(),
            LengthKind::Beta { alpha, beta } => {
                let dist = Beta::new(alpha + 1.0, *beta).expect("validated at construction");
                let u: f64 = dist.sample(rng);
                u.max(f64::MIN_POSITIVE)
            }
            LengthKind::Discrete { atoms } => {
                let rho1 = self.moments().0;
                let target = rng.random::<f64>() * rho1;
                let mut acc = 0.0;
                for &(v, p) in atoms {
                    acc += v * p;
                    if target < acc {
                        return v;
                    }
                }
                atoms[atoms.len() - 1].0
            }
        }
    }

    /// Parses the flat CLI grammar
    /// `uniform01 | pointmass:<d> | beta:<a>:<b> | discrete:<v1>:<p1>,<v2>:<p2>,...`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidDistribution(format!("{msg} in length spec `{spec}`"));
        let num = |s: &str| -> Result<f64> { s.trim().parse::<f64>().map_err(|_| bad(&format!("bad number `{s}`"))) };
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (spec, None),
        };
        match (head.trim().to_ascii_lowercase().as_str(), rest) {
            ("uniform01", None) => Ok(Self::uniform01()),
            ("pointmass", Some(r)) => Self::point_mass(num(r)?),
            ("beta", Some(r)) => {
                let (a, b) = r.split_once(':').ok_or_else(|| bad("expected beta:<a>:<b>"))?;
                Self::beta(num(a)?, num(b)?)
            }
            ("discrete", Some(r)) => {
                let atoms = r
                    .split(',')
                    .map(|pair| {
                        let (v, p) = pair.split_once(':').ok_or_else(|| bad("expected <v>:<p>"))?;
                        Ok((num(v)?, num(p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::discrete(atoms)
            }
            _ => Err(bad("unknown distribution")),
        }
    }
}

impl std::fmt::Display for LengthDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            LengthKind::PointMass { d } => write!(f, "pointmass:{d}"),
            LengthKind::Uniform01 => write!(f, "uniform01"),
            LengthKind::Beta { alpha, beta } => write!(f, "beta:{alpha}:{beta}"),
            LengthKind::Discrete { atoms } => {
                write!(f, "discrete:")?;
                for (i, (v, p)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}:{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawLength {
    Uniform01,
    Pointmass { d: f64 },
    Beta { alpha: f64, beta: f64 },
    Discrete { atoms: Vec<(f64, f64)> },
}

impl TryFrom<RawLength> for LengthDistribution {
    type Error = Error;

    fn try_from(raw: RawLength) -> Result<Self> {
        match raw {
            RawLength::Uniform01 => Ok(Self::uniform01()),
            RawLength::Pointmass { d } => Self::point_mass(d),
            RawLength::Beta { alpha, beta } => Self::beta(alpha, beta),
            RawLength::Discrete { atoms } => Self::discrete(atoms),
        }
    }
}

impl From<LengthDistribution> for RawLength {
    fn from(pi: LengthDistribution) -> Self {
        match pi.kind {
            LengthKind::PointMass { d } => RawLength::Pointmass { d },
            LengthKind::Uniform01 => RawLength::Uniform01,
            LengthKind::Beta { alpha, beta } => RawLength::Beta { alpha, beta },
            LengthKind::Discrete { atoms } => RawLength::Discrete { atoms },
        }
    }
}

/// Arrival rate, capacity and call-length law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    lambda: f64,
    capacity: u32,
    pi: LengthDistribution,
}

impl ModelParams {
    pub fn new(lambda: f64, capacity: u32, pi: LengthDistribution) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParams(format!("lambda must be finite and > 0, got {lambda}")));
        }
        if capacity == 0 {
            return Err(Error::InvalidParams("capacity must be >= 1".into()));
        }
        Ok(Self { lambda, capacity, pi })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn pi(&self) -> &LengthDistribution {
        &self.pi
    }

    /// Same capacity and length law at a different arrival rate.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda, self.capacity, self.pi.clone())
    }

    pub fn with_capacity(&self, capacity: u32) -> Result<Self> {
        Self::new(self.lambda, capacity, self.pi.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    #[default]
    Green,
    Black,
}

/// A call cylinder: open basis `(xi, xi + u)` times closed life
/// `[birth, death]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub id: u64,
    pub xi: f64,
    pub u: f64,
    pub birth: f64,
    pub death: f64,
    pub generation: u32,
    pub color: Color,
    /// Acceptance flag of the marked representation. The deterministic
    /// cleaner never reads it.
    pub flag: f64,
}

impl Rect {
    pub fn new(id: u64, xi: f64, u: f64, birth: f64, death: f64) -> Self {
        debug_assert!(u > 0.0, "basis length must be positive");
        debug_assert!(birth <= death, "birth must not follow death");
        Self { id, xi, u, birth, death, generation: 0, color: Color::Green, flag: 0.0 }
    }

    #[inline]
    pub fn right(&self) -> f64 {
        self.xi + self.u
    }

    /// Whether the closed life contains `t`.
    #[inline]
    pub fn alive_at(&self, t: f64) -> bool {
        self.birth <= t && t <= self.death
    }

    /// Whether the open basis meets the open interval `(lo, hi)`.
    #[inline]
    pub fn basis_overlaps(&self, lo: f64, hi: f64) -> bool {
        self.xi.max(lo) < self.right().min(hi)
    }

    /// Whether the open basis meets the closed window `[a, b]`.
    #[inline]
    pub fn basis_meets_window(&self, window: &Window) -> bool {
        self.xi < window.b && self.right() > window.a
    }

    /// Total order used by forward cleaning: `(birth, xi, id)`.
    pub fn birth_order(&self, other: &Rect) -> Ordering {
        self.birth.total_cmp(&other.birth).then(self.xi.total_cmp(&other.xi)).then(self.id.cmp(&other.id))
    }
}

/// Closed observation window `[a, b]`; `a == b` is a point window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub a: f64,
    pub b: f64,
}

impl Window {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::InvalidWindow { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_point(&self) -> bool {
        self.a == self.b
    }
}

/// The calls present at time 0 in the window, as open intervals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub calls: Vec<(f64, f64)>,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.calls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.calls.is_empty()
    }

    /// Number of calls whose open interval contains `x`.
    pub fn coverage_at(&self, x: f64) -> usize {
        self.calls.iter().filter(|&&(l, r)| l < x && x < r).count()
    }

    /// Maximum pointwise coverage, evaluated at the midpoints of the
    /// arrangement of interval endpoints.
    pub fn max_coverage(&self) -> usize {
        max_open_coverage(self.calls.iter().copied(), f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Interaction test: open bases overlap and closed lives overlap.
pub fn intersects(r: &Rect, s: &Rect) -> bool {
    r.xi.max(s.xi) < r.right().min(s.right()) && r.birth.max(s.birth) <= r.death.min(s.death)
}

/// Whether accepting `candidate` at its birth instant would exceed capacity
/// `capacity` somewhere on its basis, given the accepted set `kept`.
///
/// Members of `kept` born after the candidate are ignored.
pub fn blocks<'a, I>(candidate: &Rect, kept: I, capacity: u32) -> bool
where
    I: IntoIterator<Item = &'a Rect>,
{
    let t = candidate.birth;
    let (lo, hi) = (candidate.xi, candidate.right());
    let mut touching = kept.into_iter().filter(|k| k.alive_at(t) && k.basis_overlaps(lo, hi));
    if capacity == 1 {
        return touching.next().is_some();
    }
    let clipped: Vec<(f64, f64)> = touching.map(|k| (k.xi.max(lo), k.right().min(hi))).collect();
    if clipped.len() < capacity as usize {
        return false;
    }
    max_open_coverage(clipped.iter().copied(), lo, hi) >= capacity as usize
}

/// Maximum number of open intervals covering a common point of `(lo, hi)`.
///
/// Coverage is piecewise constant between endpoints, so a sweep over the
/// sorted endpoints is exact.
pub(crate) fn max_open_coverage<I>(intervals: I, lo: f64, hi: f64) -> usize
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut events: Vec<(f64, i32)> = Vec::new();
    for (l, r) in intervals {
        let (l, r) = (l.max(lo), r.min(hi));
        if l < r {
            events.push((l, 1));
            events.push((r, -1));
        }
    }
    // Closings sort before openings at a shared coordinate: open intervals
    // touching at an endpoint do not overlap.
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut depth = 0i32;
    let mut best = 0i32;
    for (_, delta) in events {
        depth += delta;
        best = best.max(depth);
    }
    best as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rect(id: u64, xi: f64, u: f64, birth: f64, death: f64) -> Rect {
        Rect::new(id, xi, u, birth, death)
    }

    /// Composite Simpson rule, used as an independent moment oracle.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
        }
        s * h / 3.0
    }

    #[test]
    fn moments_match_closed_forms() {
        let (m1, m2) = LengthDistribution::uniform01().moments();
        assert_eq!(m1, 0.5);
        assert!((m2 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(LengthDistribution::point_mass(0.5).unwrap().moments(), (0.5, 0.25));

        // Beta(2,2) pdf is 6u(1-u).
        let pdf = |u: f64| 6.0 * u * (1.0 - u);
        let o1 = simpson(|u| u * pdf(u), 0.0, 1.0, 2000);
        let o2 = simpson(|u| u * u * pdf(u), 0.0, 1.0, 2000);
        assert!((o1 - 0.5).abs() < 1e-10 && (o2 - 0.3).abs() < 1e-10);
        let (b1, b2) = LengthDistribution::beta(2.0, 2.0).unwrap().moments();
        assert!((b1 - o1).abs() < 1e-10);
        assert!((b2 - o2).abs() < 1e-10);
    }

    #[test]
    fn support_bounds() {
        assert_eq!(LengthDistribution::uniform01().support_sup(), 1.0);
        assert_eq!(LengthDistribution::point_mass(2.0).unwrap().support_sup(), 2.0);
        let d = LengthDistribution::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
        assert_eq!(d.support_sup(), 2.0);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(LengthDistribution::point_mass(0.0).is_err());
        assert!(LengthDistribution::beta(-1.0, 2.0).is_err());
        assert!(LengthDistribution::discrete(vec![(1.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(LengthDistribution::discrete(vec![(1.0, 0.5), (2.0, 0.4)]).is_err());
        assert!(LengthDistribution::discrete(vec![(-1.0, 1.0)]).is_err());
        assert!(LengthDistribution::discrete(Vec::new()).is_err());
        assert!(ModelParams::new(0.0, 1, LengthDistribution::uniform01()).is_err());
        assert!(ModelParams::new(1.0, 0, LengthDistribution::uniform01()).is_err());
        assert!(Window::new(1.0, 0.0).is_err());
        assert!(Window::new(1.0, 1.0).unwrap().is_point());
    }

    #[test]
    fn sampling_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pm = LengthDistribution::point_mass(0.5).unwrap();
        assert!((0..100).all(|_| pm.sample(&mut rng) == 0.5));

        let n = 100_000;
        for (pi, mean, var) in [
            (LengthDistribution::uniform01(), 0.5, 1.0 / 12.0),
            // Beta(2,1): mean 2/3, variance 1/18.
            (LengthDistribution::beta(2.0, 1.0).unwrap(), 2.0 / 3.0, 1.0 / 18.0),
        ] {
            let draws: Vec<f64> = (0..n).map(|_| pi.sample(&mut rng)).collect();
            assert!(draws.iter().all(|&u| u > 0.0 && u <= 1.0));
            let m = draws.iter().sum::<f64>() / n as f64;
            let se = (var / n as f64).sqrt();
            assert!((m - mean).abs() < 3.0 * se, "{pi}: mean {m} vs {mean}");
        }

        let d = LengthDistribution::discrete(vec![(1.0, 0.25), (3.0, 0.75)]).unwrap();
        let m = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        let se = (0.75f64 * 0.25 * 4.0 / n as f64).sqrt();
        assert!((m - 2.5).abs() < 3.0 * se);
    }

    #[test]
    fn size_biased_means() {
        // E_sb[U] = rho2 / rho1.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        for pi in [
            LengthDistribution::uniform01(),
            LengthDistribution::beta(2.0, 3.0).unwrap(),
            LengthDistribution::discrete(vec![(0.5, 0.5), (2.0, 0.5)]).unwrap(),
        ] {
            let (r1, r2) = pi.moments();
            let draws: Vec<f64> = (0..n).map(|_| pi.sample_size_biased(&mut rng)).collect();
            let m = draws.iter().sum::<f64>() / n as f64;
            let var = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            assert!((m - r2 / r1).abs() < 3.0 * (var / n as f64).sqrt(), "{pi}");
        }
    }

    #[test]
    fn intersects_examples() {
        assert!(!intersects(&rect(0, 0.0, 1.0, -1.0, 0.0), &rect(1, 2.0, 1.0, -1.0, 0.0)));
        assert!(!intersects(&rect(0, 0.0, 1.0, -2.0, -1.0), &rect(1, 0.5, 1.0, -0.9, 0.0)));
        assert!(intersects(&rect(0, 0.0, 1.0, -2.0, -1.0), &rect(1, 0.5, 1.0, -1.0, 0.0)));
        // Spatial touching does not interact.
        assert!(!intersects(&rect(0, 0.0, 1.0, -2.0, 0.0), &rect(1, 1.0, 1.0, -2.0, 0.0)));
    }

    #[test]
    fn blocks_examples() {
        let kept = [rect(0, 0.0, 1.0, -3.0, -1.0)];
        assert!(blocks(&rect(1, 0.5, 1.0, -2.0, 0.0), &kept, 1));

        let kept = [rect(0, 0.0, 0.6, -2.0, 0.0), rect(1, 0.4, 0.6, -1.5, 0.0)];
        assert!(blocks(&rect(2, 0.3, 0.4, -1.0, 0.0), &kept, 2));
        assert!(!blocks(&rect(2, 0.3, 0.4, -1.0, 0.0), &kept, 3));
        // Two kept calls that touch only at an endpoint never stack.
        let kept = [rect(0, 0.0, 0.5, -2.0, 0.0), rect(1, 0.5, 0.5, -2.0, 0.0)];
        assert!(!blocks(&rect(2, 0.0, 1.0, -1.0, 0.0), &kept, 2));

        for c in 1..4 {
            assert!(!blocks(&rect(0, 0.0, 1.0, -1.0, 0.0), &[], c));
        }
    }

    #[test]
    fn spec_grammar_and_json_agree() {
        let cases = [
            ("uniform01", r#"{"type":"uniform01"}"#),
            ("pointmass:0.5", r#"{"type":"pointmass","d":0.5}"#),
            ("beta:2:1", r#"{"type":"beta","alpha":2,"beta":1}"#),
            ("discrete:0.5:0.5,1.0:0.5", r#"{"type":"discrete","atoms":[[0.5,0.5],[1.0,0.5]]}"#),
        ];
        for (spec, json) in cases {
            let a = LengthDistribution::parse_spec(spec).unwrap();
            let b: LengthDistribution = serde_json::from_str(json).unwrap();
            assert_eq!(a, b, "{spec}");
            let back: LengthDistribution = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
            assert_eq!(a, back);
            assert_eq!(LengthDistribution::parse_spec(&a.to_string()).unwrap(), a);
        }
        assert!(LengthDistribution::parse_spec("gamma:1").is_err());
        assert!(LengthDistribution::parse_spec("beta:1").is_err());
        assert!(serde_json::from_str::<LengthDistribution>(r#"{"type":"pointmass","d":-1}"#).is_err());
    }
}
