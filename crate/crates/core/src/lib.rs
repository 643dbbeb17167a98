//! Perfect sampling of the stationary one-dimensional continuous loss
//! network by the backward-forward algorithm, and the analytic
//! subcriticality bounds on the arrival rate under which it terminates.
//!
//! The backward sweep ([`backward`]) explores the free process into the past
//! and collects the clan of ancestors of an observation window; the forward
//! sweep ([`forward`]) replays the loss network on that clan and keeps the
//! calls alive at time 0. [`bounds`] holds the closed-form critical rates and
//! [`experiments`] the Monte Carlo studies built on top of the sampler.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backward;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod forward;
pub mod model;
pub mod streams;

pub use backward::{build_clan, build_point_clan, Clan, ClanOptions, ClanStatus};
pub use bounds::CriticalBounds;
pub use error::{Error, Result};
pub use forward::{clean, extract_sample, perfect_sample, PerfectSample, SampleRecord};
pub use model::{blocks, intersects, Color, Configuration, LengthDistribution, ModelParams, Rect, Window};
