//! Shared fixtures for the benchmarks.

use lossnet_core::{LengthDistribution, ModelParams, Window};

/// Subcritical uniform-length model used across the benches.
pub fn uniform_params(lambda: f64, capacity: u32) -> ModelParams {
    ModelParams::new(lambda, capacity, LengthDistribution::uniform01()).expect("valid parameters")
}

pub fn window(len: f64) -> Window {
    Window::new(0.0, len).expect("valid window")
}
