//! Hyperspectral image super-resolution built on selective state-space scans.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: dense `f64` tensors, deterministic RNG, convolution,
//!   normalisation, pixel shuffle, bicubic resampling and Xavier init.
//! * [`ssm`]: zero-order-hold discretisation, recurrent and convolutional
//!   scans, the selective (input-dependent) scan and the bidirectional
//!   wrapper.
//! * [`layout`]: invertible serialisations of `H × W × C` volumes into scan
//!   sequences (3-D window partitioning, correlation-driven band reordering,
//!   serpentine spatial-spectral traversal).
//! * [`blocks`]: channel attention, the local and global Mamba blocks, and
//!   their grouping.
//! * [`model`]: the end-to-end network, configuration, initialisation and the
//!   weight file format.
//! * [`quality`]: training losses with analytic gradients and the evaluation
//!   metric suite.
//! * [`hsio`]: cube container format, synthetic cubes, degradation and patch
//!   extraction.
//!
//! All tensors use the canonical layout: row-major over height, then width,
//! with the channel axis fastest.

pub mod bench;
pub mod blocks;
mod error;
pub mod hsio;
pub mod layout;
pub mod model;
pub mod numerics;
pub mod quality;
pub mod selftest;
pub mod ssm;

pub use error::{Error, Result};
pub use hsio::HsiCube;
pub use model::{ModelConfig, ModelWeights};
pub use numerics::{Rng, Tensor};
