//! Dense array substrate and the generic neural primitives used by every
//! other module.
//!
//! Conventions shared by everything in here:
//!
//! * 3-D feature maps are `[height, width, channels]`, row-major with the
//!   channel axis fastest.
//! * Convolution is cross-correlation (no kernel flip) with zero "same"
//!   padding.
//! * Layer normalisation uses [`LAYER_NORM_EPS`] inside the square root.
//! * Bicubic resampling uses the Keys kernel with `a = -0.5` and edge
//!   replication at the borders.

mod bicubic;
mod conv;
mod init;
mod layer;
mod rng;
mod shuffle;
mod tensor;

pub use bicubic::{bicubic_kernel, bicubic_rescale, bicubic_resize, BICUBIC_A};
pub use conv::conv2d;
pub use init::{xavier_bound, xavier_init, Fans};
pub use layer::{
    add, global_average_pool, layer_norm, linear, mul, relu, sigmoid, softplus, softplus_inverse,
    LAYER_NORM_EPS,
};
pub use rng::Rng;
pub use shuffle::{pixel_shuffle, pixel_unshuffle};
pub use tensor::Tensor;

/// A `[height, width, channels]` tensor.
pub type FeatureMap = Tensor;
