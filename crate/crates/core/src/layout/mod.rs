//! Invertible serialisations of `[H, W, C]` feature volumes into scan
//! sequences.
//!
//! Every transform here is a pure permutation of element positions (plus
//! replicate-edge padding that is cropped again on the way back), so
//! roundtrips are bit-identical.

mod bssc;
mod gsrm;
mod lssp;

pub use bssc::{bssc_flatten, bssc_order, bssc_unflatten, Traversal};
pub use gsrm::{
    apply_band_permutation, global_correlation, gsrm_order, spectral_correlation_matrix,
    CorrelationMatrix, Direction, Permutation,
};
pub use lssp::{lssp_merge, lssp_partition, LayoutConfig};
