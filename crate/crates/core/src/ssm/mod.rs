//! State-space scan engine.
//!
//! Continuous systems `h' = A h + B x, y = C h + D x` are discretised with a
//! zero-order hold and evaluated either as a linear recurrence or, for
//! time-invariant systems, as a causal convolution with the kernel
//! `K̄ = (C B̄, C Ā B̄, …, C Ā^{L-1} B̄)`. `A` is always diagonal and stored
//! as a vector.
//!
//! The selective scan makes `Δ`, `B` and `C` functions of each token; the
//! bidirectional wrapper runs two selective scans in opposite directions,
//! sums them and applies a shared projection.
//!
//! Within one channel the recurrence is inherently sequential; channels and
//! independent sequences can be processed in any order without changing
//! results.

mod bssm;
mod discretize;
mod scan;
mod selective;

pub use bssm::{bssm_forward, BssmWeights};
pub use discretize::{discretize, zoh, DiscretizedSsm, SsmParams, ZOH_SINGULAR_THRESHOLD};
pub use scan::{
    hidden_states, scan_convolutional, scan_kernel, scan_recurrent, ScanKernel, ScanSystem,
};
pub use selective::{selective_scan, SelectiveParams, INITIAL_DELTA};
