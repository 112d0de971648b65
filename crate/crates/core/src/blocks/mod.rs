//! Composite network blocks.
//!
//! Both Mamba blocks share one residual shape:
//!
//! ```text
//! F̂   = Mixer(LN₁(F)) + CA(LN₁(F)) + F
//! out = MLP(LN₂(F̂)) + F̂
//! ```
//!
//! where `LN₁(F)` is evaluated once and fed to both branches. The local
//! block's mixer partitions the volume into 3-D windows and runs a
//! bidirectional selective scan inside each window; the global block's
//! mixer reorders bands by global spectral correlation, scans the whole
//! volume, and restores the original band order before the residual
//! addition.
//!
//! A CSSM is a local block followed by a global block; a group (CSMG) is a
//! stack of CSSMs, a 3×3 tail convolution and a group-level residual.

mod attention;
mod group;
mod mamba;
mod weights;

pub use attention::{channel_attention, mlp};
pub use group::{csmg_forward, cssm_forward};
pub use mamba::{gscb_forward, gscm, lssb_forward, lssm, mamba_block};
pub use weights::{
    BlockConfig, ChannelAttentionWeights, CsmgWeights, CssmWeights, LayerNormWeights,
    MambaBlockWeights, MlpWeights,
};
