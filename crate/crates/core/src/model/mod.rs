//! End-to-end super-resolution network.
//!
//! ```text
//! F₀  = conv_s(lr)                       shallow features, B → C
//! F_N = CSMG_N(… CSMG_1(F₀))
//! F   = conv_b(F_N) + F₀                 long skip
//! U   = (shuffle₂ ∘ conv_u)^{log₂ s}(F)  C → 4C → C at twice the size
//! sr  = conv_r(U) + bicubic(lr, s)       reconstruction, B bands
//! ```
//!
//! All convolutions are 3×3. Weights are drawn from one seeded stream in
//! the order listed by [`ModelWeights::tensors`].

mod config;
mod file;
mod forward;
mod weights;

pub use config::{default_ca_reduction, Ablation, ModelConfig};
pub use file::{load_weights, load_weights_for, save_weights, WEIGHTS_MAGIC, WEIGHTS_VERSION};
pub use forward::{forward, forward_timed, StageTiming};
pub use weights::{ConvWeights, ModelWeights};
