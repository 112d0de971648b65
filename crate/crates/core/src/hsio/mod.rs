//! Cube container, synthetic cubes, degradation and patch extraction.
//!
//! Cubes live in memory in the canonical `[H, W, B]` layout with samples in
//! `[0, 1]`; on disk the payload is band-sequential.

mod cube;
mod format;
mod patches;
mod synth;

pub use cube::HsiCube;
pub use format::{
    decode_cube, encode_cube, import_raw, load_cube, save_cube, write_atomic, SampleType,
    CUBE_HEADER_LEN, CUBE_MAGIC, CUBE_VERSION,
};
pub use patches::{degrade, extract_patches};
pub use synth::{smooth_gradient_bound, synth_cube, SynthProfile};
