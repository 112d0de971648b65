use std::time::{Duration, Instant};

use super::{ModelConfig, ModelWeights};
use crate::blocks::csmg_forward;
use crate::numerics::{add, bicubic_resize, conv2d, pixel_shuffle, Tensor};
use crate::{Error, Result};

/// Wall time of one named pipeline stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageTiming {
    pub stage: String,
    pub elapsed: Duration,
}

/// Super-resolves `lr` (`[H, W, B]`) to `[sH, sW, B]`. The output is not
/// clamped.
pub fn forward(lr: &Tensor, cfg: &ModelConfig, weights: &ModelWeights) -> Result<Tensor> {
    forward_timed(lr, cfg, weights).map(|(sr, _)| sr)
}

/// [`forward`] plus per-stage wall times.
pub fn forward_timed(
    lr: &Tensor,
    cfg: &ModelConfig,
    weights: &ModelWeights,
) -> Result<(Tensor, Vec<StageTiming>)> {
    cfg.validate()?;
    let (h, w, b) = lr.dims3()?;
    if b != cfg.bands {
        return Err(Error::Shape(format!(
            "input has {b} bands, model expects {}",
            cfg.bands
        )));
    }
    if weights.groups.len() != cfg.groups || weights.upsample.len() != cfg.upsample_stages() {
        return Err(Error::ConfigMismatch {
            expected: cfg.to_string(),
            found: format!(
                "weights with {} groups and {} upsampling stages",
                weights.groups.len(),
                weights.upsample.len()
            ),
        });
    }
    if let Some(index) = lr.first_non_finite() {
        return Err(Error::NonFinite { index });
    }
    let block_cfg = cfg.block_config()?;

    let mut timings = Vec::new();
    let mut timed = |stage: String, start: Instant| {
        timings.push(StageTiming {
            stage,
            elapsed: start.elapsed(),
        })
    };

    let t = Instant::now();
    let shallow = conv2d(lr, &weights.shallow.kernel, &weights.shallow.bias)?;
    timed("shallow".into(), t);

    let mut deep = shallow.clone();
    for (i, group) in weights.groups.iter().enumerate() {
        let t = Instant::now();
        deep = csmg_forward(&deep, group, &block_cfg)?;
        timed(format!("group{}", i + 1), t);
    }

    let t = Instant::now();
    let mut x = add(&conv2d(&deep, &weights.body.kernel, &weights.body.bias)?, &shallow)?;
    timed("body".into(), t);

    for (i, stage) in weights.upsample.iter().enumerate() {
        let t = Instant::now();
        x = pixel_shuffle(&conv2d(&x, &stage.kernel, &stage.bias)?, 2)?;
        timed(format!("upsample{}", i + 1), t);
    }

    let t = Instant::now();
    let recon = conv2d(&x, &weights.reconstruct.kernel, &weights.reconstruct.bias)?;
    timed("reconstruct".into(), t);

    let t = Instant::now();
    let skip = bicubic_resize(lr, h * cfg.scale, w * cfg.scale)?;
    let sr = add(&recon, &skip)?;
    timed("bicubic_skip".into(), t);
    Ok((sr, timings))
}
