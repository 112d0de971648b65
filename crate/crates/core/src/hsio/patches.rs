use super::HsiCube;
use crate::numerics::{bicubic_resize, Tensor};
use crate::{Error, Result};

/// Bicubic downsampling by `scale`, clamped back into `[0, 1]`.
pub fn degrade(hr: &HsiCube, scale: usize) -> Result<HsiCube> {
    let (h, w, _) = hr.dims();
    if scale == 0 || h % scale != 0 || w % scale != 0 {
        return Err(Error::InvalidArgument(format!(
            "{h}x{w} is not divisible by scale {scale}"
        )));
    }
    HsiCube::from_clamped(bicubic_resize(hr.tensor(), h / scale, w / scale)?)
}

/// `patch × patch` crops in raster order of their top-left corners.
pub fn extract_patches(cube: &HsiCube, patch: usize, stride: usize) -> Result<Vec<HsiCube>> {
    let (h, w, b) = cube.dims();
    if patch == 0 || stride == 0 {
        return Err(Error::InvalidArgument("patch and stride must be positive".into()));
    }
    if patch > h || patch > w {
        return Err(Error::InvalidArgument(format!(
            "patch {patch} exceeds cube extents {h}x{w}"
        )));
    }
    let src = cube.tensor().data();
    let mut out = Vec::new();
    for y0 in (0..=h - patch).step_by(stride) {
        for x0 in (0..=w - patch).step_by(stride) {
            let mut data = Vec::with_capacity(patch * patch * b);
            for y in y0..y0 + patch {
                let row = ((y * w) + x0) * b;
                data.extend_from_slice(&src[row..row + patch * b]);
            }
            let (lo, hi) = cube.normalization();
            out.push(
                HsiCube::new(Tensor::new(vec![patch, patch, b], data)?)?
                    .with_normalization(lo, hi)?,
            );
        }
    }
    Ok(out)
}
