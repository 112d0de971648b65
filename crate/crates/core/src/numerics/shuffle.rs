use super::Tensor;
use crate::{Error, Result};

/// Rearranges `[H, W, r²·C]` into `[r·H, r·W, C]`.
///
/// Input channel `c·r² + i·r + j` at `(y, x)` moves to output position
/// `(y·r + i, x·r + j)`, channel `c` (the channel-first sub-pixel
/// convention).
pub fn pixel_shuffle(x: &Tensor, r: usize) -> Result<Tensor> {
    let (h, w, cin) = x.dims3()?;
    if r == 0 || cin % (r * r) != 0 {
        return Err(Error::Shape(format!(
            "pixel_shuffle: {cin} channels not divisible by r² = {}",
            r * r
        )));
    }
    let c = cin / (r * r);
    let (oh, ow) = (h * r, w * r);
    let src = x.data();
    let mut out = vec![0.0; oh * ow * c];
    for y in 0..h {
        for xx in 0..w {
            let px = &src[(y * w + xx) * cin..(y * w + xx + 1) * cin];
            for ch in 0..c {
                for i in 0..r {
                    for j in 0..r {
                        let (oy, ox) = (y * r + i, xx * r + j);
                        out[(oy * ow + ox) * c + ch] = px[ch * r * r + i * r + j];
                    }
                }
            }
        }
    }
    Tensor::new(vec![oh, ow, c], out)
}

/// Exact inverse of [`pixel_shuffle`].
pub fn pixel_unshuffle(x: &Tensor, r: usize) -> Result<Tensor> {
    let (oh, ow, c) = x.dims3()?;
    if r == 0 || oh % r != 0 || ow % r != 0 {
        return Err(Error::Shape(format!(
            "pixel_unshuffle: extents {oh}x{ow} not divisible by {r}"
        )));
    }
    let (h, w, cin) = (oh / r, ow / r, c * r * r);
    let src = x.data();
    let mut out = vec![0.0; h * w * cin];
    for oy in 0..oh {
        for ox in 0..ow {
            let (y, i, xx, j) = (oy / r, oy % r, ox / r, ox % r);
            for ch in 0..c {
                out[(y * w + xx) * cin + ch * r * r + i * r + j] = src[(oy * ow + ox) * c + ch];
            }
        }
    }
    Tensor::new(vec![h, w, cin], out)
}
