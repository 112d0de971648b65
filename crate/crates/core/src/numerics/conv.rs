use super::Tensor;
use crate::{Error, Result};

/// 2-D cross-correlation with zero "same" padding.
///
/// `input` is `[H, W, Cin]`, `kernel` is `[kh, kw, Cin, Cout]` with odd
/// `kh` and `kw`, `bias` is `[Cout]`. Output is `[H, W, Cout]` with
///
/// `out[y, x, o] = bias[o] + Σ kernel[i, j, c, o] · in[y + i - kh/2, x + j - kw/2, c]`
///
/// where out-of-range input samples read as zero.
pub fn conv2d(input: &Tensor, kernel: &Tensor, bias: &Tensor) -> Result<Tensor> {
    let (h, w, cin) = input.dims3()?;
    let (kh, kw, kcin, cout) = match kernel.shape()[..] {
        [a, b, c, d] => (a, b, c, d),
        _ => {
            return Err(Error::Shape(format!(
                "conv kernel must be [kh, kw, Cin, Cout], got {:?}",
                kernel.shape()
            )))
        }
    };
    if kh % 2 == 0 || kw % 2 == 0 {
        return Err(Error::Shape(format!(
            "conv kernel extents must be odd, got {kh}x{kw}"
        )));
    }
    if kcin != cin {
        return Err(Error::Shape(format!(
            "conv input has {cin} channels but kernel expects {kcin}"
        )));
    }
    if bias.shape() != [cout] {
        return Err(Error::Shape(format!(
            "conv bias must be [{cout}], got {:?}",
            bias.shape()
        )));
    }

    let (ph, pw) = (kh / 2, kw / 2);
    let src = input.data();
    let k = kernel.data();
    let mut out = vec![0.0; h * w * cout];
    for y in 0..h {
        for x in 0..w {
            let acc = &mut out[(y * w + x) * cout..(y * w + x + 1) * cout];
            acc.copy_from_slice(bias.data());
            for i in 0..kh {
                let Some(sy) = (y + i).checked_sub(ph).filter(|&v| v < h) else {
                    continue;
                };
                for j in 0..kw {
                    let Some(sx) = (x + j).checked_sub(pw).filter(|&v| v < w) else {
                        continue;
                    };
                    let pix = &src[(sy * w + sx) * cin..(sy * w + sx + 1) * cin];
                    let taps = &k[(i * kw + j) * cin * cout..(i * kw + j + 1) * cin * cout];
                    for (c, &v) in pix.iter().enumerate() {
                        let row = &taps[c * cout..(c + 1) * cout];
                        for (a, &kv) in acc.iter_mut().zip(row) {
                            *a += v * kv;
                        }
                    }
                }
            }
        }
    }
    Tensor::new(vec![h, w, cout], out)
}
