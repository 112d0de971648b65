use super::Tensor;
use crate::{Error, Result};

/// Keys cubic convolution parameter.
pub const BICUBIC_A: f64 = -0.5;

pub fn bicubic_kernel(x: f64) -> f64 {
    let a = BICUBIC_A;
    let t = x.abs();
    if t <= 1.0 {
        ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a
    } else {
        0.0
    }
}

/// Source taps and normalised weights for one output sample.
struct Taps {
    index: Vec<usize>,
    weight: Vec<f64>,
}

/// Pixel-centre aligned mapping. When shrinking, the kernel is stretched
/// by `1/scale` (antialiasing). Taps outside the input are clamped to the
/// nearest edge sample, and weights are renormalised to sum to one.
fn axis_taps(n_in: usize, n_out: usize) -> Vec<Taps> {
    let scale = n_out as f64 / n_in as f64;
    let stretch = if scale < 1.0 { scale } else { 1.0 };
    let support = 2.0 / stretch;
    (0..n_out)
        .map(|o| {
            let centre = (o as f64 + 0.5) / scale - 0.5;
            let first = (centre - support).ceil() as i64;
            let last = (centre + support).floor() as i64;
            let mut index = Vec::with_capacity((last - first + 1) as usize);
            let mut weight = Vec::with_capacity(index.capacity());
            for i in first..=last {
                let wv = bicubic_kernel((centre - i as f64) * stretch);
                if wv == 0.0 {
                    continue;
                }
                index.push(i.clamp(0, n_in as i64 - 1) as usize);
                weight.push(wv);
            }
            let total: f64 = weight.iter().sum();
            weight.iter_mut().for_each(|w| *w /= total);
            Taps { index, weight }
        })
        .collect()
}

/// Resamples every channel of an `[H, W, C]` tensor to `[out_h, out_w, C]`.
pub fn bicubic_resize(x: &Tensor, out_h: usize, out_w: usize) -> Result<Tensor> {
    let (h, w, c) = x.dims3()?;
    if out_h == 0 || out_w == 0 {
        return Err(Error::InvalidArgument(format!(
            "bicubic output extent must be at least 1, got {out_h}x{out_w}"
        )));
    }
    let src = x.data();

    // Rows first: [H, W, C] -> [out_h, W, C].
    let mut tmp = vec![0.0; out_h * w * c];
    for (oy, taps) in axis_taps(h, out_h).iter().enumerate() {
        let dst = &mut tmp[oy * w * c..(oy + 1) * w * c];
        for (&sy, &wt) in taps.index.iter().zip(&taps.weight) {
            for (d, s) in dst.iter_mut().zip(&src[sy * w * c..(sy + 1) * w * c]) {
                *d += wt * s;
            }
        }
    }

    // Then columns: [out_h, W, C] -> [out_h, out_w, C].
    let col_taps = axis_taps(w, out_w);
    let mut out = vec![0.0; out_h * out_w * c];
    for oy in 0..out_h {
        let row = &tmp[oy * w * c..(oy + 1) * w * c];
        for (ox, taps) in col_taps.iter().enumerate() {
            let dst = &mut out[(oy * out_w + ox) * c..(oy * out_w + ox + 1) * c];
            for (&sx, &wt) in taps.index.iter().zip(&taps.weight) {
                for (d, s) in dst.iter_mut().zip(&row[sx * c..(sx + 1) * c]) {
                    *d += wt * s;
                }
            }
        }
    }
    Tensor::new(vec![out_h, out_w, c], out)
}

/// Resamples by the rational factor `num/den`; output extents are
/// `round(extent · num / den)`.
pub fn bicubic_rescale(x: &Tensor, num: usize, den: usize) -> Result<Tensor> {
    let (h, w, _) = x.dims3()?;
    if num == 0 || den == 0 {
        return Err(Error::InvalidArgument(format!(
            "bicubic scale {num}/{den} must be positive"
        )));
    }
    let extent = |n: usize| ((n * num) as f64 / den as f64).round() as usize;
    bicubic_resize(x, extent(h), extent(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    #[test]
    fn kernel_values() {
        assert_eq!(bicubic_kernel(0.0), 1.0);
        assert_eq!(bicubic_kernel(1.0), 0.0);
        assert_eq!(bicubic_kernel(2.0), 0.0);
        // a = -0.5 at x = 0.5: 1.5·0.125 - 2.5·0.25 + 1 = 0.5625
        assert!((bicubic_kernel(0.5) - 0.5625).abs() < 1e-15);
        // x = 1.5: -0.5·3.375 + 2.5·2.25 - 4·1.5 + 2 = -0.0625
        assert!((bicubic_kernel(-1.5) + 0.0625).abs() < 1e-15);
    }

    #[test]
    fn constant_is_preserved() {
        let x = Tensor::full(&[12, 12, 3], 0.7);
        for (num, den) in [(1, 4), (1, 8), (4, 1), (8, 1), (1, 2), (3, 2)] {
            let y = bicubic_rescale(&x, num, den).unwrap();
            assert!(y.data().iter().all(|v| (v - 0.7).abs() < 1e-6), "{num}/{den}");
        }
    }

    #[test]
    fn output_extents() {
        let x = Tensor::zeros(&[32, 24, 2]);
        assert_eq!(bicubic_rescale(&x, 4, 1).unwrap().shape(), &[128, 96, 2]);
        assert_eq!(bicubic_rescale(&x, 1, 8).unwrap().shape(), &[4, 3, 2]);
        assert!(bicubic_rescale(&Tensor::zeros(&[3, 3, 1]), 1, 8).is_err());
    }

    // Independent non-separable evaluation: sums the full 2-D stencil
    // straight from the kernel definition.
    fn direct(x: &Tensor, oh: usize, ow: usize) -> Tensor {
        let (h, w, c) = x.dims3().unwrap();
        let weights = |n_in: usize, n_out: usize, o: usize| -> Vec<(usize, f64)> {
            let s = n_out as f64 / n_in as f64;
            let k = s.min(1.0);
            let centre = (o as f64 + 0.5) / s - 0.5;
            let mut v = Vec::new();
            let mut i = (centre - 2.0 / k).floor() as i64 - 1;
            while (i as f64) <= centre + 2.0 / k + 1.0 {
                let wt = bicubic_kernel((centre - i as f64) * k);
                if wt != 0.0 {
                    v.push((i.max(0).min(n_in as i64 - 1) as usize, wt));
                }
                i += 1;
            }
            let t: f64 = v.iter().map(|p| p.1).sum();
            v.into_iter().map(|(i, wt)| (i, wt / t)).collect()
        };
        let mut out = Tensor::zeros(&[oh, ow, c]);
        for oy in 0..oh {
            for ox in 0..ow {
                for ch in 0..c {
                    let mut acc = 0.0;
                    for &(sy, wy) in &weights(h, oh, oy) {
                        for &(sx, wx) in &weights(w, ow, ox) {
                            acc += wy * wx * x.data()[(sy * w + sx) * c + ch];
                        }
                    }
                    out.data_mut()[(oy * ow + ox) * c + ch] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn ramp_half_matches_direct_stencil() {
        let x = Tensor::from_fn(&[8, 8, 1], |i| (i / 8) as f64 * 0.1 + (i % 8) as f64 * 0.03);
        let got = bicubic_rescale(&x, 1, 2).unwrap();
        let want = direct(&x, 4, 4);
        assert!(got.max_abs_diff(&want).unwrap() < 1e-9);
    }

    #[test]
    fn random_upscale_matches_direct_stencil() {
        let mut rng = Rng::new(11);
        let x = Tensor::from_fn(&[5, 7, 2], |_| rng.unit());
        let got = bicubic_resize(&x, 15, 9).unwrap();
        let want = direct(&x, 15, 9);
        assert!(got.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn smooth_roundtrip_is_accurate() {
        let (h, w, c) = (64, 64, 4);
        let x = Tensor::from_fn(&[h, w, c], |i| {
            let ch = i % c;
            let px = i / c;
            let (y, xx) = ((px / w) as f64, (px % w) as f64);
            0.5 + 0.2 * (std::f64::consts::TAU * y / 64.0).sin()
                + 0.2 * (std::f64::consts::TAU * (xx / 64.0 + ch as f64 * 0.1)).cos()
        });
        let lr = bicubic_rescale(&x, 1, 4).unwrap();
        let back = bicubic_rescale(&lr, 4, 1).unwrap();
        let mse = x
            .data()
            .iter()
            .zip(back.data())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            / x.len() as f64;
        let psnr = 10.0 * (1.0 / mse).log10();
        assert!(psnr > 40.0, "psnr {psnr}");
    }
}
