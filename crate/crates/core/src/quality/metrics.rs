use super::{spectral_angle, MetricReport};
use crate::numerics::Tensor;
use crate::{Error, Result};

/// PSNR reported for identical inputs (and the ceiling otherwise).
pub const PSNR_CAP: f64 = 100.0;
pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;
const ERGAS_FLOOR: f64 = 1e-12;

pub fn mse(sr: &Tensor, hr: &Tensor) -> Result<f64> {
    sr.check_same_shape(hr)?;
    let sse: f64 = sr
        .data()
        .iter()
        .zip(hr.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sse / sr.len() as f64)
}

pub fn rmse(sr: &Tensor, hr: &Tensor) -> Result<f64> {
    mse(sr, hr).map(f64::sqrt)
}

/// `10·log10(peak² / mse)`, capped at [`PSNR_CAP`].
pub fn psnr(sr: &Tensor, hr: &Tensor, peak: f64) -> Result<f64> {
    if !(peak > 0.0) {
        return Err(Error::InvalidArgument(format!("peak must be positive, got {peak}")));
    }
    let m = mse(sr, hr)?;
    Ok(if m == 0.0 {
        PSNR_CAP
    } else {
        (10.0 * (peak * peak / m).log10()).min(PSNR_CAP)
    })
}

fn band(t: &Tensor, b: usize) -> Vec<f64> {
    let (_, _, bands) = t.dims3().expect("checked rank");
    t.data().iter().skip(b).step_by(bands).copied().collect()
}

fn gaussian_window(size: usize) -> Vec<f64> {
    let r = (size / 2) as f64;
    let g: Vec<f64> = (0..size)
        .map(|i| (-(i as f64 - r).powi(2) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp())
        .collect();
    let s: f64 = g.iter().sum();
    g.into_iter().map(|v| v / s).collect()
}

/// Valid-mode separable filtering of an `h × w` image.
fn filter_valid(img: &[f64], h: usize, w: usize, g: &[f64]) -> Vec<f64> {
    let k = g.len();
    let (oh, ow) = (h - k + 1, w - k + 1);
    let mut rows = vec![0.0; h * ow];
    for y in 0..h {
        for x in 0..ow {
            rows[y * ow + x] = g.iter().enumerate().map(|(j, gj)| gj * img[y * w + x + j]).sum();
        }
    }
    let mut out = vec![0.0; oh * ow];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = g.iter().enumerate().map(|(i, gi)| gi * rows[(y + i) * ow + x]).sum();
        }
    }
    out
}

/// Window edge used for an `h × w` image: 11, or the largest odd size that
/// fits.
pub(crate) fn ssim_window(h: usize, w: usize) -> usize {
    let m = h.min(w).min(SSIM_WINDOW);
    if m % 2 == 0 {
        m - 1
    } else {
        m
    }
}

/// Mean over bands of the mean SSIM over all valid Gaussian windows, peak 1.
pub fn ssim(sr: &Tensor, hr: &Tensor) -> Result<f64> {
    sr.check_same_shape(hr)?;
    let (h, w, bands) = sr.dims3()?;
    let g = gaussian_window(ssim_window(h, w));
    let (c1, c2) = (SSIM_K1 * SSIM_K1, SSIM_K2 * SSIM_K2);
    let mut total = 0.0;
    for b in 0..bands {
        let (x, y) = (band(sr, b), band(hr, b));
        let prod = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).collect::<Vec<_>>();
        let mx = filter_valid(&x, h, w, &g);
        let my = filter_valid(&y, h, w, &g);
        let mxx = filter_valid(&prod(&x, &x), h, w, &g);
        let myy = filter_valid(&prod(&y, &y), h, w, &g);
        let mxy = filter_valid(&prod(&x, &y), h, w, &g);
        let mut sum = 0.0;
        for i in 0..mx.len() {
            let (ux, uy) = (mx[i], my[i]);
            let (vx, vy, cxy) = (mxx[i] - ux * ux, myy[i] - uy * uy, mxy[i] - ux * uy);
            sum += ((2.0 * ux * uy + c1) * (2.0 * cxy + c2))
                / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
        }
        total += sum / mx.len() as f64;
    }
    Ok(total / bands as f64)
}

/// Mean per-pixel spectral angle in degrees.
pub fn sam_metric(sr: &Tensor, hr: &Tensor) -> Result<f64> {
    sr.check_same_shape(hr)?;
    let (_, _, b) = sr.dims3()?;
    let sum: f64 = sr
        .data()
        .chunks(b)
        .zip(hr.data().chunks(b))
        .map(|(s, h)| spectral_angle(s, h))
        .sum();
    Ok((sum / (sr.len() / b) as f64).to_degrees())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcResult {
    /// `None` when every band was skipped.
    pub value: Option<f64>,
    /// Bands with (near) zero variance in either input.
    pub skipped: usize,
}

fn degenerate(sd: f64, mean: f64) -> bool {
    sd <= 1e-12 * mean.abs().max(1.0)
}

/// Mean over bands of the Pearson correlation between band images.
pub fn cc(sr: &Tensor, hr: &Tensor) -> Result<CcResult> {
    sr.check_same_shape(hr)?;
    let (_, _, bands) = sr.dims3()?;
    let (mut sum, mut used) = (0.0, 0);
    for b in 0..bands {
        let (x, y) = (band(sr, b), band(hr, b));
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (a, c) in x.iter().zip(&y) {
            let (dx, dy) = (a - mx, c - my);
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
        if degenerate((sxx / n).sqrt(), mx) || degenerate((syy / n).sqrt(), my) {
            continue;
        }
        sum += (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
        used += 1;
    }
    Ok(CcResult {
        value: (used > 0).then(|| sum / used as f64),
        skipped: bands - used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgasResult {
    pub value: f64,
    /// Bands whose reference mean was raised to the 1e-12 floor.
    pub floored: usize,
}

/// `100/s · sqrt(mean_b (rmse_b / mean(hr_b))²)`.
pub fn ergas(sr: &Tensor, hr: &Tensor, scale: f64) -> Result<ErgasResult> {
    sr.check_same_shape(hr)?;
    if !(scale > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    let (_, _, bands) = sr.dims3()?;
    let (mut acc, mut floored) = (0.0, 0);
    for b in 0..bands {
        let (x, y) = (band(sr, b), band(hr, b));
        let n = x.len() as f64;
        let mse_b = x.iter().zip(&y).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() / n;
        let mean = y.iter().sum::<f64>() / n;
        let denom = if mean < ERGAS_FLOOR {
            floored += 1;
            ERGAS_FLOOR
        } else {
            mean
        };
        acc += mse_b / (denom * denom);
    }
    Ok(ErgasResult {
        value: 100.0 / scale * (acc / bands as f64).sqrt(),
        floored,
    })
}

/// Per-pixel mean absolute error across bands, shape `[H, W, 1]`.
pub fn error_map(sr: &Tensor, hr: &Tensor) -> Result<Tensor> {
    sr.check_same_shape(hr)?;
    let (h, w, b) = sr.dims3()?;
    let data = sr
        .data()
        .chunks(b)
        .zip(hr.data().chunks(b))
        .map(|(s, t)| s.iter().zip(t).map(|(a, c)| (a - c).abs()).sum::<f64>() / b as f64)
        .collect();
    Tensor::new(vec![h, w, 1], data)
}

/// All six metrics with peak 1.
pub fn evaluate(sr: &Tensor, hr: &Tensor, scale: f64) -> Result<MetricReport> {
    let c = cc(sr, hr)?;
    let e = ergas(sr, hr, scale)?;
    Ok(MetricReport {
        psnr: psnr(sr, hr, 1.0)?,
        ssim: ssim(sr, hr)?,
        sam: sam_metric(sr, hr)?,
        cc: c.value,
        rmse: rmse(sr, hr)?,
        ergas: e.value,
        cc_skipped_bands: c.skipped,
        ergas_floored_bands: e.floored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn random(seed: u64, shape: &[usize]) -> Tensor {
        let mut rng = Rng::new(seed);
        Tensor::from_fn(shape, |_| rng.unit())
    }

    #[test]
    fn identical_inputs() {
        let a = random(1, &[16, 16, 4]);
        let r = evaluate(&a, &a, 4.0).unwrap();
        assert_eq!(r.psnr, PSNR_CAP);
        assert_eq!(r.ssim, 1.0);
        assert_eq!(r.sam, 0.0);
        assert_eq!(r.cc, Some(1.0));
        assert_eq!(r.rmse, 0.0);
        assert_eq!(r.ergas, 0.0);
    }

    #[test]
    fn uniform_offset_psnr() {
        let a = Tensor::full(&[8, 8, 3], 0.5);
        let b = a.map(|v| v + 0.1);
        assert!((psnr(&b, &a, 1.0).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn rmse_squared_times_count_is_sse() {
        let (a, b) = (random(2, &[5, 6, 7]), random(3, &[5, 6, 7]));
        let sse: f64 = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).powi(2)).sum();
        assert!((rmse(&a, &b).unwrap().powi(2) * a.len() as f64 - sse).abs() < 1e-12);
    }

    #[test]
    fn ssim_window_rule() {
        assert_eq!(ssim_window(64, 64), 11);
        assert_eq!(ssim_window(8, 20), 7);
        assert_eq!(ssim_window(1, 5), 1);
        let (a, b) = (random(4, &[6, 9, 2]), random(5, &[6, 9, 2]));
        let s = ssim(&a, &b).unwrap();
        assert!((s - ssim(&b, &a).unwrap()).abs() < 1e-15);
        assert!(s < 1.0);
    }

    #[test]
    fn degenerate_bookkeeping() {
        let flat = Tensor::full(&[4, 4, 2], 0.0);
        let a = random(6, &[4, 4, 2]);
        let c = cc(&a, &flat).unwrap();
        assert_eq!((c.value, c.skipped), (None, 2));
        let e = ergas(&a, &flat, 4.0).unwrap();
        assert_eq!(e.floored, 2);
        assert!(e.value.is_finite());
    }

    #[test]
    fn error_map_shape_and_values() {
        let a = Tensor::full(&[2, 3, 4], 0.25);
        let m = error_map(&a.map(|v| v + 0.5), &a).unwrap();
        assert_eq!(m.shape(), [2, 3, 1]);
        assert!(m.data().iter().all(|&v| v == 0.5));
    }
}
