use crate::numerics::Tensor;
use crate::{Error, Result};

/// Lower clamp on spectral norms.
pub const SAM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LossValue {
    pub value: f64,
    /// `∂value/∂sr`
    pub grad: Tensor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub lambda_s: f64,
    pub lambda_g: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            lambda_s: 0.3,
            lambda_g: 0.1,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_s >= 0.0 && self.lambda_g >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "loss weights must be non-negative, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn combine(&self, l1: f64, sam: f64, gra: f64) -> f64 {
        l1 + self.lambda_s * sam + self.lambda_g * gra
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Mean absolute difference.
pub fn l1_loss(sr: &Tensor, hr: &Tensor) -> Result<LossValue> {
    sr.check_same_shape(hr)?;
    let n = sr.len() as f64;
    let mut value = 0.0;
    let mut grad = Tensor::zeros(sr.shape());
    for ((g, &s), &h) in grad.data_mut().iter_mut().zip(sr.data()).zip(hr.data()) {
        value += (s - h).abs();
        *g = sign(s - h) / n;
    }
    Ok(LossValue {
        value: value / n,
        grad,
    })
}

fn unit(v: &[f64]) -> (Vec<f64>, f64) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let d = norm.max(SAM_EPS);
    (v.iter().map(|x| x / d).collect(), norm)
}

/// Angle between two spectra in radians, via the half-angle form
/// `2·atan2(‖â − b̂‖, ‖â + b̂‖)`, which stays accurate near 0 and π. Norms are
/// clamped below by [`SAM_EPS`]; identical spectra give exactly 0.
pub fn spectral_angle(a: &[f64], b: &[f64]) -> f64 {
    if a == b {
        return 0.0;
    }
    let (ua, _) = unit(a);
    let (ub, _) = unit(b);
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in ua.iter().zip(&ub) {
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Mean per-pixel spectral angle divided by π, in `[0, 1]`.
pub fn sam_loss(sr: &Tensor, hr: &Tensor) -> Result<LossValue> {
    sr.check_same_shape(hr)?;
    let (_, _, b) = sr.dims3()?;
    let pixels = sr.len() / b;
    let scale = 1.0 / (pixels as f64 * std::f64::consts::PI);
    let mut value = 0.0;
    let mut grad = Tensor::zeros(sr.shape());
    for ((g, s), h) in grad
        .data_mut()
        .chunks_mut(b)
        .zip(sr.data().chunks(b))
        .zip(hr.data().chunks(b))
    {
        let theta = spectral_angle(s, h);
        value += theta;
        let sin = theta.sin();
        if sin <= 1e-12 {
            continue;
        }
        let (us, ns) = unit(s);
        let (uh, _) = unit(h);
        // dθ/ds = −(ĥ − cosθ·ŝ) / (‖s‖ sinθ); with a clamped norm only the
        // ĥ/ε term survives.
        let cos = theta.cos();
        for ((gi, &si), &hi) in g.iter_mut().zip(&us).zip(&uh) {
            let d = if ns >= SAM_EPS {
                -(hi - cos * si) / (ns * sin)
            } else {
                -hi / (SAM_EPS * sin)
            };
            *gi = d * scale;
        }
    }
    Ok(LossValue {
        value: value * scale,
        grad,
    })
}

/// Forward differences along height, width and bands. For each axis the
/// mean absolute difference between `Δsr` and `Δhr` is taken; the three
/// means are summed.
pub fn gradient_loss(sr: &Tensor, hr: &Tensor) -> Result<LossValue> {
    sr.check_same_shape(hr)?;
    let (h, w, b) = sr.dims3()?;
    if h < 2 || w < 2 || b < 2 {
        return Err(Error::Shape(format!(
            "gradient loss needs at least 2 samples per axis, got {h}x{w}x{b}"
        )));
    }
    let (s, t) = (sr.data(), hr.data());
    let mut grad = Tensor::zeros(sr.shape());
    let g = grad.data_mut();
    let mut value = 0.0;
    // (stride, differences along the axis)
    let axes = [(w * b, (h - 1) * w * b), (b, h * (w - 1) * b), (1, h * w * (b - 1))];
    for (axis, &(stride, count)) in axes.iter().enumerate() {
        let n = count as f64;
        let mut sum = 0.0;
        for i in 0..h * w * b {
            let (y, x, c) = (i / (w * b), i / b % w, i % b);
            let has_next = match axis {
                0 => y + 1 < h,
                1 => x + 1 < w,
                _ => c + 1 < b,
            };
            if !has_next {
                continue;
            }
            let e = (s[i + stride] - s[i]) - (t[i + stride] - t[i]);
            sum += e.abs();
            let d = sign(e) / n;
            g[i + stride] += d;
            g[i] -= d;
        }
        value += sum / n;
    }
    Ok(LossValue { value, grad })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TotalLoss {
    pub value: f64,
    pub grad: Tensor,
    pub l1: f64,
    pub sam: f64,
    pub gradient: f64,
}

/// `L1 + λs·SAM + λg·GRA` and the matching gradient.
pub fn total_loss(sr: &Tensor, hr: &Tensor, w: &LossWeights) -> Result<TotalLoss> {
    w.validate()?;
    let l1 = l1_loss(sr, hr)?;
    let sam = sam_loss(sr, hr)?;
    let gra = gradient_loss(sr, hr)?;
    let mut grad = l1.grad;
    for ((g, &a), &c) in grad.data_mut().iter_mut().zip(sam.grad.data()).zip(gra.grad.data()) {
        *g += w.lambda_s * a + w.lambda_g * c;
    }
    Ok(TotalLoss {
        value: w.combine(l1.value, sam.value, gra.value),
        grad,
        l1: l1.value,
        sam: sam.value,
        gradient: gra.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn pair(seed: u64, shape: &[usize]) -> (Tensor, Tensor) {
        let mut rng = Rng::new(seed);
        let a = Tensor::from_fn(shape, |_| rng.uniform(0.1, 1.0));
        let b = Tensor::from_fn(shape, |_| rng.uniform(0.1, 1.0));
        (a, b)
    }

    #[test]
    fn l1_anchors() {
        let (a, _) = pair(1, &[3, 3, 4]);
        assert_eq!(l1_loss(&a, &a).unwrap().value, 0.0);
        assert!(l1_loss(&a, &a).unwrap().grad.data().iter().all(|&g| g == 0.0));
        let shifted = a.map(|v| v + 0.1);
        assert!((l1_loss(&shifted, &a).unwrap().value - 0.1).abs() < 1e-12);
        assert!(l1_loss(&a, &Tensor::zeros(&[3, 3, 3])).is_err());
    }

    #[test]
    fn sam_anchors() {
        let (a, _) = pair(2, &[4, 4, 6]);
        let scaled = a.map(|v| 3.7 * v);
        assert!(sam_loss(&scaled, &a).unwrap().value < 1e-9);
        assert_eq!(sam_loss(&a, &a).unwrap().value, 0.0);
        let x = Tensor::from_fn(&[2, 2, 2], |i| if i % 2 == 0 { 1.0 } else { 0.0 });
        let y = Tensor::from_fn(&[2, 2, 2], |i| if i % 2 == 0 { 0.0 } else { 2.0 });
        assert!((sam_loss(&x, &y).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spectral_angle_matches_arccos() {
        let mut rng = Rng::new(3);
        for _ in 0..100 {
            let a = rng.uniform_vec(5, -1.0, 1.0);
            let b = rng.uniform_vec(5, -1.0, 1.0);
            let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            let want = (dot / (na * nb)).clamp(-1.0, 1.0).acos();
            assert!((spectral_angle(&a, &b) - want).abs() < 1e-12);
        }
        assert!((spectral_angle(&[0.0, 0.0], &[1.0, 2.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn gradient_loss_anchors() {
        let (a, _) = pair(4, &[3, 4, 5]);
        assert_eq!(gradient_loss(&a, &a).unwrap().value, 0.0);
        let shifted = a.map(|v| v + 0.25);
        assert!(gradient_loss(&shifted, &a).unwrap().value < 1e-15);
        assert!(gradient_loss(&a.clone().reshape(vec![1, 12, 5]).unwrap(), &a.reshape(vec![1, 12, 5]).unwrap()).is_err());
    }

    #[test]
    fn total_loss_is_weighted_sum() {
        assert!((LossWeights::default().combine(1.0, 1.0, 1.0) - 1.4).abs() < 1e-15);
        let (a, b) = pair(5, &[3, 3, 4]);
        let t = total_loss(&a, &b, &LossWeights::default()).unwrap();
        let manual = l1_loss(&a, &b).unwrap().value
            + 0.3 * sam_loss(&a, &b).unwrap().value
            + 0.1 * gradient_loss(&a, &b).unwrap().value;
        assert!((t.value - manual).abs() < 1e-12);
        assert_eq!(total_loss(&a, &a, &LossWeights::default()).unwrap().value, 0.0);
        let bad = LossWeights { lambda_s: -1.0, lambda_g: 0.1 };
        assert!(total_loss(&a, &b, &bad).is_err());
    }
}
