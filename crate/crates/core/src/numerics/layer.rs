use super::Tensor;
use crate::{Error, Result};

/// Added to the variance inside the square root of [`layer_norm`].
pub const LAYER_NORM_EPS: f64 = 1e-5;

fn last_dim(x: &Tensor) -> usize {
    *x.shape().last().expect("tensor rank is at least 1")
}

/// Affine map over the last axis: `y = x · W + b` with `W` shaped `[in, out]`.
pub fn linear(x: &Tensor, weight: &Tensor, bias: &Tensor) -> Result<Tensor> {
    let (fan_in, fan_out) = match weight.shape()[..] {
        [a, b] => (a, b),
        _ => {
            return Err(Error::Shape(format!(
                "linear weight must be [in, out], got {:?}",
                weight.shape()
            )))
        }
    };
    if last_dim(x) != fan_in {
        return Err(Error::Shape(format!(
            "linear input has {} features but weight expects {fan_in}",
            last_dim(x)
        )));
    }
    if bias.shape() != [fan_out] {
        return Err(Error::Shape(format!(
            "linear bias must be [{fan_out}], got {:?}",
            bias.shape()
        )));
    }
    let rows = x.len() / fan_in;
    let mut out = Vec::with_capacity(rows * fan_out);
    for row in x.data().chunks_exact(fan_in) {
        let start = out.len();
        out.extend_from_slice(bias.data());
        let acc = &mut out[start..];
        for (i, &v) in row.iter().enumerate() {
            let wrow = &weight.data()[i * fan_out..(i + 1) * fan_out];
            for (a, &wv) in acc.iter_mut().zip(wrow) {
                *a += v * wv;
            }
        }
    }
    let mut shape = x.shape().to_vec();
    *shape.last_mut().unwrap() = fan_out;
    Tensor::new(shape, out)
}

/// Normalises each position over the last (channel) axis:
/// `(x - mean) / sqrt(var + LAYER_NORM_EPS) * gamma + beta`, with the
/// population variance.
pub fn layer_norm(x: &Tensor, gamma: &Tensor, beta: &Tensor) -> Result<Tensor> {
    let c = last_dim(x);
    if gamma.shape() != [c] || beta.shape() != [c] {
        return Err(Error::Shape(format!(
            "layer_norm affine must be [{c}], got gamma {:?} beta {:?}",
            gamma.shape(),
            beta.shape()
        )));
    }
    let mut out = x.clone();
    for row in out.data_mut().chunks_exact_mut(c) {
        let mean = row.iter().sum::<f64>() / c as f64;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / c as f64;
        let inv = 1.0 / (var + LAYER_NORM_EPS).sqrt();
        for ((v, g), b) in row.iter_mut().zip(gamma.data()).zip(beta.data()) {
            *v = (*v - mean) * inv * g + b;
        }
    }
    Ok(out)
}

pub fn relu(x: &Tensor) -> Tensor {
    x.map(|v| v.max(0.0))
}

pub fn sigmoid(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^v)`, evaluated without overflow.
pub fn softplus(v: f64) -> f64 {
    if v > 30.0 {
        v + (-v).exp()
    } else {
        v.exp().ln_1p()
    }
}

/// Inverse of [`softplus`] for `y > 0`.
pub fn softplus_inverse(y: f64) -> f64 {
    if y > 30.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

/// Per-channel mean over all spatial positions of an `[H, W, C]` map.
pub fn global_average_pool(x: &Tensor) -> Result<Vec<f64>> {
    let (h, w, c) = x.dims3()?;
    let mut acc = vec![0.0; c];
    for px in x.data().chunks_exact(c) {
        for (a, v) in acc.iter_mut().zip(px) {
            *a += v;
        }
    }
    let n = (h * w) as f64;
    Ok(acc.into_iter().map(|s| s / n).collect())
}

pub fn add(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    a.check_same_shape(b)?;
    Tensor::new(
        a.shape().to_vec(),
        a.data().iter().zip(b.data()).map(|(x, y)| x + y).collect(),
    )
}

pub fn mul(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    a.check_same_shape(b)?;
    Tensor::new(
        a.shape().to_vec(),
        a.data().iter().zip(b.data()).map(|(x, y)| x * y).collect(),
    )
}
