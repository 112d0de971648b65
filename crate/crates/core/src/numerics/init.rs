use super::{Rng, Tensor};
use crate::{Error, Result};

/// Fan-in / fan-out of a weight array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fans {
    pub fan_in: usize,
    pub fan_out: usize,
}

impl Fans {
    /// Fans by layer kind, inferred from the weight layout:
    ///
    /// * `[in, out]` (linear): `(in, out)`
    /// * `[kh, kw, in, out]` (convolution): `(kh·kw·in, kh·kw·out)`
    pub fn of_shape(shape: &[usize]) -> Result<Self> {
        match *shape {
            [fan_in, fan_out] => Ok(Fans { fan_in, fan_out }),
            [kh, kw, cin, cout] => Ok(Fans {
                fan_in: kh * kw * cin,
                fan_out: kh * kw * cout,
            }),
            _ => Err(Error::Shape(format!(
                "cannot infer fan-in/fan-out for shape {shape:?}"
            ))),
        }
    }
}

pub fn xavier_bound(fans: Fans) -> f64 {
    (6.0 / (fans.fan_in + fans.fan_out) as f64).sqrt()
}

/// Xavier/Glorot uniform: samples in `±sqrt(6 / (fan_in + fan_out))`.
///
/// Samples are rounded to `f32` precision so that weights survive the
/// 32-bit weight file bit-exactly.
pub fn xavier_init(rng: &mut Rng, shape: &[usize]) -> Result<Tensor> {
    let fans = Fans::of_shape(shape)?;
    if shape.iter().any(|&d| d == 0) {
        return Err(Error::Shape(format!("zero extent in shape {shape:?}")));
    }
    let bound = xavier_bound(fans);
    Ok(Tensor::from_fn(shape, |_| {
        rng.uniform(-bound, bound) as f32 as f64
    }))
}
