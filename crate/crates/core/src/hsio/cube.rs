use crate::numerics::Tensor;
use crate::{Error, Result};

/// `[H, W, B]` samples in `[0, 1]`, plus the affine map back to the
/// original radiometric range (`raw = norm_min + v · (norm_max − norm_min)`).
#[derive(Debug, Clone, PartialEq)]
pub struct HsiCube {
    data: Tensor,
    norm_min: f64,
    norm_max: f64,
}

impl HsiCube {
    /// Validates rank, finiteness and range.
    pub fn new(data: Tensor) -> Result<Self> {
        data.dims3()?;
        for (index, &value) in data.data().iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange { index, value });
            }
        }
        Ok(Self {
            data,
            norm_min: 0.0,
            norm_max: 1.0,
        })
    }

    /// Clamps into `[0, 1]`; rejects non-finite samples.
    pub fn from_clamped(mut data: Tensor) -> Result<Self> {
        if let Some(index) = data.first_non_finite() {
            return Err(Error::NonFinite { index });
        }
        data.data_mut().iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        Self::new(data)
    }

    pub fn with_normalization(mut self, norm_min: f64, norm_max: f64) -> Result<Self> {
        if !norm_min.is_finite() || !norm_max.is_finite() || norm_max < norm_min {
            return Err(Error::InvalidArgument(format!(
                "normalization range [{norm_min}, {norm_max}] is invalid"
            )));
        }
        self.norm_min = norm_min;
        self.norm_max = norm_max;
        Ok(self)
    }

    pub fn normalization(&self) -> (f64, f64) {
        (self.norm_min, self.norm_max)
    }

    /// `(height, width, bands)`
    pub fn dims(&self) -> (usize, usize, usize) {
        self.data.dims3().expect("cube is rank 3")
    }

    pub fn tensor(&self) -> &Tensor {
        &self.data
    }

    pub fn into_tensor(self) -> Tensor {
        self.data
    }

    /// Samples mapped back to the original range.
    pub fn denormalized(&self) -> Tensor {
        let span = self.norm_max - self.norm_min;
        self.data.map(|v| self.norm_min + v * span)
    }

    /// One band image in row-major order.
    pub fn band(&self, b: usize) -> Vec<f64> {
        let (_, _, bands) = self.dims();
        self.data.data().iter().skip(b).step_by(bands).copied().collect()
    }
}
