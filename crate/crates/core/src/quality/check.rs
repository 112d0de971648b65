use crate::numerics::Tensor;
use crate::Result;

/// Step used for central differences.
pub const FD_STEP: f64 = 1e-6;

/// Central-difference gradient of a scalar function, one coordinate at a
/// time.
pub fn finite_difference_gradient(
    f: impl Fn(&Tensor) -> Result<f64>,
    x: &Tensor,
    step: f64,
) -> Result<Tensor> {
    let mut probe = x.clone();
    let mut out = Tensor::zeros(x.shape());
    for i in 0..x.len() {
        let v = x.data()[i];
        probe.data_mut()[i] = v + step;
        let hi = f(&probe)?;
        probe.data_mut()[i] = v - step;
        let lo = f(&probe)?;
        probe.data_mut()[i] = v;
        out.data_mut()[i] = (hi - lo) / (2.0 * step);
    }
    Ok(out)
}

/// `‖a − n‖∞ / max(‖a‖∞, ‖n‖∞)`, or 0 when both vanish.
pub fn gradient_relative_error(analytic: &Tensor, numeric: &Tensor) -> Result<f64> {
    let diff = analytic.max_abs_diff(numeric)?;
    let scale = analytic.max_abs().max(numeric.max_abs());
    Ok(if scale == 0.0 { diff } else { diff / scale })
}
