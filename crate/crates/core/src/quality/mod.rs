//! Training losses with analytic gradients and the evaluation metrics.
//!
//! Every loss returns its value together with `∂loss/∂sr`. Metrics follow
//! the usual definitions; see [`MetricReport`] for the degenerate-band
//! bookkeeping.

mod check;
mod loss;
mod metrics;
mod report;

pub use check::{finite_difference_gradient, gradient_relative_error, FD_STEP};
pub use loss::{
    gradient_loss, l1_loss, sam_loss, spectral_angle, total_loss, LossValue, LossWeights,
    TotalLoss, SAM_EPS,
};
pub use metrics::{
    cc, ergas, error_map, evaluate, mse, psnr, rmse, sam_metric, ssim, CcResult, ErgasResult,
    PSNR_CAP, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW,
};
pub use report::MetricReport;
