use super::DiscretizedSsm;
use crate::{Error, Result};

/// A discretised system that is either constant over the sequence or has
/// one discretisation per token.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanSystem {
    Invariant(DiscretizedSsm),
    Varying(Vec<DiscretizedSsm>),
}

impl ScanSystem {
    fn step(&self, k: usize) -> &DiscretizedSsm {
        match self {
            ScanSystem::Invariant(d) => d,
            ScanSystem::Varying(steps) => &steps[k],
        }
    }

    fn check(&self, len: usize) -> Result<()> {
        if len == 0 {
            return Err(Error::Shape("scan input must have at least one token".into()));
        }
        let consistent = |d: &DiscretizedSsm, n: usize| {
            d.a_bar.len() == n && d.b_bar.len() == n && d.c.len() == n
        };
        match self {
            ScanSystem::Invariant(d) => {
                if !consistent(d, d.a_bar.len()) {
                    return Err(Error::Shape("inconsistent discretised system sizes".into()));
                }
            }
            ScanSystem::Varying(steps) => {
                if steps.len() != len {
                    return Err(Error::Shape(format!(
                        "{} per-token systems for a sequence of length {len}",
                        steps.len()
                    )));
                }
                let n = steps[0].a_bar.len();
                if !steps.iter().all(|d| consistent(d, n)) {
                    return Err(Error::Shape(
                        "per-token systems disagree in state size".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// `h_k = Ā h_{k-1} + B̄ x_k`, `y_k = C h_k + D x_k`, starting from `h_0 = 0`.
pub fn scan_recurrent(sys: &ScanSystem, x: &[f64]) -> Result<Vec<f64>> {
    sys.check(x.len())?;
    let mut h = vec![0.0; sys.step(0).state_size()];
    let mut y = Vec::with_capacity(x.len());
    for (k, &xk) in x.iter().enumerate() {
        let d = sys.step(k);
        let mut acc = d.d * xk;
        for (((hi, ab), bb), c) in h.iter_mut().zip(&d.a_bar).zip(&d.b_bar).zip(&d.c) {
            *hi = ab * *hi + bb * xk;
            acc += c * *hi;
        }
        y.push(acc);
    }
    Ok(y)
}

/// Hidden state after every token (`result[k]` is `h_{k+1}` in 1-based terms).
pub fn hidden_states(sys: &ScanSystem, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    sys.check(x.len())?;
    let mut h = vec![0.0; sys.step(0).state_size()];
    let mut out = Vec::with_capacity(x.len());
    for (k, &xk) in x.iter().enumerate() {
        let d = sys.step(k);
        for ((hi, ab), bb) in h.iter_mut().zip(&d.a_bar).zip(&d.b_bar) {
            *hi = ab * *hi + bb * xk;
        }
        out.push(h.clone());
    }
    Ok(out)
}

/// Structured convolution kernel `K̄[j] = C Ā^j B̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanKernel {
    pub taps: Vec<f64>,
}

/// Builds `K̄` of length `len` from running powers of the diagonal `Ā`.
pub fn scan_kernel(d: &DiscretizedSsm, len: usize) -> ScanKernel {
    let mut power: Vec<f64> = d.b_bar.clone();
    let mut taps = Vec::with_capacity(len);
    for _ in 0..len {
        taps.push(power.iter().zip(&d.c).map(|(p, c)| p * c).sum());
        for (p, ab) in power.iter_mut().zip(&d.a_bar) {
            *p *= ab;
        }
    }
    ScanKernel { taps }
}

/// `y = x ∗ K̄ + D x` (causal). Only defined for time-invariant systems.
pub fn scan_convolutional(sys: &ScanSystem, x: &[f64]) -> Result<Vec<f64>> {
    let d = match sys {
        ScanSystem::Invariant(d) => d,
        ScanSystem::Varying(_) => {
            return Err(Error::Mode(
                "convolutional scan needs time-invariant parameters; use scan_recurrent".into(),
            ))
        }
    };
    sys.check(x.len())?;
    let kernel = scan_kernel(d, x.len());
    Ok((0..x.len())
        .map(|k| {
            let conv: f64 = (0..=k).map(|j| kernel.taps[j] * x[k - j]).sum();
            conv + d.d * x[k]
        })
        .collect())
}
