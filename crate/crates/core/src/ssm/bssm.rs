use super::{selective_scan, SelectiveParams};
use crate::numerics::{xavier_init, Rng, Tensor};
use crate::{Error, Result};

/// Bidirectional selective scan: one parameter set per direction plus a
/// shared `[dim, dim]` output projection.
#[derive(Debug, Clone, PartialEq)]
pub struct BssmWeights {
    pub forward: SelectiveParams,
    pub backward: SelectiveParams,
    pub proj_weight: Tensor,
    pub proj_bias: Tensor,
}

impl BssmWeights {
    pub fn init(rng: &mut Rng, dim: usize, state: usize) -> Result<Self> {
        let forward = SelectiveParams::init(rng, dim, state)?;
        let backward = SelectiveParams::init(rng, dim, state)?;
        let proj_weight = xavier_init(rng, &[dim, dim])?;
        Ok(Self {
            forward,
            backward,
            proj_weight,
            proj_bias: Tensor::zeros(&[dim]),
        })
    }

    pub fn zeroed(dim: usize, state: usize) -> Self {
        Self {
            forward: SelectiveParams::zeroed(dim, state),
            backward: SelectiveParams::zeroed(dim, state),
            proj_weight: Tensor::zeros(&[dim, dim]),
            proj_bias: Tensor::zeros(&[dim]),
        }
    }

    pub fn dim(&self) -> usize {
        self.proj_bias.len()
    }

    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut v: Vec<&Tensor> = self.forward.tensors().into();
        v.extend(self.backward.tensors());
        v.push(&self.proj_weight);
        v.push(&self.proj_bias);
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut v: Vec<&mut Tensor> = self.forward.tensors_mut().into();
        v.extend(self.backward.tensors_mut());
        v.push(&mut self.proj_weight);
        v.push(&mut self.proj_bias);
        v
    }
}

fn reverse_tokens(x: &[f64], dim: usize) -> Vec<f64> {
    x.chunks_exact(dim).rev().flatten().copied().collect()
}

/// `y = (scan_f(x) + rev(scan_b(rev(x)))) · W + b`, token-wise.
pub fn bssm_forward(w: &BssmWeights, x: &[f64]) -> Result<Vec<f64>> {
    let dim = w.dim();
    if w.forward.dim() != dim || w.backward.dim() != dim || w.proj_weight.shape() != [dim, dim] {
        return Err(Error::Shape(format!(
            "bidirectional scan widths disagree: forward {}, backward {}, projection {:?}",
            w.forward.dim(),
            w.backward.dim(),
            w.proj_weight.shape()
        )));
    }
    let fwd = selective_scan(&w.forward, x)?;
    let bwd = reverse_tokens(&selective_scan(&w.backward, &reverse_tokens(x, dim))?, dim);
    let proj = w.proj_weight.data();
    let mut out = Vec::with_capacity(x.len());
    for (f, b) in fwd.chunks_exact(dim).zip(bwd.chunks_exact(dim)) {
        let start = out.len();
        out.extend_from_slice(w.proj_bias.data());
        for i in 0..dim {
            let s = f[i] + b[i];
            for (o, pw) in out[start..].iter_mut().zip(&proj[i * dim..(i + 1) * dim]) {
                *o += s * pw;
            }
        }
    }
    Ok(out)
}
