use super::zoh;
use crate::numerics::{softplus, softplus_inverse, xavier_init, Rng, Tensor};
use crate::{Error, Result};

/// Initial timescale: `Δ_bias` starts at `softplus⁻¹(INITIAL_DELTA)`.
pub const INITIAL_DELTA: f64 = 0.01;

/// Parameters of a selective scan over tokens of width `dim` with a hidden
/// state of `state` entries per channel.
///
/// Per token `x_k`:
///
/// * `Δ_k = softplus(x_k · delta_weight + delta_bias)` (one per channel)
/// * `B_k = x_k · b_weight + b_bias`, `C_k = x_k · c_weight + c_bias`
///   (shared by all channels)
///
/// and each channel runs the ZOH recurrence with its own diagonal `A` row
/// and skip coefficient `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveParams {
    /// `[dim, state]`, entries negative for stability.
    pub a: Tensor,
    /// `[dim]`
    pub d: Tensor,
    /// `[dim, dim]`
    pub delta_weight: Tensor,
    /// `[dim]`
    pub delta_bias: Tensor,
    /// `[dim, state]`
    pub b_weight: Tensor,
    /// `[state]`
    pub b_bias: Tensor,
    /// `[dim, state]`
    pub c_weight: Tensor,
    /// `[state]`
    pub c_bias: Tensor,
}

impl SelectiveParams {
    /// `A = -(1, 2, …, state)` per channel, `D = 1`, projection weights
    /// Xavier-uniform (drawn in the order Δ, B, C), `B`/`C` biases zero and
    /// `Δ` bias set so every initial timescale is [`INITIAL_DELTA`].
    pub fn init(rng: &mut Rng, dim: usize, state: usize) -> Result<Self> {
        let delta_weight = xavier_init(rng, &[dim, dim])?;
        let b_weight = xavier_init(rng, &[dim, state])?;
        let c_weight = xavier_init(rng, &[dim, state])?;
        Ok(Self {
            a: Self::default_a(dim, state),
            d: Tensor::full(&[dim], 1.0),
            delta_weight,
            delta_bias: Tensor::full(&[dim], softplus_inverse(INITIAL_DELTA) as f32 as f64),
            b_weight,
            b_bias: Tensor::zeros(&[state]),
            c_weight,
            c_bias: Tensor::zeros(&[state]),
        })
    }

    /// Default `A`, everything else zero: the scan outputs zero for any input.
    pub fn zeroed(dim: usize, state: usize) -> Self {
        Self {
            a: Self::default_a(dim, state),
            d: Tensor::zeros(&[dim]),
            delta_weight: Tensor::zeros(&[dim, dim]),
            delta_bias: Tensor::zeros(&[dim]),
            b_weight: Tensor::zeros(&[dim, state]),
            b_bias: Tensor::zeros(&[state]),
            c_weight: Tensor::zeros(&[dim, state]),
            c_bias: Tensor::zeros(&[state]),
        }
    }

    fn default_a(dim: usize, state: usize) -> Tensor {
        Tensor::from_fn(&[dim, state], |i| -((i % state) as f64 + 1.0))
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn state(&self) -> usize {
        self.b_bias.len()
    }

    pub fn tensors(&self) -> [&Tensor; 8] {
        [
            &self.a,
            &self.d,
            &self.delta_weight,
            &self.delta_bias,
            &self.b_weight,
            &self.b_bias,
            &self.c_weight,
            &self.c_bias,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut Tensor; 8] {
        [
            &mut self.a,
            &mut self.d,
            &mut self.delta_weight,
            &mut self.delta_bias,
            &mut self.b_weight,
            &mut self.b_bias,
            &mut self.c_weight,
            &mut self.c_bias,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let (dim, state) = (self.dim(), self.state());
        let expect: [(&str, &Tensor, Vec<usize>); 8] = [
            ("a", &self.a, vec![dim, state]),
            ("d", &self.d, vec![dim]),
            ("delta_weight", &self.delta_weight, vec![dim, dim]),
            ("delta_bias", &self.delta_bias, vec![dim]),
            ("b_weight", &self.b_weight, vec![dim, state]),
            ("b_bias", &self.b_bias, vec![state]),
            ("c_weight", &self.c_weight, vec![dim, state]),
            ("c_bias", &self.c_bias, vec![state]),
        ];
        for (name, t, shape) in expect {
            if t.shape() != shape.as_slice() {
                return Err(Error::Shape(format!(
                    "selective scan {name} must be {shape:?}, got {:?}",
                    t.shape()
                )));
            }
        }
        Ok(())
    }
}

fn project(token: &[f64], weight: &[f64], bias: &[f64], out: &mut [f64]) {
    out.copy_from_slice(bias);
    let n = out.len();
    for (i, &v) in token.iter().enumerate() {
        for (o, w) in out.iter_mut().zip(&weight[i * n..(i + 1) * n]) {
            *o += v * w;
        }
    }
}

/// Runs the selective scan over `x`, a flat sequence of `L` tokens of width
/// `dim` (token-major). Output has the same layout.
pub fn selective_scan(p: &SelectiveParams, x: &[f64]) -> Result<Vec<f64>> {
    p.validate()?;
    let (dim, state) = (p.dim(), p.state());
    if x.is_empty() || x.len() % dim != 0 {
        return Err(Error::Shape(format!(
            "selective scan input of {} values is not a non-empty sequence of {dim}-wide tokens",
            x.len()
        )));
    }
    let a = p.a.data();
    let mut h = vec![0.0; dim * state];
    let mut delta = vec![0.0; dim];
    let mut bk = vec![0.0; state];
    let mut ck = vec![0.0; state];
    let mut y = Vec::with_capacity(x.len());
    for token in x.chunks_exact(dim) {
        project(token, p.delta_weight.data(), p.delta_bias.data(), &mut delta);
        project(token, p.b_weight.data(), p.b_bias.data(), &mut bk);
        project(token, p.c_weight.data(), p.c_bias.data(), &mut ck);
        for ch in 0..dim {
            let dt = softplus(delta[ch]);
            let xv = token[ch];
            let mut acc = p.d.data()[ch] * xv;
            let hs = &mut h[ch * state..(ch + 1) * state];
            let arow = &a[ch * state..(ch + 1) * state];
            for s in 0..state {
                let (a_bar, b_scale) = zoh(arow[s], dt);
                hs[s] = a_bar * hs[s] + b_scale * bk[s] * xv;
                acc += ck[s] * hs[s];
            }
            y.push(acc);
        }
    }
    Ok(y)
}
