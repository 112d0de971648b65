use super::{ChannelAttentionWeights, MlpWeights};
use crate::numerics::{global_average_pool, linear, relu, sigmoid, Tensor};
use crate::Result;

/// `x · sigmoid(W₂ · relu(W₁ · gap(x) + b₁) + b₂)`, gated per channel.
pub fn channel_attention(x: &Tensor, w: &ChannelAttentionWeights) -> Result<Tensor> {
    let (_, _, c) = x.dims3()?;
    let pooled = Tensor::new(vec![c], global_average_pool(x)?)?;
    let hidden = relu(&linear(&pooled, &w.reduce_weight, &w.reduce_bias)?);
    let gates = linear(&hidden, &w.expand_weight, &w.expand_bias)?.map(sigmoid);
    let mut out = x.clone();
    for px in out.data_mut().chunks_exact_mut(c) {
        for (v, g) in px.iter_mut().zip(gates.data()) {
            *v *= g;
        }
    }
    Ok(out)
}

/// Position-wise `relu(x W₁ + b₁) W₂ + b₂`.
pub fn mlp(x: &Tensor, w: &MlpWeights) -> Result<Tensor> {
    let hidden = relu(&linear(x, &w.w1, &w.b1)?);
    linear(&hidden, &w.w2, &w.b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    #[test]
    fn zero_expand_gives_half() {
        let mut rng = Rng::new(1);
        let mut w = ChannelAttentionWeights::init(&mut rng, 8, 4).unwrap();
        w.expand_weight = Tensor::zeros(&[2, 8]);
        let x = Tensor::from_fn(&[3, 3, 8], |_| rng.normal());
        let y = channel_attention(&x, &w).unwrap();
        for (a, b) in x.data().iter().zip(y.data()) {
            assert_eq!(a / 2.0, *b);
        }
    }

    #[test]
    fn zero_input_stays_zero() {
        let mut rng = Rng::new(2);
        let mut w = ChannelAttentionWeights::init(&mut rng, 8, 2).unwrap();
        w.expand_bias = Tensor::from_fn(&[8], |_| rng.normal());
        let y = channel_attention(&Tensor::zeros(&[2, 2, 8]), &w).unwrap();
        assert!(y.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_composition_oracle() {
        let mut rng = Rng::new(3);
        let mut w = ChannelAttentionWeights::init(&mut rng, 8, 4).unwrap();
        for t in w.tensors_mut() {
            t.data_mut().iter_mut().for_each(|v| *v += rng.uniform(-0.5, 0.5));
        }
        let x = Tensor::from_fn(&[4, 4, 8], |_| rng.uniform(-1.0, 1.0));
        let y = channel_attention(&x, &w).unwrap();

        let mut gap = [0.0; 8];
        for p in 0..16 {
            for c in 0..8 {
                gap[c] += x.data()[p * 8 + c] / 16.0;
            }
        }
        let mut hid = [0.0; 2];
        for j in 0..2 {
            let mut s = w.reduce_bias.data()[j];
            for c in 0..8 {
                s += gap[c] * w.reduce_weight.data()[c * 2 + j];
            }
            hid[j] = s.max(0.0);
        }
        for c in 0..8 {
            let mut s = w.expand_bias.data()[c];
            for j in 0..2 {
                s += hid[j] * w.expand_weight.data()[j * 8 + c];
            }
            let g = 1.0 / (1.0 + (-s).exp());
            assert!(g > 0.0 && g < 1.0);
            for p in 0..16 {
                let want = x.data()[p * 8 + c] * g;
                assert!((y.data()[p * 8 + c] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_indivisible_reduction() {
        let mut rng = Rng::new(4);
        assert!(ChannelAttentionWeights::init(&mut rng, 10, 4).is_err());
        assert!(ChannelAttentionWeights::init(&mut rng, 4, 16).is_err());
        assert!(ChannelAttentionWeights::zeroed(6, 0).is_err());
    }
}
