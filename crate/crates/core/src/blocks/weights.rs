use crate::layout::LayoutConfig;
use crate::numerics::{xavier_init, Rng, Tensor};
use crate::ssm::BssmWeights;
use crate::{Error, Result};

/// Block-level switches and layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockConfig {
    pub layout: LayoutConfig,
    /// Off: the local mixer scans the whole volume as one sequence.
    pub lssp_enabled: bool,
    /// Off: the global mixer keeps the natural band order.
    pub gsrm_enabled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerNormWeights {
    pub gamma: Tensor,
    pub beta: Tensor,
}

impl LayerNormWeights {
    pub fn identity(channels: usize) -> Self {
        Self {
            gamma: Tensor::full(&[channels], 1.0),
            beta: Tensor::zeros(&[channels]),
        }
    }

    pub fn zeroed(channels: usize) -> Self {
        Self {
            gamma: Tensor::zeros(&[channels]),
            beta: Tensor::zeros(&[channels]),
        }
    }

    pub fn tensors(&self) -> Vec<&Tensor> {
        vec![&self.gamma, &self.beta]
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        vec![&mut self.gamma, &mut self.beta]
    }
}

/// Squeeze-and-excitation gate: `C → C/r → C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelAttentionWeights {
    pub reduce_weight: Tensor,
    pub reduce_bias: Tensor,
    pub expand_weight: Tensor,
    pub expand_bias: Tensor,
}

fn reduced_width(channels: usize, reduction: usize) -> Result<usize> {
    if reduction == 0 || channels % reduction != 0 || reduction > channels {
        return Err(Error::InvalidArgument(format!(
            "channel attention reduction {reduction} must divide {channels} channels"
        )));
    }
    Ok(channels / reduction)
}

impl ChannelAttentionWeights {
    pub fn init(rng: &mut Rng, channels: usize, reduction: usize) -> Result<Self> {
        let hidden = reduced_width(channels, reduction)?;
        let reduce_weight = xavier_init(rng, &[channels, hidden])?;
        let expand_weight = xavier_init(rng, &[hidden, channels])?;
        Ok(Self {
            reduce_weight,
            reduce_bias: Tensor::zeros(&[hidden]),
            expand_weight,
            expand_bias: Tensor::zeros(&[channels]),
        })
    }

    pub fn zeroed(channels: usize, reduction: usize) -> Result<Self> {
        let hidden = reduced_width(channels, reduction)?;
        Ok(Self {
            reduce_weight: Tensor::zeros(&[channels, hidden]),
            reduce_bias: Tensor::zeros(&[hidden]),
            expand_weight: Tensor::zeros(&[hidden, channels]),
            expand_bias: Tensor::zeros(&[channels]),
        })
    }

    pub fn tensors(&self) -> Vec<&Tensor> {
        vec![
            &self.reduce_weight,
            &self.reduce_bias,
            &self.expand_weight,
            &self.expand_bias,
        ]
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        vec![
            &mut self.reduce_weight,
            &mut self.reduce_bias,
            &mut self.expand_weight,
            &mut self.expand_bias,
        ]
    }
}

/// Two linear layers with a ReLU between them.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpWeights {
    pub w1: Tensor,
    pub b1: Tensor,
    pub w2: Tensor,
    pub b2: Tensor,
}

impl MlpWeights {
    pub fn init(rng: &mut Rng, channels: usize, hidden: usize) -> Result<Self> {
        let w1 = xavier_init(rng, &[channels, hidden])?;
        let w2 = xavier_init(rng, &[hidden, channels])?;
        Ok(Self {
            w1,
            b1: Tensor::zeros(&[hidden]),
            w2,
            b2: Tensor::zeros(&[channels]),
        })
    }

    pub fn zeroed(channels: usize, hidden: usize) -> Self {
        Self {
            w1: Tensor::zeros(&[channels, hidden]),
            b1: Tensor::zeros(&[hidden]),
            w2: Tensor::zeros(&[hidden, channels]),
            b2: Tensor::zeros(&[channels]),
        }
    }

    pub fn tensors(&self) -> Vec<&Tensor> {
        vec![&self.w1, &self.b1, &self.w2, &self.b2]
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        vec![&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2]
    }
}

/// Weights of one local or global Mamba block. The mixer scans scalar
/// tokens, so its width is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MambaBlockWeights {
    pub norm1: LayerNormWeights,
    pub mixer: BssmWeights,
    pub attention: ChannelAttentionWeights,
    pub norm2: LayerNormWeights,
    pub mlp: MlpWeights,
}

impl MambaBlockWeights {
    /// Random draws happen in field order: mixer, attention, MLP.
    pub fn init(
        rng: &mut Rng,
        channels: usize,
        reduction: usize,
        mlp_hidden: usize,
        state: usize,
    ) -> Result<Self> {
        let norm1 = LayerNormWeights::identity(channels);
        let mixer = BssmWeights::init(rng, 1, state)?;
        let attention = ChannelAttentionWeights::init(rng, channels, reduction)?;
        let norm2 = LayerNormWeights::identity(channels);
        let mlp = MlpWeights::init(rng, channels, mlp_hidden)?;
        Ok(Self {
            norm1,
            mixer,
            attention,
            norm2,
            mlp,
        })
    }

    /// Every branch contributes exactly zero: the block is the identity.
    pub fn zeroed(
        channels: usize,
        reduction: usize,
        mlp_hidden: usize,
        state: usize,
    ) -> Result<Self> {
        Ok(Self {
            norm1: LayerNormWeights::zeroed(channels),
            mixer: BssmWeights::zeroed(1, state),
            attention: ChannelAttentionWeights::zeroed(channels, reduction)?,
            norm2: LayerNormWeights::zeroed(channels),
            mlp: MlpWeights::zeroed(channels, mlp_hidden),
        })
    }

    pub fn channels(&self) -> usize {
        self.norm1.gamma.len()
    }

    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut v = self.norm1.tensors();
        v.extend(self.mixer.tensors());
        v.extend(self.attention.tensors());
        v.extend(self.norm2.tensors());
        v.extend(self.mlp.tensors());
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut v = self.norm1.tensors_mut();
        v.extend(self.mixer.tensors_mut());
        v.extend(self.attention.tensors_mut());
        v.extend(self.norm2.tensors_mut());
        v.extend(self.mlp.tensors_mut());
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CssmWeights {
    pub local: MambaBlockWeights,
    pub global: MambaBlockWeights,
}

impl CssmWeights {
    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut v = self.local.tensors();
        v.extend(self.global.tensors());
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut v = self.local.tensors_mut();
        v.extend(self.global.tensors_mut());
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsmgWeights {
    pub blocks: Vec<CssmWeights>,
    /// `[3, 3, C, C]`
    pub tail_kernel: Tensor,
    pub tail_bias: Tensor,
}

impl CsmgWeights {
    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut v: Vec<&Tensor> = self.blocks.iter().flat_map(CssmWeights::tensors).collect();
        v.push(&self.tail_kernel);
        v.push(&self.tail_bias);
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut v: Vec<&mut Tensor> = self
            .blocks
            .iter_mut()
            .flat_map(CssmWeights::tensors_mut)
            .collect();
        v.push(&mut self.tail_kernel);
        v.push(&mut self.tail_bias);
        v
    }
}
