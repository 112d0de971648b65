use super::ModelConfig;
use crate::blocks::{CsmgWeights, CssmWeights, MambaBlockWeights};
use crate::numerics::{xavier_init, Rng, Tensor};
use crate::Result;

/// A 3×3 convolution: kernel `[3, 3, Cin, Cout]` and bias `[Cout]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvWeights {
    pub kernel: Tensor,
    pub bias: Tensor,
}

impl ConvWeights {
    pub fn init(rng: &mut Rng, cin: usize, cout: usize) -> Result<Self> {
        Ok(Self {
            kernel: xavier_init(rng, &[3, 3, cin, cout])?,
            bias: Tensor::zeros(&[cout]),
        })
    }

    pub fn zeroed(cin: usize, cout: usize) -> Self {
        Self {
            kernel: Tensor::zeros(&[3, 3, cin, cout]),
            bias: Tensor::zeros(&[cout]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelWeights {
    pub shallow: ConvWeights,
    pub groups: Vec<CsmgWeights>,
    /// Convolution after the last group, before the long skip.
    pub body: ConvWeights,
    /// One `C → 4C` convolution per ×2 pixel-shuffle stage.
    pub upsample: Vec<ConvWeights>,
    pub reconstruct: ConvWeights,
}

impl ModelWeights {
    /// Xavier-initialised weights from `Rng::new(cfg.seed)`. Draw order:
    /// shallow conv; per group, per CSSM the local then the global block,
    /// then the group tail conv; body conv; upsampling convs; reconstruction
    /// conv. Biases are zero, layer-norm scales one.
    pub fn init(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let rng = &mut Rng::new(cfg.seed);
        let c = cfg.channels;
        let block = |rng: &mut Rng| {
            MambaBlockWeights::init(rng, c, cfg.ca_reduction, cfg.mlp_hidden(), cfg.state_size)
        };
        let shallow = ConvWeights::init(rng, cfg.bands, c)?;
        let mut groups = Vec::with_capacity(cfg.groups);
        for _ in 0..cfg.groups {
            let mut blocks = Vec::with_capacity(cfg.cssm_per_group);
            for _ in 0..cfg.cssm_per_group {
                let local = block(rng)?;
                let global = block(rng)?;
                blocks.push(CssmWeights { local, global });
            }
            let tail = ConvWeights::init(rng, c, c)?;
            groups.push(CsmgWeights {
                blocks,
                tail_kernel: tail.kernel,
                tail_bias: tail.bias,
            });
        }
        let body = ConvWeights::init(rng, c, c)?;
        let upsample = (0..cfg.upsample_stages())
            .map(|_| ConvWeights::init(rng, c, 4 * c))
            .collect::<Result<_>>()?;
        let reconstruct = ConvWeights::init(rng, c, cfg.bands)?;
        Ok(Self {
            shallow,
            groups,
            body,
            upsample,
            reconstruct,
        })
    }

    /// Every array zero except the scan state matrices `A`, which keep their
    /// default (a zero `B`, `C` and `D` already silence the scan). Layer-norm
    /// scales are zero too. The forward pass reduces to the bicubic skip.
    pub fn zeroed(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let c = cfg.channels;
        let block = || {
            MambaBlockWeights::zeroed(c, cfg.ca_reduction, cfg.mlp_hidden(), cfg.state_size)
        };
        let groups = (0..cfg.groups)
            .map(|_| {
                let blocks = (0..cfg.cssm_per_group)
                    .map(|_| {
                        Ok(CssmWeights {
                            local: block()?,
                            global: block()?,
                        })
                    })
                    .collect::<Result<_>>()?;
                Ok(CsmgWeights {
                    blocks,
                    tail_kernel: Tensor::zeros(&[3, 3, c, c]),
                    tail_bias: Tensor::zeros(&[c]),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            shallow: ConvWeights::zeroed(cfg.bands, c),
            groups,
            body: ConvWeights::zeroed(c, c),
            upsample: (0..cfg.upsample_stages())
                .map(|_| ConvWeights::zeroed(c, 4 * c))
                .collect(),
            reconstruct: ConvWeights::zeroed(c, cfg.bands),
        })
    }

    /// Every array in declaration (and file) order.
    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut v = vec![&self.shallow.kernel, &self.shallow.bias];
        for g in &self.groups {
            v.extend(g.tensors());
        }
        v.extend([&self.body.kernel, &self.body.bias]);
        for u in &self.upsample {
            v.extend([&u.kernel, &u.bias]);
        }
        v.extend([&self.reconstruct.kernel, &self.reconstruct.bias]);
        v
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut v = vec![&mut self.shallow.kernel, &mut self.shallow.bias];
        for g in &mut self.groups {
            v.extend(g.tensors_mut());
        }
        v.extend([&mut self.body.kernel, &mut self.body.bias]);
        for u in &mut self.upsample {
            v.extend([&mut u.kernel, &mut u.bias]);
        }
        v.extend([&mut self.reconstruct.kernel, &mut self.reconstruct.bias]);
        v
    }

    pub fn parameter_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    /// Multiplies the reconstruction conv by `factor`, shrinking the deep
    /// path's contribution relative to the bicubic skip.
    pub fn scale_output_layer(&mut self, factor: f64) {
        for t in [&mut self.reconstruct.kernel, &mut self.reconstruct.bias] {
            t.data_mut().iter_mut().for_each(|v| *v *= factor);
        }
    }
}
