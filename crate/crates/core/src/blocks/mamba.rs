use super::{channel_attention, mlp, BlockConfig, MambaBlockWeights};
use crate::layout::{
    apply_band_permutation, bssc_flatten, bssc_unflatten, gsrm_order, lssp_merge, lssp_partition,
    Direction, Permutation,
};
use crate::numerics::{add, layer_norm, Tensor};
use crate::ssm::{bssm_forward, BssmWeights};
use crate::Result;

/// Local mixer: window partition → bidirectional scan per window → merge.
/// With LSSP disabled the whole volume is one sequence.
pub fn lssm(x: &Tensor, mixer: &BssmWeights, cfg: &BlockConfig) -> Result<Tensor> {
    let extents = x.dims3()?;
    let traversal = cfg.layout.traversal;
    if !cfg.lssp_enabled {
        let seq = bssm_forward(mixer, &bssc_flatten(x, traversal)?)?;
        return bssc_unflatten(&seq, extents, traversal);
    }
    let scanned = lssp_partition(x, &cfg.layout)?
        .iter()
        .map(|seq| bssm_forward(mixer, seq))
        .collect::<Result<Vec<_>>>()?;
    lssp_merge(&scanned, &cfg.layout, extents)
}

/// Global mixer: reorder bands by descending global correlation, scan the
/// whole volume, restore the band order. With GSRM disabled the natural
/// order is kept.
pub fn gscm(x: &Tensor, mixer: &BssmWeights, cfg: &BlockConfig) -> Result<Tensor> {
    let extents = x.dims3()?;
    let traversal = cfg.layout.traversal;
    let order = if cfg.gsrm_enabled {
        gsrm_order(x)?
    } else {
        Permutation::identity(extents.2)
    };
    let reordered = apply_band_permutation(x, &order, Direction::Forward)?;
    let seq = bssm_forward(mixer, &bssc_flatten(&reordered, traversal)?)?;
    let scanned = bssc_unflatten(&seq, extents, traversal)?;
    apply_band_permutation(&scanned, &order, Direction::Inverse)
}

/// `F̂ = mixer(LN₁(F)) + CA(LN₁(F)) + F`, `out = MLP(LN₂(F̂)) + F̂`.
pub fn mamba_block(
    f: &Tensor,
    w: &MambaBlockWeights,
    mixer: impl Fn(&Tensor) -> Result<Tensor>,
) -> Result<Tensor> {
    let normed = layer_norm(f, &w.norm1.gamma, &w.norm1.beta)?;
    let mixed = mixer(&normed)?;
    let attended = channel_attention(&normed, &w.attention)?;
    let hat = add(&add(&mixed, &attended)?, f)?;
    let refined = mlp(&layer_norm(&hat, &w.norm2.gamma, &w.norm2.beta)?, &w.mlp)?;
    add(&refined, &hat)
}

/// Local spatial-spectral Mamba block.
pub fn lssb_forward(f: &Tensor, w: &MambaBlockWeights, cfg: &BlockConfig) -> Result<Tensor> {
    mamba_block(f, w, |x| lssm(x, &w.mixer, cfg))
}

/// Global spectral-correlation Mamba block.
pub fn gscb_forward(f: &Tensor, w: &MambaBlockWeights, cfg: &BlockConfig) -> Result<Tensor> {
    mamba_block(f, w, |x| gscm(x, &w.mixer, cfg))
}
