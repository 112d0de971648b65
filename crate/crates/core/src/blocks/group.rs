use super::{gscb_forward, lssb_forward, BlockConfig, CsmgWeights, CssmWeights};
use crate::numerics::{add, conv2d, Tensor};
use crate::Result;

/// Local block followed by global block.
pub fn cssm_forward(f: &Tensor, w: &CssmWeights, cfg: &BlockConfig) -> Result<Tensor> {
    let local = lssb_forward(f, &w.local, cfg)?;
    gscb_forward(&local, &w.global, cfg)
}

/// Stacked CSSMs, a 3×3 tail convolution, and the group residual.
pub fn csmg_forward(f: &Tensor, w: &CsmgWeights, cfg: &BlockConfig) -> Result<Tensor> {
    let mut x = f.clone();
    for block in &w.blocks {
        x = cssm_forward(&x, block, cfg)?;
    }
    add(&conv2d(&x, &w.tail_kernel, &w.tail_bias)?, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::MambaBlockWeights;
    use crate::layout::LayoutConfig;
    use crate::numerics::{xavier_init, Rng};

    fn cfg(lssp: bool, gsrm: bool) -> BlockConfig {
        BlockConfig {
            layout: LayoutConfig::new(2, 2, 4).unwrap(),
            lssp_enabled: lssp,
            gsrm_enabled: gsrm,
        }
    }

    fn random_cssm(rng: &mut Rng) -> CssmWeights {
        CssmWeights {
            local: MambaBlockWeights::init(rng, 8, 2, 16, 4).unwrap(),
            global: MambaBlockWeights::init(rng, 8, 2, 16, 4).unwrap(),
        }
    }

    #[test]
    fn residual_only_group() {
        let mut rng = Rng::new(1);
        let f = Tensor::from_fn(&[4, 4, 8], |_| rng.normal());
        let zero = CssmWeights {
            local: MambaBlockWeights::zeroed(8, 2, 16, 4).unwrap(),
            global: MambaBlockWeights::zeroed(8, 2, 16, 4).unwrap(),
        };
        let mut w = CsmgWeights {
            blocks: vec![zero],
            tail_kernel: xavier_init(&mut rng, &[3, 3, 8, 8]).unwrap(),
            tail_bias: Tensor::zeros(&[8]),
        };
        let out = csmg_forward(&f, &w, &cfg(true, true)).unwrap();
        let want = add(&conv2d(&f, &w.tail_kernel, &w.tail_bias).unwrap(), &f).unwrap();
        assert_eq!(out, want);

        w.tail_kernel = Tensor::zeros(&[3, 3, 8, 8]);
        assert_eq!(csmg_forward(&f, &w, &cfg(true, true)).unwrap(), f);
    }

    #[test]
    fn stacked_blocks_compose() {
        let mut rng = Rng::new(2);
        let f = Tensor::from_fn(&[4, 4, 8], |_| rng.normal());
        let (a, b) = (random_cssm(&mut rng), random_cssm(&mut rng));
        let c = cfg(true, true);
        // Centre-tap identity kernel passes the stack output through.
        let w = CsmgWeights {
            blocks: vec![a.clone(), b.clone()],
            tail_kernel: Tensor::from_fn(&[3, 3, 8, 8], |i| {
                let (tap, ci, co) = (i / 64, (i / 8) % 8, i % 8);
                if tap == 4 && ci == co { 1.0 } else { 0.0 }
            }),
            tail_bias: Tensor::zeros(&[8]),
        };
        let two = cssm_forward(&cssm_forward(&f, &a, &c).unwrap(), &b, &c).unwrap();
        let group = csmg_forward(&f, &w, &c).unwrap();
        assert_eq!(group, add(&two, &f).unwrap());
    }

    #[test]
    fn lssp_toggle_changes_output() {
        let mut rng = Rng::new(3);
        let f = Tensor::from_fn(&[4, 4, 8], |_| rng.normal());
        let w = CsmgWeights {
            blocks: vec![random_cssm(&mut rng)],
            tail_kernel: xavier_init(&mut rng, &[3, 3, 8, 8]).unwrap(),
            tail_bias: Tensor::zeros(&[8]),
        };
        let on = csmg_forward(&f, &w, &cfg(true, true)).unwrap();
        let off = csmg_forward(&f, &w, &cfg(false, true)).unwrap();
        assert!(on.max_abs_diff(&off).unwrap() > 0.0);
    }
}
