use super::{bssc_order, Traversal};
use crate::numerics::Tensor;
use crate::{Error, Result};

/// 3-D window extents and the in-window traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutConfig {
    pub window_h: usize,
    pub window_w: usize,
    pub window_c: usize,
    pub traversal: Traversal,
}

impl LayoutConfig {
    pub fn new(window_h: usize, window_w: usize, window_c: usize) -> Result<Self> {
        let cfg = Self {
            window_h,
            window_w,
            window_c,
            traversal: Traversal::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_h == 0 || self.window_w == 0 || self.window_c == 0 {
            return Err(Error::InvalidArgument(format!(
                "window extents must be positive, got {}x{}x{}",
                self.window_h, self.window_w, self.window_c
            )));
        }
        Ok(())
    }

    pub fn window_len(&self) -> usize {
        self.window_h * self.window_w * self.window_c
    }

    /// Volume extents after padding up to whole windows.
    pub fn padded(&self, (h, w, c): (usize, usize, usize)) -> (usize, usize, usize) {
        (
            h.div_ceil(self.window_h) * self.window_h,
            w.div_ceil(self.window_w) * self.window_w,
            c.div_ceil(self.window_c) * self.window_c,
        )
    }

    pub fn window_count(&self, extents: (usize, usize, usize)) -> usize {
        let (ph, pw, pc) = self.padded(extents);
        (ph / self.window_h) * (pw / self.window_w) * (pc / self.window_c)
    }

    /// Padded-volume coordinates of every sequence element, window by
    /// window. Windows are enumerated row-major over (window row, window
    /// column, band group); inside a window the traversal order applies.
    fn coordinates(&self, extents: (usize, usize, usize)) -> Vec<(usize, usize, usize)> {
        let (ph, pw, pc) = self.padded(extents);
        let (wh, ww, wc) = (self.window_h, self.window_w, self.window_c);
        let local = bssc_order(wh, ww, wc, self.traversal);
        let mut coords = Vec::with_capacity(ph * pw * pc);
        for gy in 0..ph / wh {
            for gx in 0..pw / ww {
                for gc in 0..pc / wc {
                    for &li in &local {
                        let (pix, band) = (li / wc, li % wc);
                        coords.push((gy * wh + pix / ww, gx * ww + pix % ww, gc * wc + band));
                    }
                }
            }
        }
        coords
    }
}

/// Splits `f` into `h×w×c` windows and serialises each. Extents that are
/// not whole multiples of the window are padded by replicating the last
/// row, column or band.
pub fn lssp_partition(f: &Tensor, cfg: &LayoutConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let (h, w, c) = f.dims3()?;
    let data = f.data();
    let coords = cfg.coordinates((h, w, c));
    Ok(coords
        .chunks_exact(cfg.window_len())
        .map(|win| {
            win.iter()
                .map(|&(y, x, b)| data[(y.min(h - 1) * w + x.min(w - 1)) * c + b.min(c - 1)])
                .collect()
        })
        .collect())
}

/// Inverse of [`lssp_partition`]; values at padded positions are dropped.
pub fn lssp_merge(
    seqs: &[Vec<f64>],
    cfg: &LayoutConfig,
    (h, w, c): (usize, usize, usize),
) -> Result<Tensor> {
    cfg.validate()?;
    let expected = cfg.window_count((h, w, c));
    if seqs.len() != expected || seqs.iter().any(|s| s.len() != cfg.window_len()) {
        return Err(Error::Shape(format!(
            "expected {expected} windows of length {}, got {} windows",
            cfg.window_len(),
            seqs.len()
        )));
    }
    let mut out = Tensor::zeros(&[h, w, c]);
    let data = out.data_mut();
    for (&(y, x, b), &v) in cfg.coordinates((h, w, c)).iter().zip(seqs.iter().flatten()) {
        if y < h && x < w && b < c {
            data[(y * w + x) * c + b] = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::bssc_flatten;
    use crate::numerics::Rng;

    #[test]
    fn single_window_is_whole_volume_traversal() {
        let mut rng = Rng::new(1);
        let f = Tensor::from_fn(&[2, 3, 4], |_| rng.normal());
        let cfg = LayoutConfig::new(2, 3, 4).unwrap();
        let seqs = lssp_partition(&f, &cfg).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0], bssc_flatten(&f, Traversal::Serpentine).unwrap());
    }

    #[test]
    fn four_cubed_into_two_cubed_windows() {
        let f = Tensor::from_fn(&[4, 4, 4], |i| i as f64);
        let cfg = LayoutConfig::new(2, 2, 2).unwrap();
        let seqs = lssp_partition(&f, &cfg).unwrap();
        assert_eq!(seqs.len(), 8);
        assert!(seqs.iter().all(|s| s.len() == 8));
        // Window (0, 0, band group 0): pixels (0,0),(0,1),(1,0),(1,1) of band 0,
        // then band 1 in reverse. Canonical index = (y·4 + x)·4 + band.
        assert_eq!(seqs[0], vec![0.0, 4.0, 16.0, 20.0, 21.0, 17.0, 5.0, 1.0]);
        // Second window is band group 1 of the same spatial block.
        assert_eq!(seqs[1][0], 2.0);
        // Third window is the next spatial block to the right: x = 2.
        assert_eq!(seqs[2][0], 8.0);
    }

    #[test]
    fn merge_of_zeros_is_zero() {
        let cfg = LayoutConfig::new(2, 2, 3).unwrap();
        let n = cfg.window_count((4, 5, 3));
        let out = lssp_merge(&vec![vec![0.0; 12]; n], &cfg, (4, 5, 3)).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn traced_element_returns_to_its_source() {
        let cfg = LayoutConfig::new(2, 2, 2).unwrap();
        let f = Tensor::from_fn(&[4, 4, 4], |i| if i == 37 { 1.0 } else { 0.0 });
        let seqs = lssp_partition(&f, &cfg).unwrap();
        // 37 = (y·4 + x)·4 + b with y = 2, x = 1, b = 1.
        // Window index: gy = 1, gx = 0, gc = 0 -> 1·2·2 + 0 + 0 = 4.
        // Inside: band 1 (odd slab, reversed), local pixel (0, 1) = 1 -> 4 + (3 - 1) = 6.
        let hits: Vec<(usize, usize)> = seqs
            .iter()
            .enumerate()
            .flat_map(|(wi, s)| {
                s.iter()
                    .enumerate()
                    .filter(|(_, &v)| v == 1.0)
                    .map(move |(j, _)| (wi, j))
            })
            .collect();
        assert_eq!(hits, vec![(4, 6)]);
        let back = lssp_merge(&seqs, &cfg, (4, 4, 4)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn padding_replicates_edges_and_is_cropped() {
        let mut rng = Rng::new(2);
        let f = Tensor::from_fn(&[3, 5, 3], |_| rng.unit());
        let cfg = LayoutConfig::new(2, 2, 2).unwrap();
        let seqs = lssp_partition(&f, &cfg).unwrap();
        assert_eq!(seqs.len(), 2 * 3 * 2);
        let mut pool: Vec<f64> = seqs.iter().flatten().copied().collect();
        pool.sort_by(f64::total_cmp);
        for v in f.data() {
            assert!(pool.binary_search_by(|p| p.total_cmp(v)).is_ok());
        }
        assert_eq!(lssp_merge(&seqs, &cfg, (3, 5, 3)).unwrap(), f);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(LayoutConfig::new(0, 2, 2).is_err());
        let cfg = LayoutConfig::new(2, 2, 2).unwrap();
        assert!(lssp_merge(&[vec![0.0; 8]], &cfg, (4, 4, 4)).is_err());
        assert!(lssp_merge(&vec![vec![0.0; 7]; 8], &cfg, (4, 4, 4)).is_err());
    }
}
