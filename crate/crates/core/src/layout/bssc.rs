use crate::numerics::Tensor;
use crate::{Error, Result};

/// Order in which a volume is serialised into one sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Traversal {
    /// Band slab by band slab. Even slabs are read in row-major raster
    /// order, odd slabs in the exact reverse raster order, so consecutive
    /// sequence elements are always spatial neighbours or the same pixel in
    /// adjacent bands.
    #[default]
    Serpentine,
    /// Band slab by band slab, every slab in row-major raster order.
    Raster,
}

/// `order[k]` is the canonical (`[H, W, C]`, channel fastest) flat index of
/// the `k`-th element of the sequence.
pub fn bssc_order(h: usize, w: usize, c: usize, traversal: Traversal) -> Vec<usize> {
    let mut order = Vec::with_capacity(h * w * c);
    for band in 0..c {
        let reversed = traversal == Traversal::Serpentine && band % 2 == 1;
        for p in 0..h * w {
            let pixel = if reversed { h * w - 1 - p } else { p };
            order.push(pixel * c + band);
        }
    }
    order
}

pub fn bssc_flatten(f: &Tensor, traversal: Traversal) -> Result<Vec<f64>> {
    let (h, w, c) = f.dims3()?;
    let data = f.data();
    Ok(bssc_order(h, w, c, traversal)
        .into_iter()
        .map(|i| data[i])
        .collect())
}

pub fn bssc_unflatten(
    seq: &[f64],
    (h, w, c): (usize, usize, usize),
    traversal: Traversal,
) -> Result<Tensor> {
    if seq.len() != h * w * c {
        return Err(Error::Shape(format!(
            "sequence of length {} cannot fill a {h}x{w}x{c} volume",
            seq.len()
        )));
    }
    let mut out = vec![0.0; seq.len()];
    for (&i, &v) in bssc_order(h, w, c, traversal).iter().zip(seq) {
        out[i] = v;
    }
    Tensor::new(vec![h, w, c], out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    #[test]
    fn single_pixel_is_the_spectrum() {
        let f = Tensor::new(vec![1, 1, 4], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(bssc_flatten(&f, Traversal::Serpentine).unwrap(), f.data());
    }

    #[test]
    fn two_cubed_order() {
        // (y, x, band) -> (y·2 + x)·2 + band; slab 0 forward, slab 1 reversed.
        assert_eq!(
            bssc_order(2, 2, 2, Traversal::Serpentine),
            vec![0, 2, 4, 6, 7, 5, 3, 1]
        );
        assert_eq!(
            bssc_order(2, 2, 2, Traversal::Raster),
            vec![0, 2, 4, 6, 1, 3, 5, 7]
        );
    }

    #[test]
    fn serpentine_is_continuous_at_slab_boundaries() {
        let (h, w, c) = (3, 4, 5);
        let order = bssc_order(h, w, c, Traversal::Serpentine);
        for band in 1..c {
            let (prev, next) = (order[band * h * w - 1], order[band * h * w]);
            assert_eq!(prev / c, next / c, "same pixel across the slab boundary");
            assert_eq!(next % c, prev % c + 1);
        }
    }

    #[test]
    fn roundtrip() {
        let mut rng = Rng::new(5);
        let f = Tensor::from_fn(&[3, 5, 4], |_| rng.normal());
        for t in [Traversal::Serpentine, Traversal::Raster] {
            let seq = bssc_flatten(&f, t).unwrap();
            assert_eq!(bssc_unflatten(&seq, (3, 5, 4), t).unwrap(), f);
        }
        assert!(bssc_unflatten(&[0.0; 5], (2, 2, 2), Traversal::Serpentine).is_err());
    }
}
