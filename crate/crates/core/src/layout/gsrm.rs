use crate::numerics::Tensor;
use crate::{Error, Result};

/// A bijection on band indices. `forward[i]` is the source band placed at
/// position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &src) in forward.iter().enumerate() {
            if src >= n || inverse[src] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "{forward:?} is not a permutation of 0..{n}"
                )));
            }
            inverse[src] = i;
        }
        Ok(Self { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &s)| i == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Symmetric `C × C` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub size: usize,
    pub data: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }
}

/// Pearson correlation between every pair of channels over all `H·W`
/// positions.
///
/// A channel whose standard deviation is at most `1e-12 · max(1, |mean|)`
/// is degenerate: its correlation with every other channel is 0. The
/// diagonal is always 1.
pub fn spectral_correlation_matrix(f: &Tensor) -> Result<CorrelationMatrix> {
    let (h, w, c) = f.dims3()?;
    let n = (h * w) as f64;
    let data = f.data();

    let mut mean = vec![0.0; c];
    for px in data.chunks_exact(c) {
        for (m, v) in mean.iter_mut().zip(px) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);

    let mut cross = vec![0.0; c * c];
    let mut centred = vec![0.0; c];
    for px in data.chunks_exact(c) {
        for ((z, v), m) in centred.iter_mut().zip(px).zip(&mean) {
            *z = v - m;
        }
        for i in 0..c {
            let zi = centred[i];
            for j in i..c {
                cross[i * c + j] += zi * centred[j];
            }
        }
    }

    let degenerate: Vec<bool> = (0..c)
        .map(|i| (cross[i * c + i] / n).sqrt() <= 1e-12 * mean[i].abs().max(1.0))
        .collect();
    let mut out = vec![0.0; c * c];
    for i in 0..c {
        out[i * c + i] = 1.0;
        for j in i + 1..c {
            let r = if degenerate[i] || degenerate[j] {
                0.0
            } else {
                (cross[i * c + j] / (cross[i * c + i] * cross[j * c + j]).sqrt()).clamp(-1.0, 1.0)
            };
            out[i * c + j] = r;
            out[j * c + i] = r;
        }
    }
    Ok(CorrelationMatrix { size: c, data: out })
}

/// Mean correlation of each band with every other band (self excluded).
/// A single band gets 0.
pub fn global_correlation(corr: &CorrelationMatrix) -> Vec<f64> {
    let c = corr.size;
    (0..c)
        .map(|i| {
            if c < 2 {
                return 0.0;
            }
            let s: f64 = (0..c).filter(|&j| j != i).map(|j| corr.get(i, j)).sum();
            s / (c - 1) as f64
        })
        .collect()
}

/// Band order by descending global correlation; ties keep ascending
/// original index.
pub fn gsrm_order(f: &Tensor) -> Result<Permutation> {
    let g = global_correlation(&spectral_correlation_matrix(f)?);
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| g[b].total_cmp(&g[a]));
    Permutation::new(order)
}

/// Reorders whole band slabs. `Forward` produces `out[.., i] = f[.., σ(i)]`,
/// `Inverse` undoes it.
pub fn apply_band_permutation(f: &Tensor, p: &Permutation, direction: Direction) -> Result<Tensor> {
    let (h, w, c) = f.dims3()?;
    if p.len() != c {
        return Err(Error::Shape(format!(
            "permutation of {} bands applied to a volume with {c} bands",
            p.len()
        )));
    }
    let map = match direction {
        Direction::Forward => p.forward(),
        Direction::Inverse => p.inverse(),
    };
    let mut out = Vec::with_capacity(h * w * c);
    for px in f.data().chunks_exact(c) {
        out.extend(map.iter().map(|&src| px[src]));
    }
    Tensor::new(vec![h, w, c], out)
}
