use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use super::HsiCube;
use crate::numerics::{Rng, Tensor};
use crate::{Error, Result};

const BLOBS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthProfile {
    /// Sum of separable spatial × spectral Gaussians, values in `[0.1, 0.9]`.
    Smooth,
    /// Linear mixture of `materials` signatures with smooth abundances that
    /// sum to one. Material `m` dominates the `m`-th contiguous band group.
    Mixtures { materials: usize },
    /// Square tiles whose level depends on tile parity and band.
    Checker,
}

impl SynthProfile {
    pub fn name(self) -> &'static str {
        match self {
            Self::Smooth => "smooth",
            Self::Mixtures { .. } => "mixtures",
            Self::Checker => "checker",
        }
    }
}

impl fmt::Display for SynthProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mixtures { materials } => write!(f, "mixtures({materials})"),
            p => f.write_str(p.name()),
        }
    }
}

impl FromStr for SynthProfile {
    type Err = Error;

    /// Accepts `smooth`, `mixtures` (3 materials), `mixtures:<m>`, `checker`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => match s {
                "smooth" | "smooth-gaussians" => Ok(Self::Smooth),
                "mixtures" | "band-correlated-mixtures" => Ok(Self::Mixtures { materials: 3 }),
                "checker" | "checker-edges" => Ok(Self::Checker),
                _ => Err(Error::InvalidArgument(format!("unknown profile {s:?}"))),
            },
            Some(("mixtures", m)) => m
                .parse()
                .map(|materials| Self::Mixtures { materials })
                .map_err(|_| Error::InvalidArgument(format!("bad material count {m:?}"))),
            _ => Err(Error::InvalidArgument(format!("unknown profile {s:?}"))),
        }
    }
}

/// Upper bound on `|forward difference|` along height or width for the
/// smooth profile: `0.8 / (√e · σ_min)` with `σ_min = min(H, W) / 4`.
pub fn smooth_gradient_bound(h: usize, w: usize) -> f64 {
    0.8 / (E.sqrt() * (h.min(w) as f64 / 4.0))
}

pub fn synth_cube(
    rng: &mut Rng,
    h: usize,
    w: usize,
    b: usize,
    profile: SynthProfile,
) -> Result<HsiCube> {
    if h == 0 || w == 0 || b == 0 {
        return Err(Error::InvalidArgument(format!(
            "cube extents must be positive, got {h}x{w}x{b}"
        )));
    }
    let t = match profile {
        SynthProfile::Smooth => smooth(rng, h, w, b),
        SynthProfile::Mixtures { materials } => mixtures(rng, h, w, b, materials)?,
        SynthProfile::Checker => checker(rng, h, w, b),
    };
    HsiCube::from_clamped(t)
}

fn gauss(d: f64, sigma: f64) -> f64 {
    (-d * d / (2.0 * sigma * sigma)).exp()
}

struct Blob {
    cy: f64,
    cx: f64,
    sigma: f64,
    weight: f64,
}

fn blob(rng: &mut Rng, h: usize, w: usize) -> Blob {
    let sigma_min = h.min(w) as f64 / 4.0;
    Blob {
        cy: rng.uniform(0.0, h as f64),
        cx: rng.uniform(0.0, w as f64),
        sigma: rng.uniform(sigma_min, 2.0 * sigma_min),
        weight: rng.uniform(0.5, 1.0),
    }
}

impl Blob {
    fn at(&self, y: usize, x: usize) -> f64 {
        gauss(y as f64 - self.cy, self.sigma) * gauss(x as f64 - self.cx, self.sigma)
    }
}

/// Normalising by the weight sum (not the maximum) keeps the derivative
/// bound independent of the draw: each term's slope is at most
/// `weight / (σ √e)`.
fn smooth(rng: &mut Rng, h: usize, w: usize, b: usize) -> Tensor {
    let blobs: Vec<(Blob, f64, f64)> = (0..BLOBS)
        .map(|_| {
            let spatial = blob(rng, h, w);
            let centre = rng.uniform(0.0, b as f64);
            let width = rng.uniform(b as f64 / 4.0, b as f64 / 2.0).max(1.0);
            (spatial, centre, width)
        })
        .collect();
    let total: f64 = blobs.iter().map(|(s, ..)| s.weight).sum();
    let mut out = Tensor::zeros(&[h, w, b]);
    for (i, v) in out.data_mut().iter_mut().enumerate() {
        let (p, band) = (i / b, i % b);
        let (y, x) = (p / w, p % w);
        let s: f64 = blobs
            .iter()
            .map(|(sp, c, wd)| sp.weight * sp.at(y, x) * gauss(band as f64 - c, *wd))
            .sum();
        *v = 0.1 + 0.8 * s / total;
    }
    out
}

fn mixtures(rng: &mut Rng, h: usize, w: usize, b: usize, materials: usize) -> Result<Tensor> {
    if materials == 0 || materials > b {
        return Err(Error::InvalidArgument(format!(
            "material count {materials} must be in 1..={b}"
        )));
    }
    let signatures: Vec<Vec<f64>> = (0..materials)
        .map(|m| {
            (0..b)
                .map(|band| {
                    let level = if band * materials / b == m { 0.8 } else { 0.05 };
                    level * rng.uniform(0.97, 1.03)
                })
                .collect()
        })
        .collect();
    let fields: Vec<Vec<Blob>> = (0..materials)
        .map(|_| (0..2).map(|_| blob(rng, h, w)).collect())
        .collect();
    let mut out = Tensor::zeros(&[h, w, b]);
    let data = out.data_mut();
    for p in 0..h * w {
        let (y, x) = (p / w, p % w);
        let raw: Vec<f64> = fields
            .iter()
            .map(|f| 0.02 + f.iter().map(|bl| bl.weight * bl.at(y, x)).sum::<f64>())
            .collect();
        let norm: f64 = raw.iter().sum();
        for band in 0..b {
            let mix: f64 = raw
                .iter()
                .zip(&signatures)
                .map(|(a, s)| a / norm * s[band])
                .sum();
            data[p * b + band] = mix + 0.005 * rng.normal();
        }
    }
    Ok(out)
}

fn checker(rng: &mut Rng, h: usize, w: usize, b: usize) -> Tensor {
    let tile = (h.min(w) / 8).max(2);
    let (ty, tx) = (h.div_ceil(tile), w.div_ceil(tile));
    let jitter = rng.uniform_vec(ty * tx, -0.05, 0.05);
    let ramp = |band: usize| if b > 1 { band as f64 / (b - 1) as f64 } else { 0.5 };
    Tensor::from_fn(&[h, w, b], |i| {
        let (p, band) = (i / b, i % b);
        let (y, x) = (p / w / tile, p % w / tile);
        let level = if (y + x) % 2 == 0 {
            0.25 + 0.5 * ramp(band)
        } else {
            0.75 - 0.5 * ramp(band)
        };
        level + jitter[y * tx + x]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::spectral_correlation_matrix;

    #[test]
    fn deterministic_per_seed() {
        for p in [
            SynthProfile::Smooth,
            SynthProfile::Mixtures { materials: 2 },
            SynthProfile::Checker,
        ] {
            let a = synth_cube(&mut Rng::new(7), 12, 10, 6, p).unwrap();
            assert_eq!(a, synth_cube(&mut Rng::new(7), 12, 10, 6, p).unwrap());
            assert_ne!(a, synth_cube(&mut Rng::new(8), 12, 10, 6, p).unwrap());
        }
    }

    #[test]
    fn smooth_gradient_below_bound() {
        for seed in 0..10 {
            let (h, w, b) = (32, 24, 8);
            let c = synth_cube(&mut Rng::new(seed), h, w, b, SynthProfile::Smooth).unwrap();
            let d = c.tensor().data();
            let mut worst: f64 = 0.0;
            for y in 0..h {
                for x in 0..w {
                    for k in 0..b {
                        let v = d[(y * w + x) * b + k];
                        if y + 1 < h {
                            worst = worst.max((d[((y + 1) * w + x) * b + k] - v).abs());
                        }
                        if x + 1 < w {
                            worst = worst.max((d[(y * w + x + 1) * b + k] - v).abs());
                        }
                    }
                }
            }
            assert!(worst < smooth_gradient_bound(h, w), "seed {seed}: {worst}");
        }
    }

    #[test]
    fn two_material_groups_are_highly_correlated() {
        for seed in 0..5 {
            let c = synth_cube(
                &mut Rng::new(seed),
                32,
                32,
                16,
                SynthProfile::Mixtures { materials: 2 },
            )
            .unwrap();
            let corr = spectral_correlation_matrix(c.tensor()).unwrap();
            for i in 0..16 {
                for j in 0..16 {
                    if i / 8 == j / 8 {
                        assert!(corr.get(i, j) > 0.9, "seed {seed} ({i},{j})");
                    } else {
                        assert!(corr.get(i, j) < 0.0, "seed {seed} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("smooth".parse::<SynthProfile>().unwrap(), SynthProfile::Smooth);
        assert_eq!(
            "mixtures:5".parse::<SynthProfile>().unwrap(),
            SynthProfile::Mixtures { materials: 5 }
        );
        assert!("plaid".parse::<SynthProfile>().is_err());
        assert!(synth_cube(&mut Rng::new(0), 4, 4, 2, SynthProfile::Mixtures { materials: 3 }).is_err());
    }
}
