//! Weight file layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "HSRW"
//! 4       4     u32 format version (1)
//! 8       8     u64 total file length in bytes
//! 16      44    u32 × 11: bands, channels, groups, cssm_per_group,
//!               window_h, window_w, window_c, scale, state_size,
//!               ca_reduction, mlp_ratio
//! 60      4     u8 lssp_enabled, u8 gsrm_enabled, 2 reserved zero bytes
//! 64      8     u64 seed
//! 72      4     u32 array count
//! 76      …     per array: u32 rank, rank × u32 extents, f32 values
//! end-4   4     u32 CRC-32 (IEEE) of every preceding byte
//! ```
//!
//! Arrays appear in [`ModelWeights::tensors`] order.

use std::path::Path;

use super::{ModelConfig, ModelWeights};
use crate::hsio::write_atomic;
use crate::{Error, Result};

pub const WEIGHTS_MAGIC: [u8; 4] = *b"HSRW";
pub const WEIGHTS_VERSION: u32 = 1;
const PREAMBLE: usize = 16;

fn encode(cfg: &ModelConfig, weights: &ModelWeights) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(&WEIGHTS_MAGIC);
    out.extend_from_slice(&WEIGHTS_VERSION.to_le_bytes());
    out.extend_from_slice(&0u64.to_le_bytes());
    let counts = [
        cfg.bands,
        cfg.channels,
        cfg.groups,
        cfg.cssm_per_group,
        cfg.window_h,
        cfg.window_w,
        cfg.window_c,
        cfg.scale,
        cfg.state_size,
        cfg.ca_reduction,
        cfg.mlp_ratio,
    ];
    for v in counts {
        out.extend_from_slice(&u32_of(v)?.to_le_bytes());
    }
    out.extend_from_slice(&[cfg.lssp_enabled as u8, cfg.gsrm_enabled as u8, 0, 0]);
    out.extend_from_slice(&cfg.seed.to_le_bytes());

    let tensors = weights.tensors();
    out.extend_from_slice(&u32_of(tensors.len())?.to_le_bytes());
    let mut offset = 0;
    for t in tensors {
        out.extend_from_slice(&u32_of(t.rank())?.to_le_bytes());
        for &d in t.shape() {
            out.extend_from_slice(&u32_of(d)?.to_le_bytes());
        }
        for (i, &v) in t.data().iter().enumerate() {
            let narrow = v as f32;
            if !narrow.is_finite() {
                return Err(Error::NonFinite { index: offset + i });
            }
            out.extend_from_slice(&narrow.to_le_bytes());
        }
        offset += t.len();
    }
    let total = (out.len() + 4) as u64;
    out[8..16].copy_from_slice(&total.to_le_bytes());
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

fn u32_of(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::InvalidArgument(format!("{v} does not fit in u32")))
}

/// Writes `weights` (values narrowed to f32) with `cfg` embedded. The file
/// is replaced atomically.
pub fn save_weights(path: impl AsRef<Path>, cfg: &ModelConfig, weights: &ModelWeights) -> Result<()> {
    cfg.validate()?;
    let template = ModelWeights::zeroed(cfg)?;
    check_shapes(&template, weights)?;
    write_atomic(path.as_ref(), &encode(cfg, weights)?)
}

fn check_shapes(template: &ModelWeights, weights: &ModelWeights) -> Result<()> {
    let (want, got) = (template.tensors(), weights.tensors());
    if want.len() != got.len() {
        return Err(Error::Shape(format!(
            "expected {} weight arrays, got {}",
            want.len(),
            got.len()
        )));
    }
    for (i, (a, b)) in want.iter().zip(&got).enumerate() {
        if a.shape() != b.shape() {
            return Err(Error::Shape(format!(
                "weight array {i}: expected shape {:?}, got {:?}",
                a.shape(),
                b.shape()
            )));
        }
    }
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.pos + n;
        if end > self.buf.len() {
            return Err(Error::InvalidHeader(format!(
                "weight body overruns the declared length at byte {}",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        self.u32().map(|v| v as usize)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn decode(bytes: &[u8]) -> Result<(ModelConfig, ModelWeights)> {
    if bytes.len() < PREAMBLE {
        return Err(Error::Truncated {
            what: "weight file header",
            expected: PREAMBLE,
            actual: bytes.len(),
        });
    }
    let found: [u8; 4] = bytes[..4].try_into().unwrap();
    if found != WEIGHTS_MAGIC {
        return Err(Error::BadMagic {
            expected: WEIGHTS_MAGIC,
            found,
        });
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != WEIGHTS_VERSION {
        return Err(Error::UnsupportedVersion {
            found: version,
            supported: WEIGHTS_VERSION,
        });
    }
    let declared = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    if bytes.len() < declared {
        return Err(Error::Truncated {
            what: "weight file",
            expected: declared,
            actual: bytes.len(),
        });
    }
    if bytes.len() > declared || declared < PREAMBLE + 4 {
        return Err(Error::InvalidHeader(format!(
            "declared length {declared} but file has {} bytes",
            bytes.len()
        )));
    }
    let (body, tail) = bytes.split_at(declared - 4);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(Error::Checksum {
            what: "weight file",
            stored,
            computed,
        });
    }

    let mut r = Reader {
        buf: body,
        pos: PREAMBLE,
    };
    let mut counts = [0usize; 11];
    for c in &mut counts {
        *c = r.usize()?;
    }
    let flags = r.take(4)?;
    let flag = |b: u8| match b {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::InvalidHeader(format!("toggle byte {b} is not 0 or 1"))),
    };
    let (lssp_enabled, gsrm_enabled) = (flag(flags[0])?, flag(flags[1])?);
    let seed = r.u64()?;
    let [bands, channels, groups, cssm_per_group, window_h, window_w, window_c, scale, state_size, ca_reduction, mlp_ratio] =
        counts;
    let cfg = ModelConfig {
        bands,
        channels,
        groups,
        cssm_per_group,
        window_h,
        window_w,
        window_c,
        scale,
        state_size,
        ca_reduction,
        mlp_ratio,
        lssp_enabled,
        gsrm_enabled,
        seed,
    };
    cfg.validate()
        .map_err(|e| Error::InvalidHeader(format!("embedded config: {e}")))?;

    let mut weights = ModelWeights::zeroed(&cfg)?;
    let count = r.usize()?;
    let mut slots = weights.tensors_mut();
    if count != slots.len() {
        return Err(Error::InvalidHeader(format!(
            "file has {count} arrays, config implies {}",
            slots.len()
        )));
    }
    for (i, slot) in slots.iter_mut().enumerate() {
        let rank = r.usize()?;
        let shape = (0..rank).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
        if shape != slot.shape() {
            return Err(Error::InvalidHeader(format!(
                "array {i} has shape {shape:?}, config implies {:?}",
                slot.shape()
            )));
        }
        let raw = r.take(4 * slot.len())?;
        for (dst, chunk) in slot.data_mut().iter_mut().zip(raw.chunks_exact(4)) {
            *dst = f32::from_le_bytes(chunk.try_into().unwrap()) as f64;
        }
    }
    drop(slots);
    if r.pos != body.len() {
        return Err(Error::InvalidHeader(format!(
            "{} unread bytes after the last array",
            body.len() - r.pos
        )));
    }
    Ok((cfg, weights))
}

/// Reads a weight file and its embedded config.
pub fn load_weights(path: impl AsRef<Path>) -> Result<(ModelConfig, ModelWeights)> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// Reads a weight file and rejects it unless its architecture matches
/// `expected` (the seed is not compared).
pub fn load_weights_for(path: impl AsRef<Path>, expected: &ModelConfig) -> Result<ModelWeights> {
    let (found, weights) = load_weights(path)?;
    if !found.same_architecture(expected) {
        return Err(Error::ConfigMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(weights)
}
