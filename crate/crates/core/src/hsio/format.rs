//! Cube container layout (integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "HSIC"
//! 4       4     u32 format version (1)
//! 8       12    u32 height, width, bands
//! 20      1     sample type: 1 = f32, 2 = f64
//! 21      3     reserved, zero
//! 24      8     f64 norm_min
//! 32      8     f64 norm_max
//! 40      4     u32 CRC-32 (IEEE) of the payload
//! 44      4     u32 CRC-32 of header bytes 0..44
//! 48      …     payload, band-sequential: for b { for y { for x } }
//! ```
//!
//! Raw imports are headerless band-sequential little-endian floats with the
//! extents supplied by the caller.

use std::io::Write;
use std::path::Path;

use super::HsiCube;
use crate::numerics::Tensor;
use crate::{Error, Result};

pub const CUBE_MAGIC: [u8; 4] = *b"HSIC";
pub const CUBE_VERSION: u32 = 1;
pub const CUBE_HEADER_LEN: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleType {
    #[default]
    F32,
    F64,
}

impl SampleType {
    pub fn tag(self) -> u8 {
        match self {
            Self::F32 => 1,
            Self::F64 => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(Self::F32),
            2 => Ok(Self::F64),
            _ => Err(Error::InvalidHeader(format!("unknown sample type tag {tag}"))),
        }
    }

    pub fn size(self) -> usize {
        match self {
            Self::F32 => 4,
            Self::F64 => 8,
        }
    }

    fn write(self, v: f64, out: &mut Vec<u8>) {
        match self {
            Self::F32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
            Self::F64 => out.extend_from_slice(&v.to_le_bytes()),
        }
    }

    fn read(self, b: &[u8]) -> f64 {
        match self {
            Self::F32 => f32::from_le_bytes(b.try_into().unwrap()) as f64,
            Self::F64 => f64::from_le_bytes(b.try_into().unwrap()),
        }
    }
}

/// Band-sequential order: `(b, y, x)` → canonical index.
fn band_sequential(h: usize, w: usize, b: usize) -> impl Iterator<Item = usize> {
    (0..b).flat_map(move |band| (0..h * w).map(move |p| p * b + band))
}

pub fn encode_cube(cube: &HsiCube, sample: SampleType) -> Result<Vec<u8>> {
    let (h, w, b) = cube.dims();
    let dims = [h, w, b].map(|v| {
        u32::try_from(v).map_err(|_| Error::InvalidArgument(format!("extent {v} exceeds u32")))
    });
    let mut payload = Vec::with_capacity(h * w * b * sample.size());
    let src = cube.tensor().data();
    for i in band_sequential(h, w, b) {
        sample.write(src[i], &mut payload);
    }
    let (lo, hi) = cube.normalization();
    let mut out = Vec::with_capacity(CUBE_HEADER_LEN + payload.len());
    out.extend_from_slice(&CUBE_MAGIC);
    out.extend_from_slice(&CUBE_VERSION.to_le_bytes());
    for d in dims {
        out.extend_from_slice(&d?.to_le_bytes());
    }
    out.extend_from_slice(&[sample.tag(), 0, 0, 0]);
    out.extend_from_slice(&lo.to_le_bytes());
    out.extend_from_slice(&hi.to_le_bytes());
    out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    let header_crc = crc32fast::hash(&out);
    out.extend_from_slice(&header_crc.to_le_bytes());
    out.extend_from_slice(&payload);
    Ok(out)
}

pub fn decode_cube(bytes: &[u8]) -> Result<HsiCube> {
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            what: "cube header",
            expected: CUBE_HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let found: [u8; 4] = bytes[..4].try_into().unwrap();
    if found != CUBE_MAGIC {
        return Err(Error::BadMagic {
            expected: CUBE_MAGIC,
            found,
        });
    }
    if bytes.len() < CUBE_HEADER_LEN {
        return Err(Error::Truncated {
            what: "cube header",
            expected: CUBE_HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != CUBE_VERSION {
        return Err(Error::UnsupportedVersion {
            found: version,
            supported: CUBE_VERSION,
        });
    }
    let (stored, computed) = (u32_at(44), crc32fast::hash(&bytes[..44]));
    if stored != computed {
        return Err(Error::Checksum {
            what: "cube header",
            stored,
            computed,
        });
    }
    let (h, w, b) = (u32_at(8) as usize, u32_at(12) as usize, u32_at(16) as usize);
    if h == 0 || w == 0 || b == 0 {
        return Err(Error::InvalidHeader(format!(
            "extents must be positive, header says {h}x{w}x{b}"
        )));
    }
    let sample = SampleType::from_tag(bytes[20])?;
    let payload_len = h
        .checked_mul(w)
        .and_then(|v| v.checked_mul(b))
        .and_then(|v| v.checked_mul(sample.size()))
        .ok_or_else(|| Error::InvalidHeader(format!("extents {h}x{w}x{b} overflow")))?;
    let expected = CUBE_HEADER_LEN + payload_len;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            what: "cube payload",
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::InvalidHeader(format!(
            "{} trailing bytes after the payload",
            bytes.len() - expected
        )));
    }
    let payload = &bytes[CUBE_HEADER_LEN..];
    let (stored, computed) = (u32_at(40), crc32fast::hash(payload));
    if stored != computed {
        return Err(Error::Checksum {
            what: "cube payload",
            stored,
            computed,
        });
    }
    let mut data = vec![0.0; h * w * b];
    for (dst, chunk) in band_sequential(h, w, b).zip(payload.chunks_exact(sample.size())) {
        data[dst] = sample.read(chunk);
    }
    HsiCube::new(Tensor::new(vec![h, w, b], data)?)?.with_normalization(f64_at(24), f64_at(32))
}

/// Writes `bytes` to a temporary file beside `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn save_cube(path: impl AsRef<Path>, cube: &HsiCube, sample: SampleType) -> Result<()> {
    write_atomic(path.as_ref(), &encode_cube(cube, sample)?)
}

pub fn load_cube(path: impl AsRef<Path>) -> Result<HsiCube> {
    let path = path.as_ref();
    decode_cube(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}

/// Reads a headerless band-sequential little-endian float dump and
/// min-max normalises it to `[0, 1]`. A constant dump maps to zeros.
pub fn import_raw(
    path: impl AsRef<Path>,
    (h, w, b): (usize, usize, usize),
    sample: SampleType,
) -> Result<HsiCube> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let n = h * w * b;
    if n == 0 {
        return Err(Error::InvalidArgument(format!(
            "raw extents must be positive, got {h}x{w}x{b}"
        )));
    }
    let expected = n * sample.size();
    if bytes.len() != expected {
        return Err(Error::Truncated {
            what: "raw cube",
            expected,
            actual: bytes.len(),
        });
    }
    let mut data = vec![0.0; n];
    for (dst, chunk) in band_sequential(h, w, b).zip(bytes.chunks_exact(sample.size())) {
        data[dst] = sample.read(chunk);
    }
    let raw = Tensor::new(vec![h, w, b], data)?;
    if let Some(index) = raw.first_non_finite() {
        return Err(Error::NonFinite { index });
    }
    let lo = raw.data().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.data().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let normalized = raw.map(|v| if span > 0.0 { ((v - lo) / span).clamp(0.0, 1.0) } else { 0.0 });
    HsiCube::new(normalized)?.with_normalization(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn cube() -> HsiCube {
        let mut rng = Rng::new(4);
        HsiCube::new(Tensor::from_fn(&[3, 5, 4], |_| rng.unit())).unwrap()
    }

    #[test]
    fn roundtrip_at_stored_precision() {
        let c = cube();
        assert_eq!(decode_cube(&encode_cube(&c, SampleType::F64).unwrap()).unwrap(), c);
        let narrow = c.tensor().map(|v| v as f32 as f64);
        let back = decode_cube(&encode_cube(&c, SampleType::F32).unwrap()).unwrap();
        assert_eq!(back.tensor(), &narrow);
        let again = decode_cube(&encode_cube(&back, SampleType::F32).unwrap()).unwrap();
        assert_eq!(again, back);
    }

    #[test]
    fn payload_is_band_sequential() {
        let c = cube();
        let bytes = encode_cube(&c, SampleType::F64).unwrap();
        let first: Vec<f64> = bytes[48..48 + 15 * 8]
            .chunks(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect();
        assert_eq!(first, c.band(0));
    }

    fn reheader(bytes: &mut [u8]) {
        let crc = crc32fast::hash(&bytes[..44]);
        bytes[44..48].copy_from_slice(&crc.to_le_bytes());
    }

    #[test]
    fn distinct_errors() {
        let bytes = encode_cube(&cube(), SampleType::F32).unwrap();

        let mut magic = bytes.clone();
        magic[1] = b'X';
        assert!(matches!(decode_cube(&magic), Err(Error::BadMagic { .. })));

        match decode_cube(&bytes[..bytes.len() - 7]) {
            Err(Error::Truncated { expected, actual, .. }) => {
                assert_eq!((expected, actual), (bytes.len(), bytes.len() - 7))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(decode_cube(&bytes[..20]), Err(Error::Truncated { .. })));

        let mut payload = bytes.clone();
        payload[60] ^= 1;
        assert!(matches!(
            decode_cube(&payload),
            Err(Error::Checksum { what: "cube payload", .. })
        ));

        let mut header = bytes.clone();
        header[9] ^= 1;
        assert!(matches!(
            decode_cube(&header),
            Err(Error::Checksum { what: "cube header", .. })
        ));

        let mut zero_bands = bytes.clone();
        zero_bands[16..20].copy_from_slice(&0u32.to_le_bytes());
        reheader(&mut zero_bands);
        assert!(matches!(decode_cube(&zero_bands), Err(Error::InvalidHeader(_))));

        let mut version = bytes.clone();
        version[4] = 9;
        assert!(matches!(decode_cube(&version), Err(Error::UnsupportedVersion { .. })));
    }

    #[test]
    fn out_of_range_payload_rejected() {
        let mut bytes = encode_cube(&cube(), SampleType::F32).unwrap();
        bytes[48..52].copy_from_slice(&1.5f32.to_le_bytes());
        let crc = crc32fast::hash(&bytes[48..]);
        bytes[40..44].copy_from_slice(&crc.to_le_bytes());
        reheader(&mut bytes);
        assert!(matches!(
            decode_cube(&bytes),
            Err(Error::OutOfRange { index: 0, value }) if value == 1.5
        ));
    }

    #[test]
    fn file_roundtrip_and_raw_import() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.hsc");
        let c = cube();
        save_cube(&path, &c, SampleType::F64).unwrap();
        assert_eq!(load_cube(&path).unwrap(), c);

        let raw: Vec<u8> = (0..24)
            .flat_map(|i| (100.0f32 + 2.0 * i as f32).to_le_bytes())
            .collect();
        let raw_path = dir.path().join("c.raw");
        std::fs::write(&raw_path, raw).unwrap();
        let imported = import_raw(&raw_path, (2, 3, 4), SampleType::F32).unwrap();
        assert_eq!(imported.normalization(), (100.0, 146.0));
        // band 0 holds the first six raw values
        assert_eq!(imported.band(0)[0], 0.0);
        assert_eq!(imported.band(3)[5], 1.0);
        assert!((imported.denormalized().data()[1] - 112.0).abs() < 1e-9);
        assert!(matches!(
            import_raw(&raw_path, (2, 3, 5), SampleType::F32),
            Err(Error::Truncated { .. })
        ));
    }
}
