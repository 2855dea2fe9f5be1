//! Binary stream cache: 32-byte header {magic, kind, elem, N, checksum}
//! followed by the little-endian payload (f64, or i64 for exact kinds).
//!
//! A process-wide memo avoids recomputing streams inside one run; the disk
//! file makes them survive across runs.

use super::streams::{lambda_gl2, sym2_lift, tau3, CoefficientStream, StreamKind};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

const MAGIC: &[u8; 8] = b"SCVSTRM1";
const ELEM_F64: u32 = 0;
const ELEM_I64: u32 = 1;

fn kind_code(kind: StreamKind) -> u32 {
    match kind {
        StreamKind::Gl2HolomorphicDelta => 1,
        StreamKind::Gl3Sym2Lift => 2,
        StreamKind::Gl3Tau3Proxy => 3,
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Cache directory: `SHIFTCONV_CACHE_DIR` if set, otherwise a fixed
/// subdirectory of the system temp dir.
pub fn default_cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("SHIFTCONV_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    std::env::temp_dir().join("shiftconv-cache")
}

fn cache_path(dir: &Path, kind: StreamKind, n: usize) -> PathBuf {
    dir.join(format!("{}-{}.bin", kind.tag(), n))
}

/// Serialize a stream to `dir`, atomically.
pub fn write_stream(dir: &Path, stream: &CoefficientStream) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let n = stream.len();
    let elem = if stream.kind().is_exact() { ELEM_I64 } else { ELEM_F64 };
    let mut payload = Vec::with_capacity(8 * n);
    for i in 1..=n {
        let v = stream.value(i);
        if elem == ELEM_I64 {
            payload.extend_from_slice(&(v as i64).to_le_bytes());
        } else {
            payload.extend_from_slice(&v.to_le_bytes());
        }
    }
    let mut header = Vec::with_capacity(32);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&kind_code(stream.kind()).to_le_bytes());
    header.extend_from_slice(&elem.to_le_bytes());
    header.extend_from_slice(&(n as u64).to_le_bytes());
    header.extend_from_slice(&fnv1a(&payload).to_le_bytes());

    let path = cache_path(dir, stream.kind(), n);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&header)?;
        f.write_all(&payload)?;
    }
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load a stream of exactly (kind, n) from `dir`, validating the header and
/// checksum.
pub fn read_stream(dir: &Path, kind: StreamKind, n: usize) -> Result<CoefficientStream> {
    let path = cache_path(dir, kind, n);
    let mut f = std::fs::File::open(&path)?;
    let mut header = [0u8; 32];
    f.read_exact(&mut header)?;
    if &header[0..8] != MAGIC {
        return Err(Error::CacheFormat(format!("{}: bad magic", path.display())));
    }
    let kind_read = u32::from_le_bytes(header[8..12].try_into().unwrap());
    let elem = u32::from_le_bytes(header[12..16].try_into().unwrap());
    let n_read = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let checksum = u64::from_le_bytes(header[24..32].try_into().unwrap());
    if kind_read != kind_code(kind) || n_read != n {
        return Err(Error::CacheFormat(format!(
            "{}: header (kind={kind_read}, n={n_read}) does not match request",
            path.display()
        )));
    }
    let mut payload = Vec::new();
    f.read_to_end(&mut payload)?;
    if payload.len() != 8 * n {
        return Err(Error::CacheFormat(format!(
            "{}: payload is {} bytes, expected {}",
            path.display(),
            payload.len(),
            8 * n
        )));
    }
    if fnv1a(&payload) != checksum {
        return Err(Error::CacheFormat(format!("{}: checksum mismatch", path.display())));
    }
    let mut values = vec![0.0f64; n + 1];
    for i in 0..n {
        let bytes: [u8; 8] = payload[8 * i..8 * i + 8].try_into().unwrap();
        values[i + 1] = if elem == ELEM_I64 {
            i64::from_le_bytes(bytes) as f64
        } else {
            f64::from_le_bytes(bytes)
        };
    }
    Ok(CoefficientStream::from_values(
        kind,
        values,
        format!("loaded from {}", path.display()),
    ))
}

type Memo = Mutex<HashMap<(StreamKind, usize), Arc<CoefficientStream>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute(kind: StreamKind, n: usize) -> CoefficientStream {
    match kind {
        StreamKind::Gl2HolomorphicDelta => lambda_gl2(n),
        StreamKind::Gl3Sym2Lift => sym2_lift(n),
        StreamKind::Gl3Tau3Proxy => tau3(n),
    }
}

/// Fetch a stream, trying the in-process memo, then the disk cache in `dir`
/// (or the default directory), computing and persisting on miss.
pub fn cached(kind: StreamKind, n: usize, dir: Option<&Path>) -> Arc<CoefficientStream> {
    if let Some(hit) = memo().lock().unwrap().get(&(kind, n)) {
        return Arc::clone(hit);
    }
    let dir = dir.map(Path::to_path_buf).unwrap_or_else(default_cache_dir);
    let stream = match read_stream(&dir, kind, n) {
        Ok(s) => s,
        Err(_) => {
            let s = compute(kind, n);
            // best effort: a read-only cache dir only costs recompute time
            let _ = write_stream(&dir, &s);
            s
        }
    };
    let arc = Arc::new(stream);
    memo().lock().unwrap().insert((kind, n), Arc::clone(&arc));
    arc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_dir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("shiftconv-test-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn roundtrip_float_kind() {
        let dir = tmp_dir("f64");
        let s = lambda_gl2(500);
        write_stream(&dir, &s).unwrap();
        let back = read_stream(&dir, StreamKind::Gl2HolomorphicDelta, 500).unwrap();
        for i in 1..=500 {
            assert_eq!(s.value(i), back.value(i));
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn roundtrip_exact_kind() {
        let dir = tmp_dir("i64");
        let s = tau3(300);
        write_stream(&dir, &s).unwrap();
        let back = read_stream(&dir, StreamKind::Gl3Tau3Proxy, 300).unwrap();
        for i in 1..=300 {
            assert_eq!(s.value(i), back.value(i));
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn corrupted_payload_is_rejected() {
        let dir = tmp_dir("corrupt");
        let s = tau3(64);
        let path = write_stream(&dir, &s).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 0xff;
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(
            read_stream(&dir, StreamKind::Gl3Tau3Proxy, 64),
            Err(Error::CacheFormat(_))
        ));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn memo_returns_same_allocation() {
        let dir = tmp_dir("memo");
        let a = cached(StreamKind::Gl3Tau3Proxy, 128, Some(&dir));
        let b = cached(StreamKind::Gl3Tau3Proxy, 128, Some(&dir));
        assert!(Arc::ptr_eq(&a, &b));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
