//! Operator persistence.
//!
//! File layout: 8-byte magic, `u32` record count, then per record a `u32`
//! header length, a JSON header and a little-endian payload. Dense payloads
//! are row-major `f64`; CSR payloads are `u64` row pointers, `u64` column
//! indices and `f64` values.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::game::GameShape;
use crate::linalg::{CsrMatrix, DenseMatrix};
use crate::scalar::Scalar;

use super::graph::ResponseGraph;
use super::operators::{DecompositionOperators, ShapeLimits};

pub const CACHE_FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"POTLABOP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Storage {
    Dense,
    Csr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordHeader {
    pub format_version: u32,
    pub shape: Vec<usize>,
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub storage: Storage,
    pub nnz: usize,
    pub payload_bytes: usize,
    /// Hex SHA-256 of the payload.
    pub checksum: String,
}

/// `ops_v<version>_<N>x<m_1>-..-<m_N>.bin`, with a scalar suffix for
/// non-`f64` tables.
pub fn cache_file_name<T: Scalar>(shape: &GameShape) -> String {
    let actions = shape
        .actions()
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join("-");
    let suffix = if std::mem::size_of::<T>() == 8 {
        String::new()
    } else {
        format!(".f{}", std::mem::size_of::<T>() * 8)
    };
    format!(
        "ops_v{CACHE_FORMAT_VERSION}_{}x{actions}{suffix}.bin",
        shape.num_players()
    )
}

fn checksum(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn dense_record<T: Scalar>(shape: &GameShape, name: &str, m: &DenseMatrix<T>) -> (RecordHeader, Vec<u8>) {
    let mut payload = Vec::with_capacity(m.data().len() * 8);
    for &x in m.data() {
        payload.extend_from_slice(&x.to_f64_lossy().to_le_bytes());
    }
    let header = RecordHeader {
        format_version: CACHE_FORMAT_VERSION,
        shape: shape.actions().to_vec(),
        name: name.into(),
        rows: m.rows(),
        cols: m.cols(),
        storage: Storage::Dense,
        nnz: m.data().len(),
        payload_bytes: payload.len(),
        checksum: checksum(&payload),
    };
    (header, payload)
}

fn csr_record<T: Scalar>(shape: &GameShape, name: &str, m: &CsrMatrix<T>) -> (RecordHeader, Vec<u8>) {
    let mut payload = Vec::with_capacity((m.rows() + 1 + 2 * m.nnz()) * 8);
    for &p in m.indptr() {
        payload.extend_from_slice(&(p as u64).to_le_bytes());
    }
    for &c in m.indices() {
        payload.extend_from_slice(&(c as u64).to_le_bytes());
    }
    for &v in m.values() {
        payload.extend_from_slice(&v.to_f64_lossy().to_le_bytes());
    }
    let header = RecordHeader {
        format_version: CACHE_FORMAT_VERSION,
        shape: shape.actions().to_vec(),
        name: name.into(),
        rows: m.rows(),
        cols: m.cols(),
        storage: Storage::Csr,
        nnz: m.nnz(),
        payload_bytes: payload.len(),
        checksum: checksum(&payload),
    };
    (header, payload)
}

/// Serialize operators into the cache container format.
pub fn encode_operators<T: Scalar>(ops: &DecompositionOperators<T>) -> Result<Vec<u8>> {
    let shape = ops.shape();
    let records = [
        csr_record(shape, "gradient", &ops.gradient_matrix()),
        csr_record(shape, "deviation", &ops.deviation_matrix()),
        dense_record(shape, "laplacian_pinv", ops.laplacian_pinv()),
    ];
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(records.len() as u32).to_le_bytes());
    for (header, payload) in &records {
        let h = serde_json::to_vec(header)?;
        out.extend_from_slice(&(h.len() as u32).to_le_bytes());
        out.extend_from_slice(&h);
        out.extend_from_slice(payload);
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).ok_or("length overflow")?;
        let s = self.bytes.get(self.pos..end).ok_or("truncated file")?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

fn read_u64s(bytes: &[u8]) -> impl Iterator<Item = u64> + '_ {
    bytes.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap()))
}

fn read_f64s(bytes: &[u8]) -> impl Iterator<Item = f64> + '_ {
    bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()))
}

fn decode_csr<T: Scalar>(h: &RecordHeader, payload: &[u8]) -> std::result::Result<CsrMatrix<T>, String> {
    let (ptr_len, nnz) = (h.rows + 1, h.nnz);
    if payload.len() != (ptr_len + 2 * nnz) * 8 {
        return Err(format!("record {} has the wrong payload size", h.name));
    }
    let (ptr, rest) = payload.split_at(ptr_len * 8);
    let (idx, vals) = rest.split_at(nnz * 8);
    CsrMatrix::from_parts(
        h.rows,
        h.cols,
        read_u64s(ptr).map(|x| x as usize).collect(),
        read_u64s(idx).map(|x| x as usize).collect(),
        read_f64s(vals).map(T::of).collect(),
    )
    .ok_or_else(|| format!("record {} is not a valid CSR matrix", h.name))
}

/// Parse and validate a cache file's bytes against `shape`.
pub fn decode_operators<T: Scalar>(
    shape: &GameShape,
    bytes: &[u8],
) -> std::result::Result<DecompositionOperators<T>, String> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(8)? != MAGIC {
        return Err("bad magic".into());
    }
    let count = cur.u32()?;
    let mut records = HashMap::new();
    for _ in 0..count {
        let hlen = cur.u32()? as usize;
        let header: RecordHeader =
            serde_json::from_slice(cur.take(hlen)?).map_err(|e| format!("bad header: {e}"))?;
        if header.format_version != CACHE_FORMAT_VERSION {
            return Err(format!("format version {}", header.format_version));
        }
        if header.shape != shape.actions() {
            return Err(format!("record for shape {:?}", header.shape));
        }
        let payload = cur.take(header.payload_bytes)?;
        if checksum(payload) != header.checksum {
            return Err(format!("checksum mismatch in record {}", header.name));
        }
        records.insert(header.name.clone(), (header, payload));
    }
    if cur.pos != bytes.len() {
        return Err("trailing bytes".into());
    }

    let graph = ResponseGraph::new(shape);
    for (name, expected) in [
        ("gradient", graph.gradient_matrix::<T>()),
        ("deviation", graph.deviation_matrix::<T>()),
    ] {
        let (h, p) = records.get(name).ok_or(format!("missing record {name}"))?;
        if h.storage != Storage::Csr || decode_csr::<T>(h, p)? != expected {
            return Err(format!("record {name} does not match the canonical edge order"));
        }
    }
    let (h, p) = records
        .get("laplacian_pinv")
        .ok_or("missing record laplacian_pinv")?;
    let a = shape.total_profiles();
    if h.storage != Storage::Dense || h.rows != a || h.cols != a || p.len() != a * a * 8 {
        return Err("laplacian_pinv has the wrong dimensions".into());
    }
    let data: Vec<T> = read_f64s(p).map(T::of).collect();
    if data.iter().any(|x| !x.is_finite()) {
        return Err("laplacian_pinv has non-finite entries".into());
    }
    Ok(DecompositionOperators::from_parts(
        graph,
        DenseMatrix::from_vec(a, a, data),
    ))
}

/// Write `bytes` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Cache {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheSource {
    Memory,
    Disk,
    Computed,
    /// A corrupt file was replaced.
    Recomputed,
}

/// Load operators from `dir` if a valid file exists; otherwise build and
/// persist them.
pub fn load_or_build<T: Scalar>(
    shape: &GameShape,
    dir: &Path,
    limits: ShapeLimits,
) -> Result<(DecompositionOperators<T>, CacheSource)> {
    limits.check(shape)?;
    let path = dir.join(cache_file_name::<T>(shape));
    let mut corrupt = false;
    match fs::File::open(&path) {
        Ok(mut f) => {
            let mut bytes = Vec::new();
            f.read_to_end(&mut bytes)?;
            match decode_operators(shape, &bytes) {
                Ok(ops) => return Ok((ops, CacheSource::Disk)),
                Err(reason) => {
                    log::warn!(
                        "operator cache {} is unusable ({reason}); recomputing",
                        path.display()
                    );
                    corrupt = true;
                }
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(e.into()),
    }
    let ops = DecompositionOperators::build_with_limits(shape, limits)?;
    if let Err(e) = write_atomic(&path, &encode_operators(&ops)?) {
        log::warn!("could not persist operators to {}: {e}", path.display());
    }
    let source = if corrupt {
        CacheSource::Recomputed
    } else {
        CacheSource::Computed
    };
    Ok((ops, source))
}

pub fn operator_cache_get(shape: &GameShape, cache_dir: &Path) -> Result<DecompositionOperators<f64>> {
    load_or_build(shape, cache_dir, ShapeLimits::default()).map(|(ops, _)| ops)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub memory_hits: usize,
    pub disk_loads: usize,
    pub computed: usize,
}

type Slot<T> = Arc<OnceLock<std::result::Result<Arc<DecompositionOperators<T>>, String>>>;

/// Thread-safe operator store with an optional on-disk backing directory.
///
/// Each shape is built at most once per cache instance, even under
/// concurrent requests.
#[derive(Debug)]
pub struct OperatorCache<T = f64> {
    dir: Option<PathBuf>,
    limits: ShapeLimits,
    slots: Mutex<HashMap<GameShape, Slot<T>>>,
    memory_hits: AtomicUsize,
    disk_loads: AtomicUsize,
    computed: AtomicUsize,
}

impl<T: Scalar> OperatorCache<T> {
    pub fn in_memory() -> Self {
        Self::new(None, ShapeLimits::default())
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self::new(Some(dir.into()), ShapeLimits::default())
    }

    pub fn new(dir: Option<PathBuf>, limits: ShapeLimits) -> Self {
        Self {
            dir,
            limits,
            slots: Mutex::new(HashMap::new()),
            memory_hits: AtomicUsize::new(0),
            disk_loads: AtomicUsize::new(0),
            computed: AtomicUsize::new(0),
        }
    }

    pub fn limits(&self) -> ShapeLimits {
        self.limits
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, shape: &GameShape) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(cache_file_name::<T>(shape)))
    }

    pub fn get(&self, shape: &GameShape) -> Result<Arc<DecompositionOperators<T>>> {
        self.get_with_source(shape).map(|(ops, _)| ops)
    }

    pub fn get_with_source(
        &self,
        shape: &GameShape,
    ) -> Result<(Arc<DecompositionOperators<T>>, CacheSource)> {
        self.limits.check(shape)?;
        let slot = {
            let mut slots = self.slots.lock().expect("cache lock poisoned");
            slots.entry(shape.clone()).or_default().clone()
        };
        let mut source = CacheSource::Memory;
        let entry = slot.get_or_init(|| {
            let built = match &self.dir {
                Some(dir) => load_or_build(shape, dir, self.limits),
                None => DecompositionOperators::build_with_limits(shape, self.limits)
                    .map(|ops| (ops, CacheSource::Computed)),
            };
            built
                .map(|(ops, s)| {
                    source = s;
                    Arc::new(ops)
                })
                .map_err(|e| e.to_string())
        });
        match source {
            CacheSource::Memory => self.memory_hits.fetch_add(1, Ordering::Relaxed),
            CacheSource::Disk => self.disk_loads.fetch_add(1, Ordering::Relaxed),
            CacheSource::Computed | CacheSource::Recomputed => {
                self.computed.fetch_add(1, Ordering::Relaxed)
            }
        };
        match entry {
            Ok(ops) => Ok((ops.clone(), source)),
            Err(msg) => Err(Error::Pseudoinverse(msg.clone())),
        }
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            memory_hits: self.memory_hits.load(Ordering::Relaxed),
            disk_loads: self.disk_loads.load(Ordering::Relaxed),
            computed: self.computed.load(Ordering::Relaxed),
        }
    }
}
