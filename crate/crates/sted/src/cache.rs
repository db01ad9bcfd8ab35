//! Embedding caches.
//!
//! [`DiskCache`] keeps one file per entry, named by the SHA-256 of the
//! provider id, model id and input text. A record holds, in order: the
//! provider id and the model id (each as a little-endian `u16` byte length
//! followed by UTF-8), the 32-byte SHA-256 of the text, the dimension as a
//! little-endian `u32`, and the components as little-endian `f32`s.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use serde::Serialize;
use sha2::{Digest, Sha256};
use sted_core::semantic::{EmbeddingProviderSpec, EmbeddingVector, VectorCache};

const RECORD_EXT: &str = "vec";

type Key = [u8; 32];

fn sha256(bytes: &[u8]) -> Key {
    Sha256::digest(bytes).into()
}

fn model_id(spec: &EmbeddingProviderSpec) -> &str {
    spec.model_id.as_deref().unwrap_or("")
}

fn entry_key(spec: &EmbeddingProviderSpec, text: &str) -> Key {
    let mut h = Sha256::new();
    for part in [spec.provider_id.as_str(), model_id(spec), text] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    h.finalize().into()
}

pub fn encode_record(spec: &EmbeddingProviderSpec, text: &str, vector: &EmbeddingVector) -> Vec<u8> {
    let comps = vector.components();
    let mut out = Vec::with_capacity(76 + 4 * comps.len());
    for id in [spec.provider_id.as_str(), model_id(spec)] {
        let bytes = &id.as_bytes()[..id.len().min(u16::MAX as usize)];
        out.extend_from_slice(&(bytes.len() as u16).to_le_bytes());
        out.extend_from_slice(bytes);
    }
    out.extend_from_slice(&sha256(text.as_bytes()));
    out.extend_from_slice(&(comps.len() as u32).to_le_bytes());
    for c in comps {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

/// Parsed record fields: provider id, model id, text hash, components.
pub fn decode_record(bytes: &[u8]) -> Option<(String, String, Key, Vec<f32>)> {
    let mut rest = bytes;
    let mut take = |n: usize| -> Option<&[u8]> {
        if rest.len() < n {
            return None;
        }
        let (head, tail) = rest.split_at(n);
        rest = tail;
        Some(head)
    };
    let mut ids = Vec::with_capacity(2);
    for _ in 0..2 {
        let len = u16::from_le_bytes(take(2)?.try_into().ok()?) as usize;
        ids.push(String::from_utf8(take(len)?.to_vec()).ok()?);
    }
    let hash: Key = take(32)?.try_into().ok()?;
    let dim = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
    let body = take(dim.checked_mul(4)?)?;
    if !take(1).is_none_or(|b| b.is_empty()) {
        return None;
    }
    let comps = body.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
    let model = ids.pop()?;
    let provider = ids.pop()?;
    Some((provider, model, hash, comps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub bytes: u64,
}

/// Append-only on-disk cache with an in-memory index of loaded entries.
/// Reads run concurrently; writes go to a temporary file that is renamed
/// into place, so readers never see partial records.
#[derive(Debug)]
pub struct DiskCache {
    dir: PathBuf,
    index: RwLock<HashMap<Key, EmbeddingVector>>,
    tmp_counter: AtomicU64,
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir, index: RwLock::new(HashMap::new()), tmp_counter: AtomicU64::new(0) })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    fn record_path(&self, key: &Key) -> PathBuf {
        self.dir.join(format!("{}.{RECORD_EXT}", hex::encode(key)))
    }

    fn records(dir: &Path) -> io::Result<Vec<fs::DirEntry>> {
        let mut out = Vec::new();
        match fs::read_dir(dir) {
            Ok(entries) => {
                for e in entries {
                    let e = e?;
                    if e.path().extension().is_some_and(|x| x == RECORD_EXT) {
                        out.push(e);
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(out)
    }

    pub fn stats(&self) -> io::Result<CacheStats> {
        Self::stats_at(&self.dir)
    }

    /// Statistics for a cache directory without opening (or creating) it.
    pub fn stats_at(dir: &Path) -> io::Result<CacheStats> {
        let mut stats = CacheStats { entries: 0, bytes: 0 };
        for e in Self::records(dir)? {
            stats.entries += 1;
            stats.bytes += e.metadata()?.len();
        }
        Ok(stats)
    }

    /// Removes every record; returns how many were removed.
    pub fn clear(&self) -> io::Result<usize> {
        let n = Self::clear_at(&self.dir)?;
        self.index.write().expect("cache index lock").clear();
        Ok(n)
    }

    pub fn clear_at(dir: &Path) -> io::Result<usize> {
        let records = Self::records(dir)?;
        for e in &records {
            fs::remove_file(e.path())?;
        }
        Ok(records.len())
    }

    fn load(&self, spec: &EmbeddingProviderSpec, text: &str, key: &Key) -> Option<EmbeddingVector> {
        let bytes = fs::read(self.record_path(key)).ok()?;
        let (provider, model, hash, comps) = decode_record(&bytes)?;
        if provider != spec.provider_id || model != model_id(spec) || hash != sha256(text.as_bytes()) {
            return None;
        }
        Some(EmbeddingVector::from_unit_components(comps))
    }

    fn write_record(&self, key: &Key, bytes: &[u8]) -> io::Result<()> {
        let target = self.record_path(key);
        // Valid records are never rewritten; unreadable ones are replaced.
        if fs::read(&target).is_ok_and(|b| decode_record(&b).is_some()) {
            return Ok(());
        }
        let n = self.tmp_counter.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{}.{}.{n}.tmp", hex::encode(key), std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    }
}

impl VectorCache for DiskCache {
    fn get(&self, spec: &EmbeddingProviderSpec, text: &str) -> Option<EmbeddingVector> {
        let key = entry_key(spec, text);
        if let Some(v) = self.index.read().expect("cache index lock").get(&key) {
            return Some(v.clone());
        }
        let v = self.load(spec, text, &key)?;
        self.index.write().expect("cache index lock").entry(key).or_insert_with(|| v.clone());
        Some(v)
    }

    fn put(&self, spec: &EmbeddingProviderSpec, text: &str, vector: &EmbeddingVector) {
        let key = entry_key(spec, text);
        let mut index = self.index.write().expect("cache index lock");
        if index.contains_key(&key) {
            return;
        }
        // A failed write only costs a future recomputation.
        if self.write_record(&key, &encode_record(spec, text, vector)).is_ok() {
            index.insert(key, vector.clone());
        }
    }
}

/// Process-local cache.
#[derive(Debug, Default)]
pub struct MemoryCache {
    map: RwLock<HashMap<Key, EmbeddingVector>>,
}

impl MemoryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl VectorCache for MemoryCache {
    fn get(&self, spec: &EmbeddingProviderSpec, text: &str) -> Option<EmbeddingVector> {
        self.map.read().expect("cache lock").get(&entry_key(spec, text)).cloned()
    }

    fn put(&self, spec: &EmbeddingProviderSpec, text: &str, vector: &EmbeddingVector) {
        self.map.write().expect("cache lock").entry(entry_key(spec, text)).or_insert_with(|| vector.clone());
    }
}
