//! On-disk cache of Z(t) samples.
//!
//! File layout, all little-endian:
//!
//! ```text
//! magic   4 bytes  "LLZC"
//! version u32      1
//! t_start f64
//! t_end   f64
//! tol     f64
//! count   u64
//! count × (t f64, z f64)
//! ```
//!
//! One file per `(t_start, t_end, tol)` key. Writers take an exclusive lock
//! on `<dir>/.lock`, write to a temporary file and rename it into place;
//! readers take a shared lock on the same file.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result};

use super::z_unchecked;

const MAGIC: &[u8; 4] = b"LLZC";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 40;
const RECORD_LEN: usize = 16;
const EXTENSION: &str = "llzc";

/// Header of one cache file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheHeader {
    pub t_start: f64,
    pub t_end: f64,
    pub tol: f64,
    pub count: u64,
}

/// File name for a key; the bit patterns make it exact.
pub fn file_name(t_start: f64, t_end: f64, tol: f64) -> String {
    format!(
        "z_{:016x}_{:016x}_{:016x}.{EXTENSION}",
        t_start.to_bits(),
        t_end.to_bits(),
        tol.to_bits()
    )
}

fn lock_file(dir: &Path) -> Result<File> {
    fs::create_dir_all(dir)?;
    Ok(OpenOptions::new()
        .create(true)
        .truncate(false)
        .read(true)
        .write(true)
        .open(dir.join(".lock"))?)
}

fn encode(header: &CacheHeader, samples: &[(f64, f64)]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + RECORD_LEN * samples.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&header.t_start.to_le_bytes());
    buf.extend_from_slice(&header.t_end.to_le_bytes());
    buf.extend_from_slice(&header.tol.to_le_bytes());
    buf.extend_from_slice(&(samples.len() as u64).to_le_bytes());
    for (t, z) in samples {
        buf.extend_from_slice(&t.to_le_bytes());
        buf.extend_from_slice(&z.to_le_bytes());
    }
    buf
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

/// Decode a cache file image.
pub fn decode(bytes: &[u8]) -> Result<(CacheHeader, Vec<(f64, f64)>)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Cache("file shorter than header".into()));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let header = CacheHeader {
        t_start: f64_at(bytes, 8),
        t_end: f64_at(bytes, 16),
        tol: f64_at(bytes, 24),
        count: u64::from_le_bytes(bytes[32..40].try_into().expect("8 bytes")),
    };
    if !(header.t_start <= header.t_end) || !(header.tol > 0.0) {
        return Err(Error::Cache("inconsistent header fields".into()));
    }
    let expected = (header.count as usize)
        .checked_mul(RECORD_LEN)
        .and_then(|n| n.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(Error::Cache(format!(
            "length {} does not match record count {}",
            bytes.len(),
            header.count
        )));
    }
    let samples = bytes[HEADER_LEN..]
        .chunks_exact(RECORD_LEN)
        .map(|rec| (f64_at(rec, 0), f64_at(rec, 8)))
        .collect();
    Ok((header, samples))
}

/// Write (or replace) the file for the given key atomically.
pub fn write_file(
    dir: &Path,
    t_start: f64,
    t_end: f64,
    tol: f64,
    samples: &[(f64, f64)],
) -> Result<PathBuf> {
    let lock = lock_file(dir)?;
    lock.lock()?;
    let header = CacheHeader {
        t_start,
        t_end,
        tol,
        count: samples.len() as u64,
    };
    let target = dir.join(file_name(t_start, t_end, tol));
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        file_name(t_start, t_end, tol),
        std::process::id()
    ));
    let result = (|| -> Result<()> {
        let mut out = File::create(&tmp)?;
        out.write_all(&encode(&header, samples))?;
        out.sync_all()?;
        fs::rename(&tmp, &target)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    lock.unlock()?;
    result.map(|_| target)
}

/// Read one cache file under a shared lock.
pub fn read_file(path: &Path) -> Result<(CacheHeader, Vec<(f64, f64)>)> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let lock = lock_file(dir)?;
    lock.lock_shared()?;
    let mut bytes = Vec::new();
    let read = File::open(path).and_then(|mut f| f.read_to_end(&mut bytes));
    lock.unlock()?;
    read?;
    decode(&bytes)
}

/// In-memory view of every valid cache file in a directory, keyed by the
/// exact bit pattern of t. Lookups count hits and misses.
#[derive(Debug, Default)]
pub struct SampleCache {
    map: HashMap<u64, f64>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl SampleCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Load all `*.llzc` files under `dir`. Unreadable or corrupted files are
    /// skipped with a warning. A missing directory yields an empty cache.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut cache = Self::new();
        if !dir.exists() {
            return Ok(cache);
        }
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == EXTENSION))
            .collect();
        paths.sort();
        for path in paths {
            match read_file(&path) {
                Ok((_, samples)) => cache.extend(samples),
                Err(err) => log::warn!("ignoring cache file {}: {err}", path.display()),
            }
        }
        Ok(cache)
    }

    pub fn extend(&mut self, samples: impl IntoIterator<Item = (f64, f64)>) {
        for (t, z) in samples {
            self.map.insert(t.to_bits(), z);
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.map.contains_key(&t.to_bits())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Z(t), from the cache when present.
    pub fn z(&self, t: f64) -> f64 {
        match self.map.get(&t.to_bits()) {
            Some(&z) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                z
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                z_unchecked(t)
            }
        }
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// Fraction of lookups served from the cache (0 when nothing was asked).
    pub fn hit_rate(&self) -> f64 {
        let (h, m) = (self.hits(), self.misses());
        if h + m == 0 {
            0.0
        } else {
            h as f64 / (h + m) as f64
        }
    }

    pub fn reset_counters(&self) {
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }
}

/// Z(t) through an optional cache.
#[inline]
pub fn z_via(cache: Option<&SampleCache>, t: f64) -> f64 {
    match cache {
        Some(c) => c.z(t),
        None => z_unchecked(t),
    }
}
