//! Versioned JSON-lines cache of enumeration results.
//!
//! Layout of `reinhardt-<n>.v1.jsonl`:
//!
//! ```text
//! {"format":"reinhardt-polygons","version":1,"n":21}
//! {"composition":[7,7,7],"classification":{"kind":"periodic","periods":[7]}}
//! ...
//! {"trailer":{"n":21,"E":10,"E0":10,"E1":0,"sha256":"..."}}
//! ```
//!
//! The checksum covers every byte before the trailer line.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{Counts, EnumerationResult, Polygon};

pub const CACHE_VERSION: u32 = 1;
const FORMAT: &str = "reinhardt-polygons";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cache format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("cache checksum mismatch (file truncated or modified)")]
    ChecksumMismatch,
    #[error("corrupt cache: {0}")]
    Corrupt(String),
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct Trailer {
    n: usize,
    #[serde(flatten)]
    counts: Counts,
    sha256: String,
}

#[derive(Serialize, Deserialize)]
struct TrailerLine {
    trailer: Trailer,
}

pub fn cache_file_name(n: usize) -> String {
    format!("reinhardt-{n}.v{CACHE_VERSION}.jsonl")
}

fn corrupt(e: impl std::fmt::Display) -> CacheError {
    CacheError::Corrupt(e.to_string())
}

pub fn serialize_cache(result: &EnumerationResult) -> String {
    let header = Header {
        format: FORMAT.into(),
        version: CACHE_VERSION,
        n: result.n,
    };
    let mut body = serde_json::to_string(&header).expect("header serializes");
    body.push('\n');
    for p in &result.polygons {
        body.push_str(&serde_json::to_string(p).expect("polygon serializes"));
        body.push('\n');
    }
    let trailer = TrailerLine {
        trailer: Trailer {
            n: result.n,
            counts: result.counts(),
            sha256: hex::encode(Sha256::digest(body.as_bytes())),
        },
    };
    body.push_str(&serde_json::to_string(&trailer).expect("trailer serializes"));
    body.push('\n');
    body
}

pub fn parse_cache(text: &str) -> Result<EnumerationResult, CacheError> {
    let trimmed = text.strip_suffix('\n').ok_or(CacheError::ChecksumMismatch)?;
    let split = trimmed.rfind('\n').map_or(0, |i| i + 1);
    let (body, last) = trimmed.split_at(split);
    let trailer: TrailerLine = serde_json::from_str(last).map_err(|_| CacheError::ChecksumMismatch)?;
    let trailer = trailer.trailer;
    if hex::encode(Sha256::digest(body.as_bytes())) != trailer.sha256 {
        return Err(CacheError::ChecksumMismatch);
    }
    let mut lines = body.lines();
    let header: Header = serde_json::from_str(lines.next().ok_or_else(|| corrupt("missing header"))?).map_err(corrupt)?;
    if header.version != CACHE_VERSION {
        return Err(CacheError::VersionMismatch {
            found: header.version,
            expected: CACHE_VERSION,
        });
    }
    if header.format != FORMAT || header.n != trailer.n {
        return Err(corrupt("header does not match trailer"));
    }
    let polygons = lines
        .map(|l| serde_json::from_str::<Polygon>(l).map_err(corrupt))
        .collect::<Result<Vec<_>, _>>()?;
    if polygons.iter().any(|p| p.composition.n() != header.n) {
        return Err(corrupt("composition with the wrong sum"));
    }
    let result = EnumerationResult { n: header.n, polygons };
    if result.counts() != trailer.counts {
        return Err(corrupt("counts do not match the listed polygons"));
    }
    Ok(result)
}

pub fn store_cache(result: &EnumerationResult, dir: &Path) -> Result<PathBuf, CacheError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CacheError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(cache_file_name(result.n));
    let tmp = dir.join(format!("{}.tmp.{}", cache_file_name(result.n), std::process::id()));
    fs::write(&tmp, serialize_cache(result)).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))?;
    Ok(path)
}

/// `Ok(None)` when no cache file exists for `n`.
pub fn load_cache(n: usize, dir: &Path) -> Result<Option<EnumerationResult>, CacheError> {
    let path = dir.join(cache_file_name(n));
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(source) => return Err(CacheError::Io { path, source }),
    };
    let result = parse_cache(&text)?;
    if result.n != n {
        return Err(corrupt(format!("file for n = {n} holds n = {}", result.n)));
    }
    Ok(Some(result))
}
