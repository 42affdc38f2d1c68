//! Exhaustive enumeration of Reinhardt polygons up to dihedral symmetry,
//! with an on-disk cache.

mod cache;
mod search;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_power_of_two;
use crate::classify::{classify_unchecked, Classification};
use crate::composition::Composition;
use crate::mask::key_to_composition;

pub use cache::{cache_file_name, load_cache, parse_cache, serialize_cache, store_cache, CacheError, CACHE_VERSION};
pub use search::{search_nodes, MAX_SEARCH_N};

/// Default node budget for a search.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("n must be at least 3, got {0}")]
    TooSmall(usize),
    #[error("no Reinhardt polygons exist for n = {0} (a power of two)")]
    PowerOfTwo(usize),
    #[error("n = {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("enumerating n = {n} needs {required} search nodes, over the budget of {budget}")]
    BudgetExceeded { n: usize, required: u128, budget: u64 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    pub composition: Composition,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(rename = "E")]
    pub total: u64,
    #[serde(rename = "E0")]
    pub periodic: u64,
    #[serde(rename = "E1")]
    pub sporadic: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargestPartRow {
    pub largest_part: usize,
    #[serde(rename = "E")]
    pub total: u64,
    #[serde(rename = "E1")]
    pub sporadic: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub n: usize,
    /// Canonical compositions in ascending lexicographic order.
    pub polygons: Vec<Polygon>,
}

impl EnumerationResult {
    pub fn counts(&self) -> Counts {
        let sporadic = self.polygons.iter().filter(|p| p.classification.is_sporadic()).count() as u64;
        let total = self.polygons.len() as u64;
        Counts {
            total,
            periodic: total - sporadic,
            sporadic,
        }
    }

    pub fn by_largest_part(&self) -> Vec<LargestPartRow> {
        let mut rows: BTreeMap<usize, LargestPartRow> = BTreeMap::new();
        for p in &self.polygons {
            let m = p.composition.largest_part();
            let row = rows.entry(m).or_insert(LargestPartRow {
                largest_part: m,
                ..Default::default()
            });
            row.total += 1;
            row.sporadic += p.classification.is_sporadic() as u64;
        }
        rows.into_values().collect()
    }

    pub fn sporadic(&self) -> impl Iterator<Item = &Composition> {
        self.polygons
            .iter()
            .filter(|p| p.classification.is_sporadic())
            .map(|p| &p.composition)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSummary {
    pub n: usize,
    #[serde(flatten)]
    pub counts: Counts,
    pub by_largest_part: Vec<LargestPartRow>,
}

fn check_n(n: usize) -> Result<(), EnumerateError> {
    if n < 3 {
        return Err(EnumerateError::TooSmall(n));
    }
    if is_power_of_two(n as u64) {
        return Err(EnumerateError::PowerOfTwo(n));
    }
    Ok(())
}

/// All Reinhardt polygons with `n` sides, one canonical composition per
/// dihedral class, classified.
pub fn enumerate_reinhardt(n: usize, config: &SearchConfig) -> Result<EnumerationResult, EnumerateError> {
    check_n(n)?;
    let keys = search::search_canonical_keys(n, config)?;
    let polygons = keys
        .into_iter()
        .map(|key| {
            let composition = key_to_composition(key, n);
            let classification = classify_unchecked(&composition);
            Polygon {
                composition,
                classification,
            }
        })
        .collect();
    Ok(EnumerationResult { n, polygons })
}

/// Load from `cache_dir` when present, otherwise enumerate and store.
pub fn enumerate_cached(
    n: usize,
    config: &SearchConfig,
    cache_dir: Option<&Path>,
) -> Result<EnumerationResult, EnumerateError> {
    check_n(n)?;
    if let Some(dir) = cache_dir {
        if let Some(hit) = load_cache(n, dir)? {
            return Ok(hit);
        }
    }
    let result = enumerate_reinhardt(n, config)?;
    if let Some(dir) = cache_dir {
        store_cache(&result, dir)?;
    }
    Ok(result)
}

pub fn count_summary(
    n: usize,
    config: &SearchConfig,
    cache_dir: Option<&Path>,
) -> Result<CountSummary, EnumerateError> {
    let result = enumerate_cached(n, config, cache_dir)?;
    Ok(CountSummary {
        n,
        counts: result.counts(),
        by_largest_part: result.by_largest_part(),
    })
}
