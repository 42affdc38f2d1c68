//! Meet-in-the-middle search over sign vectors.
//!
//! Positions `[0, h)` form the prefix (with `u_0 = +1`) and `[h, n)` the
//! suffix. Each half is walked depth first while maintaining a 64-bit linear
//! fingerprint of its exact residue modulo `Phi_{2n}`; a full vector is a
//! candidate when the fingerprints cancel, and every candidate is verified
//! exactly before it is kept.

use rayon::prelude::*;

use super::{EnumerateError, SearchConfig};
use crate::mask::{canonical_key, cyclic_gaps};
use crate::residue::ResidueTable;

/// Largest `n` the search handles.
pub const MAX_SEARCH_N: usize = 127;

const SHARD_DEPTH: usize = 10;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Number of depth-first nodes the search visits for `n`.
pub fn search_nodes(n: usize) -> u128 {
    let suffix = (n - 1) / 2;
    let prefix = n - suffix;
    ((1u128 << prefix) - 1) + ((1u128 << (suffix + 1)) - 1)
}

struct Halves {
    n: usize,
    h: usize,
    fp: Vec<u64>,
    table: ResidueTable,
    /// Suffixes whose lowest nonzero is -1, plus the empty suffix.
    odd: Vec<(u64, u64)>,
    /// Suffixes whose lowest nonzero is +1.
    even: Vec<(u64, u64)>,
}

impl Halves {
    fn new(n: usize) -> Self {
        let table = ResidueTable::new(n);
        let w = table.width();
        let mut state = 0x5eed_0000_0000_0000 ^ n as u64;
        let weights: Vec<u64> = (0..w).map(|_| splitmix(&mut state) | 1).collect();
        let fp = (0..n)
            .map(|k| {
                table
                    .row(k)
                    .iter()
                    .zip(&weights)
                    .fold(0u64, |acc, (&c, &wt)| acc.wrapping_add((c as u64).wrapping_mul(wt)))
            })
            .collect();
        let suffix = (n - 1) / 2;
        Self {
            n,
            h: n - suffix,
            fp,
            table,
            odd: Vec::new(),
            even: Vec::new(),
        }
    }

    fn build_suffixes(&mut self) {
        let (n, h) = (self.n, self.h);
        let mut odd = Vec::new();
        let mut even = Vec::new();
        // Signs are assigned from the top down so the highest nonzero is +1.
        fn walk(
            fp: &[u64],
            h: usize,
            pos: usize,
            sign: i8,
            key: u64,
            bits: u64,
            odd: &mut Vec<(u64, u64)>,
            even: &mut Vec<(u64, u64)>,
        ) {
            if pos < h {
                if bits == 0 || sign == 1 {
                    odd.push((key, bits));
                } else {
                    even.push((key, bits));
                }
                return;
            }
            walk(fp, h, pos - 1, sign, key, bits, odd, even);
            let term = if sign > 0 { fp[pos] } else { fp[pos].wrapping_neg() };
            walk(fp, h, pos - 1, -sign, key.wrapping_add(term), bits | 1 << (pos - h), odd, even);
        }
        walk(&self.fp, h, n - 1, 1, 0, 0, &mut odd, &mut even);
        odd.sort_unstable();
        even.sort_unstable();
        self.odd = odd;
        self.even = even;
    }

    fn verify(&self, support: u128) -> bool {
        let mut sign = 1i8;
        let mut rest = support;
        let terms = std::iter::from_fn(|| {
            if rest == 0 {
                return None;
            }
            let pos = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let t = (pos, sign);
            sign = -sign;
            Some(t)
        });
        self.table.divides_terms(terms)
    }

    fn finish(&self, support: u128, gaps: &mut Vec<u16>, out: &mut Vec<u128>) {
        if support.count_ones() % 2 == 1 && self.verify(support) {
            cyclic_gaps(support, self.n, gaps);
            out.push(canonical_key(gaps, self.n));
        }
    }

    fn prefix_leaf(&self, key: u64, bits: u64, sign: i8, gaps: &mut Vec<u16>, out: &mut Vec<u128>) {
        let target = key.wrapping_neg();
        // An odd prefix count leaves -1 as the next sign.
        let table = if sign < 0 { &self.odd } else { &self.even };
        let start = table.partition_point(|&(k, _)| k < target);
        for &(k, suffix) in &table[start..] {
            if k != target {
                break;
            }
            self.finish(bits as u128 | (suffix as u128) << self.h, gaps, out);
        }
    }

    fn walk_prefix(
        &self,
        pos: usize,
        sign: i8,
        key: u64,
        bits: u64,
        gaps: &mut Vec<u16>,
        out: &mut Vec<u128>,
    ) {
        if pos == self.h {
            self.prefix_leaf(key, bits, sign, gaps, out);
            return;
        }
        self.walk_prefix(pos + 1, sign, key, bits, gaps, out);
        let term = if sign > 0 { self.fp[pos] } else { self.fp[pos].wrapping_neg() };
        self.walk_prefix(pos + 1, -sign, key.wrapping_add(term), bits | 1 << pos, gaps, out);
    }

    /// Prefix state after fixing positions `1..=depth` from the bits of `shard`.
    fn shard_state(&self, shard: u64, depth: usize) -> (i8, u64, u64) {
        let mut sign = -1i8;
        let mut key = self.fp[0];
        let mut bits = 1u64;
        for pos in 1..=depth {
            if shard >> (pos - 1) & 1 == 1 {
                let term = if sign > 0 { self.fp[pos] } else { self.fp[pos].wrapping_neg() };
                key = key.wrapping_add(term);
                bits |= 1 << pos;
                sign = -sign;
            }
        }
        (sign, key, bits)
    }
}

/// Canonical keys of all Reinhardt compositions of `n`, in ascending
/// composition order.
pub(crate) fn search_canonical_keys(n: usize, config: &SearchConfig) -> Result<Vec<u128>, EnumerateError> {
    if n > MAX_SEARCH_N {
        return Err(EnumerateError::TooLarge { n, max: MAX_SEARCH_N });
    }
    let required = search_nodes(n);
    if required > config.budget as u128 {
        return Err(EnumerateError::BudgetExceeded {
            n,
            required,
            budget: config.budget,
        });
    }
    let run = || {
        let mut halves = Halves::new(n);
        halves.build_suffixes();
        let depth = SHARD_DEPTH.min(halves.h - 1);
        let shards: Vec<Vec<u128>> = (0..1u64 << depth)
            .into_par_iter()
            .map(|shard| {
                let (sign, key, bits) = halves.shard_state(shard, depth);
                let mut gaps = Vec::new();
                let mut out = Vec::new();
                halves.walk_prefix(depth + 1, sign, key, bits, &mut gaps, &mut out);
                out
            })
            .collect();
        let mut keys: Vec<u128> = shards.into_iter().flatten().collect();
        keys.sort_unstable_by(|a, b| b.cmp(a));
        keys.dedup();
        keys
    };
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| EnumerateError::ThreadPool(e.to_string()))
            .map(|pool| pool.install(run)),
        None => Ok(run()),
    }
}
