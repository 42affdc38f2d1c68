//! Exhaustive sweep of the construction over `(S, blocks)` on bit masks.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::FxHashSet as HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{block_from_bits, check_pqr, odd_supports, ConstructError};
use crate::arith::{odd_prime_divisors, pqr_factorizations};
use crate::composition::Composition;
use crate::mask::{canonical_key_fast, composition_key, CanonBuf, cyclic_gaps, key_to_composition, Mask, Wide};
use crate::polynomial::Polynomial;

/// Largest `n` the sweep handles.
pub const MAX_CONSTRUCT_N: usize = Wide::BITS - 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubsetPolicy {
    /// Every nonempty proper subset of `0..p`.
    AllNontrivial,
    /// Only subsets containing 0.
    ContainsZero,
    Exactly(Vec<usize>),
}

impl SubsetPolicy {
    fn subsets(&self, p: u64) -> Result<Vec<Vec<usize>>, ConstructError> {
        let p = p as usize;
        let from_bits = |bits: u32| (0..p).filter(|i| bits >> i & 1 == 1).collect::<Vec<_>>();
        let full = (1u32 << p) - 1;
        Ok(match self {
            SubsetPolicy::AllNontrivial => (1..full).map(from_bits).collect(),
            SubsetPolicy::ContainsZero => (1..full).filter(|b| b & 1 == 1).map(from_bits).collect(),
            SubsetPolicy::Exactly(s) => {
                let mut s = s.clone();
                s.sort_unstable();
                s.dedup();
                if s.is_empty() || s.len() >= p || s.iter().any(|&x| x >= p) {
                    return Err(ConstructError::InvalidSubset { p: p as u64, s });
                }
                vec![s]
            }
        })
    }
}

/// Statistics of one `(p, q, r)` grid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    /// Constructed polynomials, one per `(S, blocks)`.
    pub raw: u64,
    /// Raw polynomials that violate the sign-vector invariants.
    pub invalid: u64,
    pub periodic: u64,
    /// Periodic ones with `S = {0}`.
    pub periodic_zero_only: u64,
    /// Odd primes `m` for which some constructed polynomial is
    /// `n/m`-periodic.
    pub periodic_quotients: Vec<u64>,
    /// Periodic polynomials whose `f2` is not `0 C 0 -C ... 0 C`.
    pub periodic_form_exceptions: u64,
    /// Distinct sporadic polygons from this grid alone, when collected.
    pub sporadic: Option<u64>,
}

impl GridReport {
    pub fn n(&self) -> u64 {
        self.p * self.q * self.r
    }
}

/// Canonical compositions of one `n`, stored as packed keys in ascending
/// composition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionSet {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl CompositionSet {
    fn from_keys<M: Mask>(n: usize, mut keys: Vec<M>) -> Self {
        keys.sort_unstable_by(|a, b| b.cmp(a));
        keys.dedup();
        let words = n.div_ceil(64);
        let mut data = Vec::with_capacity(keys.len() * words);
        for k in keys {
            k.push_words(&mut data, words);
        }
        Self { n, words, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.words
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn decode(&self, chunk: &[u64]) -> Composition {
        if self.words <= 2 {
            key_to_composition(u128::from_words(chunk), self.n)
        } else {
            key_to_composition(Wide::from_words(chunk), self.n)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Composition> + '_ {
        self.data.chunks(self.words).map(|c| self.decode(c))
    }

    pub fn contains(&self, c: &Composition) -> bool {
        if c.n() != self.n {
            return false;
        }
        let canon = c.canonicalize();
        if self.words <= 2 {
            self.search(composition_key::<u128>(&canon))
        } else {
            self.search(composition_key::<Wide>(&canon))
        }
    }

    fn search<M: Mask>(&self, key: M) -> bool {
        let chunks: Vec<&[u64]> = self.data.chunks(self.words).collect();
        chunks.binary_search_by(|k| key.cmp(&M::from_words(k))).is_ok()
    }

    pub fn largest_part_counts(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for c in self.iter() {
            *out.entry(c.largest_part()).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub n: u64,
    pub grids: Vec<GridReport>,
    /// The distinct sporadic polygons over all grids.
    pub sporadic: CompositionSet,
}

/// Ordered `(p, q, r)` with `p != q` odd primes, `r >= 2`, `pqr = n`.
pub fn factorization_grids(n: u64) -> Vec<(u64, u64, u64)> {
    pqr_factorizations(n)
}

struct Slot<M> {
    /// Per pattern: `g2` plus/minus and `f2` plus/minus masks.
    patterns: Vec<[M; 4]>,
}

struct Plan<M> {
    n: usize,
    p: u64,
    q: u64,
    r: u64,
    subsets: Vec<(bool, M, M)>,
    slots: Vec<Slot<M>>,
    primes: Vec<(u64, usize)>,
}

impl<M: Mask> Plan<M> {
    fn new(p: u64, q: u64, r: u64, policy: &SubsetPolicy) -> Result<Self, ConstructError> {
        check_pqr(p, q, r)?;
        let n = (p * q * r) as usize;
        let (pu, qu, ru) = (p as usize, q as usize, r as usize);
        let subsets = policy
            .subsets(p)?
            .into_iter()
            .map(|s| {
                let (mut plus, mut minus) = (M::zero(), M::zero());
                for k in 0..qu {
                    for &x in &s {
                        let base = k * pu * ru + x * ru;
                        let positive = (k + x) % 2 == 0;
                        let (hi, lo) = if positive { (base, base + 1) } else { (base + 1, base) };
                        plus = plus | M::bit(hi);
                        minus = minus | M::bit(lo);
                    }
                }
                (s == [0], plus, minus)
            })
            .collect();
        let slot = |offset: usize, len: usize, first: i8| {
            let patterns = odd_supports(len)
                .into_iter()
                .map(|bits| {
                    let block = block_from_bits(bits, len, first);
                    let mut m = [M::zero(); 4];
                    for (i, &c) in block.iter().enumerate().filter(|(_, &c)| c != 0) {
                        let f2 = if c > 0 { 2 } else { 3 };
                        m[f2] = m[f2] | M::bit(offset + i);
                        for k in 0..pu {
                            let positive = (c > 0) == (k % 2 == 0);
                            let at = k * qu * ru + offset + i;
                            let j = if positive { 0 } else { 1 };
                            m[j] = m[j] | M::bit(at);
                        }
                    }
                    m
                })
                .collect();
            Slot { patterns }
        };
        let t = (qu - 1) / 2;
        let mut slots = Vec::with_capacity(2 * t + 1);
        for i in 0..t {
            slots.push(slot(1 + 2 * i * ru, ru, 1));
            slots.push(slot(1 + (2 * i + 1) * ru, ru, -1));
        }
        slots.push(slot(1 + 2 * t * ru, ru - 1, 1));
        let primes = odd_prime_divisors(n as u64)
            .into_iter()
            .map(|m| (m, n / m as usize))
            .collect();
        Ok(Self {
            n,
            p,
            q,
            r,
            subsets,
            slots,
            primes,
        })
    }
}

struct Shard<M> {
    raw: u64,
    invalid: u64,
    periodic: u64,
    periodic_zero_only: u64,
    quotients: u64,
    form_exceptions: u64,
    sporadic: HashSet<M>,
    raw_keys: Vec<M>,
}

#[derive(Clone, Copy)]
struct Collect<'a> {
    sporadic: bool,
    raw: bool,
    /// Keep only sporadic polygons whose largest part is flagged.
    largest: Option<&'a [bool]>,
}

fn run_shard<M: Mask>(plan: &Plan<M>, subset: usize, first: usize, collect: Collect) -> Shard<M> {
    let n = plan.n;
    let (zero_only, g1p, g1m) = plan.subsets[subset];
    let qr = (plan.q * plan.r) as usize;
    let tail = M::low(qr - plan.r as usize);
    let nslots = plan.slots.len();
    let mut digits = vec![0usize; nslots];
    digits[0] = first;
    let mut acc = [M::zero(); 4];
    for (s, &d) in digits.iter().enumerate() {
        let pat = plan.slots[s].patterns[d];
        for j in 0..4 {
            acc[j] = acc[j] ^ pat[j];
        }
    }
    let mut out = Shard {
        raw: 0,
        invalid: 0,
        periodic: 0,
        periodic_zero_only: 0,
        quotients: 0,
        form_exceptions: 0,
        sporadic: HashSet::default(),
        raw_keys: Vec::new(),
    };
    let mut gaps: Vec<u16> = Vec::with_capacity(n);
    let mut canon = CanonBuf::default();
    loop {
        out.raw += 1;
        let [gp, gm, f2p, f2m] = acc;
        let valid = 'check: {
            if !((g1p & gp) | (g1m & gm)).is_zero() {
                break 'check false;
            }
            let fp = (g1p & !gm) | (gp & !g1m);
            let fm = (g1m & !gp) | (gm & !g1p);
            let support = fp | fm;
            if support.count_ones() % 2 == 0 {
                break 'check false;
            }
            // Odd-numbered support elements (first, third, ...) share a sign.
            let odd = support & support.prefix_xor();
            let first_positive = fp == odd;
            if !first_positive && fm != odd {
                break 'check false;
            }
            if collect.raw {
                let tag = if first_positive { M::zero() } else { M::bit(n) };
                out.raw_keys.push(support | tag);
            }
            let mut periodic = false;
            for (i, &(_, d)) in plan.primes.iter().enumerate() {
                if support.rotate_within(d, n) == support {
                    periodic = true;
                    out.quotients |= 1 << i;
                }
            }
            if periodic {
                out.periodic += 1;
                out.periodic_zero_only += zero_only as u64;
                let r = plan.r as usize;
                if f2p.shr(r) & tail != f2m & tail || f2m.shr(r) & tail != f2p & tail {
                    out.form_exceptions += 1;
                }
            } else if collect.sporadic {
                cyclic_gaps(support, n, &mut gaps);
                let keep = collect
                    .largest
                    .is_none_or(|f| f[*gaps.iter().max().expect("nonempty") as usize]);
                if keep {
                    out.sporadic.insert(canonical_key_fast(&gaps, n, &mut canon));
                }
            }
            true
        };
        out.invalid += !valid as u64;

        let mut s = nslots - 1;
        loop {
            if s == 0 {
                return out;
            }
            let slot = &plan.slots[s];
            let old = slot.patterns[digits[s]];
            digits[s] += 1;
            let wrapped = digits[s] == slot.patterns.len();
            if wrapped {
                digits[s] = 0;
            }
            let new = slot.patterns[digits[s]];
            for j in 0..4 {
                acc[j] = acc[j] ^ old[j] ^ new[j];
            }
            if !wrapped {
                break;
            }
            s -= 1;
        }
    }
}

struct Sweep<M> {
    report: GridReport,
    sporadic: HashSet<M>,
    raw_keys: Vec<M>,
}

fn sweep<M: Mask>(plan: &Plan<M>, collect: Collect) -> Sweep<M> {
    let shards: Vec<(usize, usize)> = (0..plan.subsets.len())
        .flat_map(|s| (0..plan.slots[0].patterns.len()).map(move |a| (s, a)))
        .collect();
    let parts: Vec<Shard<M>> = shards
        .into_par_iter()
        .map(|(s, a)| run_shard(plan, s, a, collect))
        .collect();
    let mut report = GridReport {
        p: plan.p,
        q: plan.q,
        r: plan.r,
        ..Default::default()
    };
    let mut sporadic = HashSet::default();
    let mut raw_keys = Vec::new();
    let mut quotients = 0u64;
    for part in parts {
        report.raw += part.raw;
        report.invalid += part.invalid;
        report.periodic += part.periodic;
        report.periodic_zero_only += part.periodic_zero_only;
        report.periodic_form_exceptions += part.form_exceptions;
        quotients |= part.quotients;
        if sporadic.is_empty() {
            sporadic = part.sporadic;
        } else {
            sporadic.extend(part.sporadic);
        }
        raw_keys.extend(part.raw_keys);
    }
    report.periodic_quotients = plan
        .primes
        .iter()
        .enumerate()
        .filter(|(i, _)| quotients >> i & 1 == 1)
        .map(|(_, &(m, _))| m)
        .collect();
    if collect.sporadic {
        report.sporadic = Some(sporadic.len() as u64);
    }
    Sweep {
        report,
        sporadic,
        raw_keys,
    }
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, ConstructError> {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| ConstructError::ThreadPool(e.to_string()))
            .map(|pool| pool.install(f)),
        None => Ok(f()),
    }
}

fn construct_with<M: Mask>(
    n: u64,
    grids: &[(u64, u64, u64)],
    policy: &SubsetPolicy,
    collect: bool,
    largest: Option<&[bool]>,
) -> Result<ConstructionResult, ConstructError> {
    let mut reports = Vec::new();
    let mut all: HashSet<M> = HashSet::default();
    for &(p, q, r) in grids {
        if p * q * r != n {
            return Err(ConstructError::GridMismatch { n, p, q, r });
        }
        let plan = Plan::<M>::new(p, q, r, policy)?;
        let s = sweep(
            &plan,
            Collect {
                sporadic: collect,
                raw: false,
                largest,
            },
        );
        if s.report.invalid > 0 {
            return Err(ConstructError::Invariant(format!(
                "{} constructed polynomials for ({p}, {q}, {r}) are not Reinhardt",
                s.report.invalid
            )));
        }
        reports.push(s.report);
        if all.is_empty() {
            all = s.sporadic;
        } else {
            all.extend(s.sporadic);
        }
    }
    Ok(ConstructionResult {
        n,
        grids: reports,
        sporadic: CompositionSet::from_keys(n as usize, all.into_iter().collect()),
    })
}

/// Distinct sporadic polygons built over the given grids, or over every
/// factorization of `n` when `grids` is `None`.
pub fn construct_sporadic(
    n: u64,
    grids: Option<&[(u64, u64, u64)]>,
    policy: &SubsetPolicy,
    threads: Option<usize>,
) -> Result<ConstructionResult, ConstructError> {
    construct_impl(n, grids, policy, threads, None)
}

/// As [`construct_sporadic`], keeping only polygons whose largest part is
/// in `largest_parts`. Grid statistics still cover every polygon.
pub fn construct_sporadic_largest_parts(
    n: u64,
    grids: Option<&[(u64, u64, u64)]>,
    policy: &SubsetPolicy,
    threads: Option<usize>,
    largest_parts: &[usize],
) -> Result<ConstructionResult, ConstructError> {
    let mut flags = vec![false; n as usize + 1];
    for &m in largest_parts.iter().filter(|&&m| m <= n as usize) {
        flags[m] = true;
    }
    construct_impl(n, grids, policy, threads, Some(&flags))
}

fn construct_impl(
    n: u64,
    grids: Option<&[(u64, u64, u64)]>,
    policy: &SubsetPolicy,
    threads: Option<usize>,
    largest: Option<&[bool]>,
) -> Result<ConstructionResult, ConstructError> {
    let all = factorization_grids(n);
    let grids = grids.unwrap_or(&all);
    if grids.is_empty() {
        return Err(ConstructError::NotPqr(n));
    }
    in_pool(threads, || {
        if n < u128::BITS as u64 {
            construct_with::<u128>(n, grids, policy, true, largest)
        } else {
            construct_with::<Wide>(n, grids, policy, true, largest)
        }
    })?
}

/// Statistics for one grid without collecting the sporadic set.
pub fn construct_grid(
    p: u64,
    q: u64,
    r: u64,
    policy: &SubsetPolicy,
    threads: Option<usize>,
) -> Result<GridReport, ConstructError> {
    check_pqr(p, q, r)?;
    let n = p * q * r;
    let result = in_pool(threads, || {
        if n < u128::BITS as u64 {
            construct_with::<u128>(n, &[(p, q, r)], policy, false, None)
        } else {
            construct_with::<Wide>(n, &[(p, q, r)], policy, false, None)
        }
    })??;
    Ok(result.grids.into_iter().next().expect("one grid"))
}

pub fn count_periodic_constructed(p: u64, q: u64, r: u64, policy: &SubsetPolicy) -> Result<u64, ConstructError> {
    Ok(construct_grid(p, q, r, policy, None)?.periodic)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InjectivityMethod {
    /// Every raw polynomial generated and compared.
    Exhaustive,
    /// For each pair `S != S'`, the equation `g1(S) - g1(S') = (f2' - f2) Phi_p(-z^{qr})`
    /// solved exactly over the admissible block differences.
    SubsetPairs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Injectivity {
    pub method: InjectivityMethod,
    pub injective: bool,
    /// Distinct raw polynomials (exhaustive method only).
    pub distinct: Option<u64>,
}

/// Raw-count limit for the exhaustive injectivity check.
const EXHAUSTIVE_LIMIT: u64 = 1 << 22;

/// Whether distinct `(S, blocks)` always give distinct `F` on the grid.
pub fn check_injective(
    p: u64,
    q: u64,
    r: u64,
    policy: &SubsetPolicy,
    method: Option<InjectivityMethod>,
) -> Result<Injectivity, ConstructError> {
    check_pqr(p, q, r)?;
    let n = p * q * r;
    let method = method.unwrap_or_else(|| {
        let raw = (policy.subsets(p).map_or(0, |s| s.len()) as u64) << (q * (r - 1) - 1).min(62);
        if raw <= EXHAUSTIVE_LIMIT {
            InjectivityMethod::Exhaustive
        } else {
            InjectivityMethod::SubsetPairs
        }
    });
    match method {
        InjectivityMethod::Exhaustive => {
            let (raw, distinct) = if n + 1 < u128::BITS as u64 {
                exhaustive::<u128>(p, q, r, policy)?
            } else {
                exhaustive::<Wide>(p, q, r, policy)?
            };
            Ok(Injectivity {
                method,
                injective: raw == distinct,
                distinct: Some(distinct),
            })
        }
        InjectivityMethod::SubsetPairs => Ok(Injectivity {
            method,
            injective: subset_pairs(p, q, r, policy)?,
            distinct: None,
        }),
    }
}

fn exhaustive<M: Mask>(p: u64, q: u64, r: u64, policy: &SubsetPolicy) -> Result<(u64, u64), ConstructError> {
    let plan = Plan::<M>::new(p, q, r, policy)?;
    let mut s = sweep(
        &plan,
        Collect {
            sporadic: false,
            raw: true,
            largest: None,
        },
    );
    if s.report.invalid > 0 {
        return Err(ConstructError::Invariant("invalid constructed polynomial".into()));
    }
    s.raw_keys.sort_unstable();
    s.raw_keys.dedup();
    Ok((s.report.raw, s.raw_keys.len() as u64))
}

fn subset_pairs(p: u64, q: u64, r: u64, policy: &SubsetPolicy) -> Result<bool, ConstructError> {
    let (pu, qu, ru) = (p as usize, q as usize, r as usize);
    let n = pu * qu * ru;
    let g1 = |s: &[usize]| {
        let mut c = vec![0i64; n];
        for k in 0..qu {
            let sk: i64 = if k % 2 == 0 { 1 } else { -1 };
            for &x in s {
                let sx = if x % 2 == 0 { sk } else { -sk };
                c[k * pu * ru + x * ru] += sx;
                c[k * pu * ru + x * ru + 1] -= sx;
            }
        }
        c
    };
    let mut gen = vec![0i64; n - qu * ru + 1];
    for k in 0..pu {
        gen[k * qu * ru] = if k % 2 == 0 { 1 } else { -1 };
    }
    let gen = Polynomial::<i64>::from_i64(&gen);
    let diffs = |len: usize, first: i8| -> BTreeSet<Vec<i8>> {
        let blocks: Vec<Vec<i8>> = odd_supports(len)
            .into_iter()
            .map(|b| block_from_bits(b, len, first))
            .collect();
        let mut out = BTreeSet::new();
        for a in &blocks {
            for b in &blocks {
                out.insert(a.iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
        out
    };
    let (da, db, dc) = (diffs(ru, 1), diffs(ru, -1), diffs(ru - 1, 1));
    let subsets: Vec<Vec<i64>> = policy.subsets(p)?.iter().map(|s| g1(s)).collect();
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            let d: Vec<i64> = subsets[i].iter().zip(&subsets[j]).map(|(a, b)| a - b).collect();
            let (quo, rem) = Polynomial::from_i64(&d).div_rem(&gen).expect("monic");
            if !rem.is_zero() {
                continue;
            }
            let mut qc: Vec<i8> = (0..qu * ru)
                .map(|k| i8::try_from(quo.coeff(k)).unwrap_or(i8::MAX))
                .collect();
            if qc[0] != 0 {
                continue;
            }
            qc.remove(0);
            let realizable = qc.chunks(ru).enumerate().all(|(b, chunk)| {
                let set = if chunk.len() < ru {
                    &dc
                } else if b % 2 == 0 {
                    &da
                } else {
                    &db
                };
                set.contains(chunk)
            });
            if realizable {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
