//! The sporadic construction for `n = pqr` and the decomposition for
//! `n = pq`.
//!
//! A constructed polynomial is
//! `F = f1 Phi_q(-z^{pr}) + f2 Phi_p(-z^{qr})` with
//! `f1 = sum_{s in S} (-1)^s z^{rs} (1 - z)` and `f2` laid out as
//! `0 A_1 B_1 ... A_t B_t C`, `t = (q - 1) / 2`.

mod decompose;
mod sweep;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::is_prime;
use crate::composition::SignVector;
use crate::polynomial::Polynomial;
use crate::IntPolynomial;

pub use decompose::{decompose, has_trivial_decomposition, is_trivial, recompose, DecomposeError, Decomposition, TrivialSides};
pub use sweep::{
    check_injective, construct_grid, construct_sporadic, construct_sporadic_largest_parts, count_periodic_constructed, factorization_grids,
    CompositionSet, ConstructionResult, GridReport, Injectivity, InjectivityMethod, SubsetPolicy, MAX_CONSTRUCT_N,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("p and q must be distinct odd primes, got ({p}, {q})")]
    InvalidPrimes { p: u64, q: u64 },
    #[error("r must be at least 2, got {0}")]
    RTooSmall(u64),
    #[error("S must be a nonempty proper subset of 0..{p}, got {s:?}")]
    InvalidSubset { p: u64, s: Vec<usize> },
    #[error("block {name}: {reason}")]
    InvalidBlock { name: String, reason: String },
    #[error("{0} has no factorization p*q*r with distinct odd primes p, q and r >= 2")]
    NotPqr(u64),
    #[error("({p}, {q}, {r}) does not multiply to {n}")]
    GridMismatch { n: u64, p: u64, q: u64, r: u64 },
    #[error("n = {n} exceeds the supported maximum {max}")]
    TooLarge { n: u64, max: u64 },
    #[error("construction invariant violated: {0}")]
    Invariant(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub(crate) fn check_pqr(p: u64, q: u64, r: u64) -> Result<(), ConstructError> {
    if p == q || p % 2 == 0 || q % 2 == 0 || !is_prime(p) || !is_prime(q) {
        return Err(ConstructError::InvalidPrimes { p, q });
    }
    if r < 2 {
        return Err(ConstructError::RTooSmall(r));
    }
    let n = p.checked_mul(q).and_then(|pq| pq.checked_mul(r));
    match n {
        Some(n) if n <= MAX_CONSTRUCT_N as u64 => Ok(()),
        _ => Err(ConstructError::TooLarge {
            n: n.unwrap_or(u64::MAX),
            max: MAX_CONSTRUCT_N as u64,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructionParams {
    p: u64,
    q: u64,
    r: u64,
    s: Vec<usize>,
}

impl ConstructionParams {
    pub fn new(p: u64, q: u64, r: u64, mut s: Vec<usize>) -> Result<Self, ConstructError> {
        check_pqr(p, q, r)?;
        s.sort_unstable();
        s.dedup();
        if s.is_empty() || s.len() as u64 >= p || s.iter().any(|&x| x as u64 >= p) {
            return Err(ConstructError::InvalidSubset { p, s });
        }
        Ok(Self { p, q, r, s })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn subset(&self) -> &[usize] {
        &self.s
    }

    pub fn n(&self) -> u64 {
        self.p * self.q * self.r
    }
}

pub type SignBlock = Vec<i8>;

/// Alternating block with the given support bits and leading sign.
pub(crate) fn block_from_bits(bits: u32, len: usize, first: i8) -> SignBlock {
    let mut sign = first;
    (0..len)
        .map(|i| {
            if bits >> i & 1 == 1 {
                sign = -sign;
                -sign
            } else {
                0
            }
        })
        .collect()
}

/// Supports of length-`len` blocks with an odd number of nonzero entries.
pub(crate) fn odd_supports(len: usize) -> Vec<u32> {
    (0..1u32 << len).filter(|b| b.count_ones() % 2 == 1).collect()
}

fn check_block(block: &[i8], len: usize, first: i8, name: String) -> Result<(), ConstructError> {
    let fail = |reason: &str| {
        Err(ConstructError::InvalidBlock {
            name: name.clone(),
            reason: reason.into(),
        })
    };
    if block.len() != len {
        return fail(&format!("length {} instead of {len}", block.len()));
    }
    let nonzero: Vec<i8> = block.iter().copied().filter(|&x| x != 0).collect();
    if block.iter().any(|x| !(-1..=1).contains(x)) {
        return fail("entries must be -1, 0 or 1");
    }
    if nonzero.len() % 2 == 0 {
        return fail("needs an odd number of nonzero entries");
    }
    if nonzero.iter().enumerate().any(|(i, &x)| x != if i % 2 == 0 { first } else { -first }) {
        return fail(if first > 0 {
            "nonzero entries must alternate starting with +1"
        } else {
            "nonzero entries must alternate starting with -1"
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockChoice {
    pub a: Vec<SignBlock>,
    pub b: Vec<SignBlock>,
    pub c: SignBlock,
}

impl BlockChoice {
    pub fn validate(&self, q: u64, r: u64) -> Result<(), ConstructError> {
        let (t, r) = (((q - 1) / 2) as usize, r as usize);
        if self.a.len() != t || self.b.len() != t {
            return Err(ConstructError::InvalidBlock {
                name: "A/B".into(),
                reason: format!("expected {t} blocks each"),
            });
        }
        for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            check_block(a, r, 1, format!("A{}", i + 1))?;
            check_block(b, r, -1, format!("B{}", i + 1))?;
        }
        check_block(&self.c, r - 1, 1, "C".into())
    }

    /// Coefficients of `f2`: `0 A_1 B_1 ... A_t B_t C`.
    pub fn f2_coefficients(&self) -> Vec<i8> {
        let mut f2 = vec![0];
        for (a, b) in self.a.iter().zip(&self.b) {
            f2.extend(a);
            f2.extend(b);
        }
        f2.extend(&self.c);
        f2
    }

    pub fn f2(&self) -> IntPolynomial {
        Polynomial::from_coeffs(self.f2_coefficients().into_iter().map(BigInt::from).collect())
    }
}

/// `2^{q(r-1)-1}` valid choices, in a fixed order.
pub fn enumerate_block_choices(q: u64, r: u64) -> impl Iterator<Item = BlockChoice> {
    let (t, r) = (((q - 1) / 2) as usize, r as usize);
    let full = odd_supports(r);
    let short = odd_supports(r - 1);
    let total = (full.len() as u64).pow(2 * t as u32) * short.len() as u64;
    (0..total).map(move |mut idx| {
        let mut digit = |radix: usize| {
            let d = (idx % radix as u64) as usize;
            idx /= radix as u64;
            d
        };
        let c = block_from_bits(short[digit(short.len())], r - 1, 1);
        let mut a = Vec::with_capacity(t);
        let mut b = Vec::with_capacity(t);
        for _ in 0..t {
            b.push(block_from_bits(full[digit(full.len())], r, -1));
            a.push(block_from_bits(full[digit(full.len())], r, 1));
        }
        a.reverse();
        b.reverse();
        BlockChoice { a, b, c }
    })
}

pub fn build_f1(params: &ConstructionParams) -> IntPolynomial {
    let mut c = vec![0i64; (params.r as usize) * (params.p as usize)];
    for &s in &params.s {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let at = params.r as usize * s;
        c[at] += sign;
        c[at + 1] -= sign;
    }
    Polynomial::from_i64(&c)
}

/// Raw coefficients of `F`, before any dihedral normalization.
pub fn construct_raw(params: &ConstructionParams, blocks: &BlockChoice) -> Result<Vec<i8>, ConstructError> {
    blocks.validate(params.q, params.r)?;
    let (p, q, r) = (params.p as usize, params.q as usize, params.r as usize);
    let n = p * q * r;
    let mut f = vec![0i32; n];
    let f1 = build_f1(params);
    for k in 0..q {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for (i, c) in f1.coeffs().iter().enumerate() {
            f[k * p * r + i] += sign * i32::try_from(c).expect("small");
        }
    }
    let f2 = blocks.f2_coefficients();
    for k in 0..p {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for (i, &c) in f2.iter().enumerate() {
            f[k * q * r + i] += sign * c as i32;
        }
    }
    f.into_iter()
        .enumerate()
        .map(|(i, c)| {
            i8::try_from(c)
                .ok()
                .filter(|c| (-1..=1).contains(c))
                .ok_or_else(|| ConstructError::Invariant(format!("coefficient {c} at z^{i}")))
        })
        .collect()
}

/// Rotate so the first entry is nonzero and negate if it is -1.
pub(crate) fn normalize(raw: &[i8]) -> Result<SignVector, ConstructError> {
    let first = raw
        .iter()
        .position(|&c| c != 0)
        .ok_or_else(|| ConstructError::Invariant("F is zero".into()))?;
    let sign = raw[first];
    let mut v: Vec<i8> = raw[first..].iter().map(|&c| c * sign).collect();
    v.resize(raw.len(), 0);
    SignVector::new(v).map_err(|e| ConstructError::Invariant(e.to_string()))
}

/// The constructed polynomial as a sign vector, rotated to start with +1
/// when `0` is not in `S`.
pub fn construct_f(params: &ConstructionParams, blocks: &BlockChoice) -> Result<SignVector, ConstructError> {
    normalize(&construct_raw(params, blocks)?)
}
