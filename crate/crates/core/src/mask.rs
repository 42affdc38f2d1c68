//! Fixed-width bit sets for sign-vector supports.
//!
//! A Reinhardt sign vector is determined by its support, since the nonzero
//! signs alternate. The hot loops (enumeration and the sporadic construction)
//! work on supports as bit masks: `u128` for `n <= 127`, [`Wide`] above that.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use crate::composition::{dihedral_at, dihedral_lexmax, Composition};

pub(crate) trait Mask:
    Copy
    + Eq
    + Ord
    + Hash
    + Debug
    + Send
    + Sync
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
    + 'static
{
    const BITS: usize;

    fn zero() -> Self;
    fn bit(i: usize) -> Self;
    fn shl(self, k: usize) -> Self;
    fn shr(self, k: usize) -> Self;
    fn count_ones(self) -> u32;
    /// Index of the lowest set bit; undefined result for zero.
    fn lowest(self) -> usize;
    fn clear_lowest(self) -> Self;
    /// Little-endian 64-bit words, exactly `words` of them.
    fn push_words(self, out: &mut Vec<u64>, words: usize);
    fn from_words(words: &[u64]) -> Self;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }

    /// Bits `0..n`.
    fn low(n: usize) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            (!Self::zero()).shr(Self::BITS - n)
        }
    }

    /// Bit `i` of the result is the parity of the set bits at positions `<= i`.
    fn prefix_xor(self) -> Self {
        let mut x = self;
        let mut k = 1;
        while k < Self::BITS {
            x = x ^ x.shl(k);
            k <<= 1;
        }
        x
    }

    /// Cyclic rotation by `k` within the low `n` bits.
    fn rotate_within(self, k: usize, n: usize) -> Self {
        let k = k % n;
        if k == 0 {
            return self;
        }
        (self.shl(k) | self.shr(n - k)) & Self::low(n)
    }
}

impl Mask for u128 {
    const BITS: usize = 128;

    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn bit(i: usize) -> Self {
        1u128 << i
    }
    #[inline]
    fn shl(self, k: usize) -> Self {
        if k >= 128 {
            0
        } else {
            self << k
        }
    }
    #[inline]
    fn shr(self, k: usize) -> Self {
        if k >= 128 {
            0
        } else {
            self >> k
        }
    }
    #[inline]
    fn count_ones(self) -> u32 {
        u128::count_ones(self)
    }
    #[inline]
    fn lowest(self) -> usize {
        self.trailing_zeros() as usize
    }
    #[inline]
    fn clear_lowest(self) -> Self {
        self & self.wrapping_sub(1)
    }
    fn push_words(self, out: &mut Vec<u64>, words: usize) {
        for w in 0..words {
            out.push(if w < 2 { (self >> (64 * w)) as u64 } else { 0 });
        }
    }
    fn from_words(words: &[u64]) -> Self {
        words
            .iter()
            .take(2)
            .enumerate()
            .fold(0, |acc, (i, &w)| acc | (w as u128) << (64 * i))
    }
}

/// Number of words in [`Wide`]; supports `n` up to 319.
pub(crate) const WIDE_WORDS: usize = 5;

/// Little-endian multiword bit set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Wide(pub [u64; WIDE_WORDS]);

impl PartialOrd for Wide {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wide {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

macro_rules! wide_binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr for Wide {
            type Output = Wide;
            #[inline]
            fn $f(self, rhs: Wide) -> Wide {
                let mut out = [0u64; WIDE_WORDS];
                for i in 0..WIDE_WORDS {
                    out[i] = self.0[i] $op rhs.0[i];
                }
                Wide(out)
            }
        }
    };
}
wide_binop!(BitAnd, bitand, &);
wide_binop!(BitOr, bitor, |);
wide_binop!(BitXor, bitxor, ^);

impl Not for Wide {
    type Output = Wide;
    fn not(self) -> Wide {
        Wide(self.0.map(|w| !w))
    }
}

impl Mask for Wide {
    const BITS: usize = 64 * WIDE_WORDS;

    fn zero() -> Self {
        Wide([0; WIDE_WORDS])
    }
    fn bit(i: usize) -> Self {
        let mut w = [0; WIDE_WORDS];
        if i < Self::BITS {
            w[i / 64] = 1 << (i % 64);
        }
        Wide(w)
    }
    fn shl(self, k: usize) -> Self {
        let mut out = [0u64; WIDE_WORDS];
        let (ws, bs) = (k / 64, k % 64);
        for i in (ws..WIDE_WORDS).rev() {
            let src = i - ws;
            out[i] = self.0[src] << bs;
            if bs > 0 && src > 0 {
                out[i] |= self.0[src - 1] >> (64 - bs);
            }
        }
        Wide(out)
    }
    fn shr(self, k: usize) -> Self {
        let mut out = [0u64; WIDE_WORDS];
        let (ws, bs) = (k / 64, k % 64);
        for i in 0..WIDE_WORDS.saturating_sub(ws) {
            let src = i + ws;
            out[i] = self.0[src] >> bs;
            if bs > 0 && src + 1 < WIDE_WORDS {
                out[i] |= self.0[src + 1] << (64 - bs);
            }
        }
        Wide(out)
    }
    fn count_ones(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn lowest(self) -> usize {
        for (i, w) in self.0.iter().enumerate() {
            if *w != 0 {
                return 64 * i + w.trailing_zeros() as usize;
            }
        }
        Self::BITS
    }
    fn clear_lowest(self) -> Self {
        let mut out = self.0;
        for w in out.iter_mut() {
            if *w != 0 {
                *w &= *w - 1;
                break;
            }
        }
        Wide(out)
    }
    fn push_words(self, out: &mut Vec<u64>, words: usize) {
        for w in 0..words {
            out.push(self.0.get(w).copied().unwrap_or(0));
        }
    }
    fn from_words(words: &[u64]) -> Self {
        let mut w = [0; WIDE_WORDS];
        for (dst, src) in w.iter_mut().zip(words) {
            *dst = *src;
        }
        Wide(w)
    }
}

/// Cyclic gaps between consecutive set bits of `support` within `n` bits,
/// starting at the lowest set bit. Returns false if `support` is empty.
#[inline]
pub(crate) fn cyclic_gaps<M: Mask>(support: M, n: usize, out: &mut Vec<u16>) -> bool {
    out.clear();
    if support.is_zero() {
        return false;
    }
    let first = support.lowest();
    let mut prev = first;
    let mut rest = support.clear_lowest();
    while !rest.is_zero() {
        let pos = rest.lowest();
        out.push((pos - prev) as u16);
        prev = pos;
        rest = rest.clear_lowest();
    }
    out.push((n - prev + first) as u16);
    true
}

/// Key of the canonical (lexicographically greatest) dihedral image of the
/// composition with the given parts. Partial sum `s` sets bit `n - 1 - s`,
/// so ascending composition order is descending key order.
pub(crate) fn canonical_key<M: Mask, T: Ord + Copy + Into<usize>>(parts: &[T], n: usize) -> M {
    let (start, rev) = dihedral_lexmax(parts);
    let mut key = M::bit(n - 1);
    let mut s = 0usize;
    for k in 0..parts.len() - 1 {
        s += dihedral_at(parts, start, rev, k).into();
        key = key | M::bit(n - 1 - s);
    }
    key
}

/// Scratch space for [`canonical_key_fast`].
#[derive(Default)]
pub(crate) struct CanonBuf {
    fwd: Vec<u16>,
    rev: Vec<u16>,
}

/// Same result as [`canonical_key`], comparing images as slices of the
/// doubled forward and reversed sequences.
pub(crate) fn canonical_key_fast<M: Mask>(parts: &[u16], n: usize, buf: &mut CanonBuf) -> M {
    let r = parts.len();
    buf.fwd.clear();
    buf.fwd.extend_from_slice(parts);
    buf.fwd.extend_from_slice(parts);
    buf.rev.clear();
    buf.rev.extend(parts.iter().rev());
    buf.rev.extend(parts.iter().rev());
    let max = *parts.iter().max().expect("nonempty");
    let mut best: &[u16] = &buf.fwd[..0];
    for start in (0..r).filter(|&i| parts[i] == max) {
        let back = r - 1 - start;
        for image in [&buf.fwd[start..start + r], &buf.rev[back..back + r]] {
            if image > best {
                best = image;
            }
        }
    }
    let mut key = M::bit(n - 1);
    let mut s = 0usize;
    for &g in &best[..r - 1] {
        s += g as usize;
        key = key | M::bit(n - 1 - s);
    }
    key
}

/// Key of a composition taken as is (no canonicalization).
pub(crate) fn composition_key<M: Mask>(c: &Composition) -> M {
    let n = c.n();
    c.partial_sums().fold(M::zero(), |k, s| k | M::bit(n - 1 - s))
}

pub(crate) fn key_to_composition<M: Mask>(key: M, n: usize) -> Composition {
    let mut sums = Vec::new();
    let mut rest = key;
    while !rest.is_zero() {
        sums.push(n - 1 - rest.lowest());
        rest = rest.clear_lowest();
    }
    sums.reverse();
    let mut parts: Vec<usize> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    parts.push(n - sums.last().expect("nonempty key"));
    Composition::with_sum(parts, n).expect("keys encode valid compositions")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip_ops<M: Mask>() {
        let n = 100.min(M::BITS - 1);
        let x = M::bit(0) | M::bit(3) | M::bit(n - 1);
        assert_eq!(x.count_ones(), 3);
        assert_eq!(x.lowest(), 0);
        assert_eq!(x.clear_lowest().lowest(), 3);
        assert_eq!(x.rotate_within(1, n), M::bit(1) | M::bit(4) | M::bit(0));
        assert_eq!(M::low(n).count_ones() as usize, n);
        assert_eq!(x.prefix_xor() & M::low(n), M::low(3) | M::bit(n - 1));
        assert_eq!(x.shl(5).shr(5), x & M::low(M::BITS - 5));
        let mut words = Vec::new();
        x.push_words(&mut words, 5);
        assert_eq!(M::from_words(&words), x);
    }

    #[test]
    fn mask_ops_u128() {
        roundtrip_ops::<u128>();
    }

    #[test]
    fn mask_ops_wide() {
        roundtrip_ops::<Wide>();
        let a = Wide::bit(200);
        assert_eq!(a.shr(150), Wide::bit(50));
        assert_eq!(a.shl(70), Wide::bit(270));
        assert!(Wide::bit(130) > Wide::bit(129));
        assert_eq!(Wide::low(300).count_ones(), 300);
    }

    #[test]
    fn keys_follow_composition_order() {
        let a: Composition = "[7,6,1,1,1,1,2,1,1,1,1,1,4,1,1]".parse().unwrap();
        let b: Composition = "[6,3,1,2,1,1,1,1,2,3,1,1,4,1,2]".parse().unwrap();
        let ka: u128 = composition_key(&a);
        let kb: u128 = composition_key(&b);
        assert!(a > b);
        assert!(ka < kb);
        assert_eq!(key_to_composition(ka, 30), a);
        let kw: Wide = composition_key(&a);
        assert_eq!(key_to_composition(kw, 30), a);
    }

    #[test]
    fn canonical_key_matches_composition_canonicalize() {
        let c: Composition = "[1,1,7,6,1,1,1,1,2,1,1,1,1,1,4]".parse().unwrap();
        let parts: Vec<u16> = c.parts().iter().map(|&k| k as u16).collect();
        let key: u128 = canonical_key(&parts, c.n());
        assert_eq!(key_to_composition(key, c.n()), c.canonicalize());
        let fast: u128 = canonical_key_fast(&parts, c.n(), &mut CanonBuf::default());
        assert_eq!(fast, key);
    }

    #[test]
    fn gaps_are_cyclic() {
        let mut gaps = Vec::new();
        assert!(cyclic_gaps(u128::bit(2) | u128::bit(5) | u128::bit(6), 10, &mut gaps));
        assert_eq!(gaps, vec![3, 1, 6]);
        assert!(!cyclic_gaps(0u128, 10, &mut gaps));
    }
}
