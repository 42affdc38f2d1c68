//! Dihedral compositions and their Reinhardt sign vectors.
//!
//! A composition `[k_1, ..., k_r]` of `n` with `r` odd describes a star
//! polygon whose `i`-th vertex angle is `k_i * pi / n`. Its sign vector is the
//! coefficient sequence of `F(z) = 1 - z^{k_1} + z^{k_1 + k_2} - ...`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::notation::{self, NotationError};
use crate::polynomial::Polynomial;
use crate::residue::ResidueTable;
use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("a composition needs at least one part")]
    Empty,
    #[error("part {index} is zero")]
    ZeroPart { index: usize },
    #[error("a composition must have an odd number of parts, got {0}")]
    EvenPartCount(usize),
    #[error("parts sum to {actual}, expected {expected}")]
    SumMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Notation(#[from] NotationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignVectorError {
    #[error("a sign vector needs at least one entry")]
    Empty,
    #[error("entry {index} is {value}, expected -1, 0 or 1")]
    InvalidEntry { index: usize, value: i8 },
    #[error("the constant coefficient must be +1")]
    LeadingNotPositive,
    #[error("nonzero entries do not alternate in sign at index {index}")]
    NotAlternating { index: usize },
    #[error("the number of nonzero entries must be odd, got {0}")]
    EvenNonzeroCount(usize),
}

/// A composition of `n` into an odd number of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
    n: usize,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, CompositionError> {
        if parts.is_empty() {
            return Err(CompositionError::Empty);
        }
        if let Some(index) = parts.iter().position(|&k| k == 0) {
            return Err(CompositionError::ZeroPart { index });
        }
        if parts.len() % 2 == 0 {
            return Err(CompositionError::EvenPartCount(parts.len()));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    /// Like [`Composition::new`], additionally checking the sum.
    pub fn with_sum(parts: Vec<usize>, n: usize) -> Result<Self, CompositionError> {
        let c = Self::new(parts)?;
        if c.n != n {
            return Err(CompositionError::SumMismatch {
                expected: n,
                actual: c.n,
            });
        }
        Ok(c)
    }

    /// The regular polygon `[(1)^n]`, valid for odd `n`.
    pub fn regular(n: usize) -> Result<Self, CompositionError> {
        Self::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The sum of the parts (number of polygon sides).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parts (star polygon vertices).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn largest_part(&self) -> usize {
        *self.parts.iter().max().expect("nonempty")
    }

    /// Partial sums `0, k_1, k_1 + k_2, ..., k_1 + ... + k_{r-1}`.
    pub fn partial_sums(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(0).chain(self.parts[..self.parts.len() - 1].iter().scan(0, |acc, &k| {
            *acc += k;
            Some(*acc)
        }))
    }

    pub fn to_sign_vector(&self) -> SignVector {
        let mut entries = vec![0i8; self.n];
        for (i, s) in self.partial_sums().enumerate() {
            entries[s] = if i % 2 == 0 { 1 } else { -1 };
        }
        SignVector { entries }
    }

    /// All `2r` rotations and reversals (with repetition when the
    /// composition has symmetry).
    pub fn dihedral_images(&self) -> impl Iterator<Item = Composition> + '_ {
        let r = self.parts.len();
        (0..r).flat_map(move |start| {
            [false, true].into_iter().map(move |rev| Composition {
                parts: (0..r).map(|k| dihedral_at(&self.parts, start, rev, k)).collect(),
                n: self.n,
            })
        })
    }

    /// The lexicographically greatest member of the dihedral orbit. This
    /// always starts with a largest part.
    pub fn canonicalize(&self) -> Composition {
        let (start, rev) = dihedral_lexmax(&self.parts);
        let r = self.parts.len();
        Composition {
            parts: (0..r).map(|k| dihedral_at(&self.parts, start, rev, k)).collect(),
            n: self.n,
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// Whether this composition describes a Reinhardt polygon, i.e. whether
    /// `Phi_{2n}` divides its polynomial.
    pub fn is_reinhardt(&self) -> bool {
        ResidueTable::new(self.n).divides_terms(
            self.partial_sums()
                .enumerate()
                .map(|(i, s)| (s, if i % 2 == 0 { 1 } else { -1 })),
        )
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Composition {
    type Err = CompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(notation::expand(s)?)
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = CompositionError;

    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(parts)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

/// Element `k` of the dihedral image starting at `start`, read backwards
/// when `rev` is set.
#[inline]
pub(crate) fn dihedral_at<T: Copy>(parts: &[T], start: usize, rev: bool, k: usize) -> T {
    let r = parts.len();
    if rev {
        parts[(start + r - k % r) % r]
    } else {
        parts[(start + k) % r]
    }
}

/// `(start, reversed)` of the lexicographically greatest dihedral image.
/// Only images starting at a maximal part are compared.
pub(crate) fn dihedral_lexmax<T: Ord + Copy>(parts: &[T]) -> (usize, bool) {
    let r = parts.len();
    let max = *parts.iter().max().expect("nonempty");
    let mut best = (usize::MAX, false);
    for start in (0..r).filter(|&i| parts[i] == max) {
        for rev in [false, true] {
            if best.0 == usize::MAX {
                best = (start, rev);
                continue;
            }
            let mut ord = Ordering::Equal;
            for k in 1..r {
                ord = dihedral_at(parts, start, rev, k).cmp(&dihedral_at(parts, best.0, best.1, k));
                if ord != Ordering::Equal {
                    break;
                }
            }
            if ord == Ordering::Greater {
                best = (start, rev);
            }
        }
    }
    best
}

/// Coefficient sequence of a Reinhardt-type polynomial: length `n`, entries
/// in {-1, 0, 1}, constant term +1, an odd number of nonzero entries with
/// alternating signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    entries: Vec<i8>,
}

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self, SignVectorError> {
        if entries.is_empty() {
            return Err(SignVectorError::Empty);
        }
        let mut expected = 1i8;
        let mut count = 0;
        for (index, &value) in entries.iter().enumerate() {
            match value {
                0 => {}
                1 | -1 => {
                    if index == 0 && value != 1 {
                        return Err(SignVectorError::LeadingNotPositive);
                    }
                    if value != expected {
                        return Err(SignVectorError::NotAlternating { index });
                    }
                    expected = -expected;
                    count += 1;
                }
                _ => return Err(SignVectorError::InvalidEntry { index, value }),
            }
        }
        if entries[0] != 1 {
            return Err(SignVectorError::LeadingNotPositive);
        }
        if count % 2 == 0 {
            return Err(SignVectorError::EvenNonzeroCount(count));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Gaps between consecutive nonzero positions, closing back to `n`.
    pub fn to_composition(&self) -> Composition {
        let support: Vec<usize> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
            .collect();
        let mut parts: Vec<usize> = support.windows(2).map(|w| w[1] - w[0]).collect();
        parts.push(self.n() - support.last().expect("nonempty"));
        Composition {
            parts,
            n: self.n(),
        }
    }

    pub fn to_polynomial<T: Coefficient>(&self) -> Polynomial<T> {
        Polynomial::from_coeffs(self.entries.iter().map(|&c| T::from(c as i64)).collect())
    }

    pub fn to_big_polynomial(&self) -> Polynomial<BigInt> {
        self.to_polynomial()
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = SignVectorError;

    fn try_from(entries: Vec<i8>) -> Result<Self, Self::Error> {
        Self::new(entries)
    }
}

/// Inverse of [`Composition::to_sign_vector`].
pub fn sign_vector_to_composition(v: &SignVector) -> Composition {
    v.to_composition()
}

pub fn composition_to_sign_vector(c: &Composition) -> SignVector {
    c.to_sign_vector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{cyclotomic, divides};

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Composition::new(vec![]), Err(CompositionError::Empty));
        assert_eq!(
            Composition::new(vec![1, 0, 1]),
            Err(CompositionError::ZeroPart { index: 1 })
        );
        assert_eq!(
            Composition::new(vec![1, 2]),
            Err(CompositionError::EvenPartCount(2))
        );
        assert!(matches!(
            Composition::with_sum(vec![1, 1, 1], 4),
            Err(CompositionError::SumMismatch { .. })
        ));
    }

    #[test]
    fn sign_vector_of_triangle() {
        let v = comp(&[7, 7, 7]).to_sign_vector();
        let mut expect = vec![0i8; 21];
        expect[0] = 1;
        expect[7] = -1;
        expect[14] = 1;
        assert_eq!(v.entries(), &expect[..]);
        assert_eq!(v.to_composition(), comp(&[7, 7, 7]));
    }

    #[test]
    fn sign_vector_of_regular_polygon() {
        let v = Composition::regular(21).unwrap().to_sign_vector();
        for (i, &e) in v.entries().iter().enumerate() {
            assert_eq!(e, if i % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(v.to_composition(), Composition::regular(21).unwrap());
    }

    #[test]
    fn sign_vector_of_n15_product() {
        // Coefficients of (1 - z^3 + z^4)(1 - z^5 + z^10), expanded independently.
        let expect: Vec<i8> = vec![1, 0, 0, -1, 1, -1, 0, 0, 1, -1, 1, 0, 0, -1, 1];
        let c = comp(&[3, 1, 1, 3, 1, 1, 3, 1, 1]);
        assert_eq!(c.to_sign_vector().entries(), &expect[..]);
        assert_eq!(SignVector::new(expect).unwrap().to_composition(), c);
    }

    #[test]
    fn sign_vector_validation() {
        assert_eq!(SignVector::new(vec![]), Err(SignVectorError::Empty));
        assert_eq!(
            SignVector::new(vec![0, 1, -1, 1]),
            Err(SignVectorError::LeadingNotPositive)
        );
        assert_eq!(
            SignVector::new(vec![-1, 1, -1]),
            Err(SignVectorError::LeadingNotPositive)
        );
        assert_eq!(
            SignVector::new(vec![1, 1, -1]),
            Err(SignVectorError::NotAlternating { index: 1 })
        );
        assert_eq!(
            SignVector::new(vec![1, 0, -1]),
            Err(SignVectorError::EvenNonzeroCount(2))
        );
        assert_eq!(
            SignVector::new(vec![1, 2, 1]),
            Err(SignVectorError::InvalidEntry { index: 1, value: 2 })
        );
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(
            comp(&[1, 1, 7, 6, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 4]).canonicalize(),
            comp(&[7, 6, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 4, 1, 1])
        );
        assert_eq!(
            Composition::regular(21).unwrap().canonicalize(),
            Composition::regular(21).unwrap()
        );
        assert_eq!(
            comp(&[1, 1, 3, 1, 1, 3, 1, 1, 3]).canonicalize(),
            comp(&[3, 1, 1, 3, 1, 1, 3, 1, 1])
        );
    }

    #[test]
    fn canonical_form_matches_brute_force_maximum() {
        let c = comp(&[1, 1, 3, 1, 1, 3, 1, 1, 3]);
        let brute = c.dihedral_images().max().unwrap();
        assert_eq!(c.dihedral_images().count(), 18);
        assert_eq!(brute, c.canonicalize());
    }

    #[test]
    fn reinhardt_examples() {
        assert!(comp(&[7, 7, 7]).is_reinhardt());
        for n in [3, 5, 9, 21, 45] {
            assert!(Composition::regular(n).unwrap().is_reinhardt());
        }
        assert!(!comp(&[4, 4, 1]).is_reinhardt());
    }

    #[test]
    fn reinhardt_agrees_with_big_integer_division() {
        for parts in [vec![7usize, 7, 7], vec![4, 4, 1], vec![3, 3, 3, 3, 3], vec![2, 1, 2, 1, 1]] {
            let c = comp(&parts);
            let f = c.to_sign_vector().to_big_polynomial();
            let via_division = divides(&cyclotomic(2 * c.n() as u64), &f).unwrap();
            assert_eq!(c.is_reinhardt(), via_division, "{c}");
        }
    }

    #[test]
    fn text_round_trip() {
        let c: Composition = "[(3,1,1)^3]".parse().unwrap();
        assert_eq!(c.to_string(), "[3,1,1,3,1,1,3,1,1]");
        assert_eq!(c.to_string().parse::<Composition>().unwrap(), c);
        assert!("[1,2]".parse::<Composition>().is_err());
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "[3,1,1,3,1,1,3,1,1]");
        assert!(serde_json::from_str::<Composition>("[1,1]").is_err());
    }
}
