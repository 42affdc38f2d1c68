//! Periodic versus sporadic classification, and the closed-form counts of
//! periodic polygons.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisors, is_power_of_two, is_prime, mobius, totient};
use crate::composition::{Composition, SignVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} is not a Reinhardt composition")]
    NotReinhardt(Composition),
    #[error("no Reinhardt polygons exist for n = {0}")]
    PowerOfTwo(u64),
    #[error("n must be at least 3, got {0}")]
    TooSmall(u64),
    #[error("expected two distinct odd primes, got ({0}, {1})")]
    NotDistinctOddPrimes(u64, u64),
}

/// Result of period detection on a Reinhardt polygon.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    /// Every `d` for which the sign vector is `d`-periodic, ascending.
    Periodic { periods: Vec<usize> },
    Sporadic,
}

impl Classification {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Classification::Periodic { .. })
    }

    pub fn is_sporadic(&self) -> bool {
        !self.is_periodic()
    }

    pub fn periods(&self) -> &[usize] {
        match self {
            Classification::Periodic { periods } => periods,
            Classification::Sporadic => &[],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Classification::Periodic { .. } => "periodic",
            Classification::Sporadic => "sporadic",
        }
    }
}

/// Every proper divisor `d` of `n` with `n / d` odd for which
/// `u_k = -u_{k+d}` holds for all `0 <= k < n - d`.
pub fn periods(v: &SignVector) -> Vec<usize> {
    let u = v.entries();
    let n = u.len();
    divisors(n as u64)
        .into_iter()
        .map(|d| d as usize)
        .filter(|&d| d < n && (n / d) % 2 == 1)
        .filter(|&d| (0..n - d).all(|k| u[k] == -u[k + d]))
        .collect()
}

/// Classify a Reinhardt composition.
pub fn classify(c: &Composition) -> Result<Classification, ClassifyError> {
    if !c.is_reinhardt() {
        return Err(ClassifyError::NotReinhardt(c.clone()));
    }
    Ok(classify_unchecked(c))
}

/// Period detection without the Reinhardt check.
pub(crate) fn classify_unchecked(c: &Composition) -> Classification {
    let periods = periods(&c.to_sign_vector());
    if periods.is_empty() {
        Classification::Sporadic
    } else {
        Classification::Periodic { periods }
    }
}

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        num_traits::pow(two, (-e) as usize).recip()
    }
}

/// Number of dihedral compositions of `m` into an odd number of parts:
/// `2^floor((m-3)/2) + (1/4m) sum_{d | m, d odd} 2^{m/d} phi(d)`.
///
/// Evaluated exactly; the first term is fractional for `m < 3`.
pub fn odd_dihedral_compositions(m: u64) -> BigRational {
    assert!(m >= 1);
    let head = pow2(Integer::div_floor(&(m as i64 - 3), &2));
    let sum: BigInt = divisors(m)
        .into_iter()
        .filter(|d| d % 2 == 1)
        .map(|d| (BigInt::one() << (m / d) as usize) * BigInt::from(totient(d)))
        .sum();
    head + BigRational::new(sum, BigInt::from(4 * m))
}

fn check_n(n: u64) -> Result<(), ClassifyError> {
    if n < 3 {
        return Err(ClassifyError::TooSmall(n));
    }
    if is_power_of_two(n) {
        return Err(ClassifyError::PowerOfTwo(n));
    }
    Ok(())
}

/// Exact number of periodic Reinhardt `n`-gons,
/// `sum_{d | n, d > 1} mu(2d) D(n/d)`.
pub fn periodic_count(n: u64) -> Result<BigInt, ClassifyError> {
    check_n(n)?;
    let total = divisors(n)
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| BigRational::from_integer(BigInt::from(mobius(2 * d))) * odd_dihedral_compositions(n / d))
        .fold(BigRational::zero(), |a, b| a + b);
    assert!(total.is_integer(), "periodic count must be integral");
    Ok(total.to_integer())
}

/// Number of Reinhardt polygons with `pq` sides for distinct odd primes,
/// all of which are periodic.
pub fn pq_count(p: u64, q: u64) -> Result<BigInt, ClassifyError> {
    if p == q || p % 2 == 0 || q % 2 == 0 || !is_prime(p) || !is_prime(q) {
        return Err(ClassifyError::NotDistinctOddPrimes(p, q));
    }
    let term = |p: u64| {
        pow2((p as i64 - 3) / 2)
            + BigRational::new(
                (BigInt::one() << (p - 1) as usize) + BigInt::from(p - 1),
                BigInt::from(2 * p),
            )
    };
    let total = term(p) + term(q) - BigRational::one();
    assert!(total.is_integer(), "pq count must be integral");
    Ok(total.to_integer())
}
