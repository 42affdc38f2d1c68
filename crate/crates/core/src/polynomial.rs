//! Dense univariate polynomials over an exact integer ring, and cyclotomic
//! polynomials.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::arith::{divisors, mobius};
use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolynomialError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("divisor is not monic (leading coefficient {0})")]
    NotMonic(String),
    #[error("coefficient overflow in machine-integer arithmetic")]
    Overflow,
}

/// Dense polynomial; `coeffs[i]` is the coefficient of `z^i`.
///
/// The coefficient vector is always trimmed, so the zero polynomial is the
/// empty vector and has degree -1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Polynomial<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(T::one(), 0)
    }

    /// `c * z^degree`.
    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| T::from(c)).collect())
    }

    /// `sum_i terms[i].0 * z^terms[i].1`; repeated exponents accumulate.
    pub fn from_terms(terms: &[(i64, usize)]) -> Self {
        let len = terms.iter().map(|&(_, e)| e + 1).max().unwrap_or(0);
        let mut coeffs = vec![T::zero(); len];
        for &(c, e) in terms {
            coeffs[e] = coeffs[e].clone() + T::from(c);
        }
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `z^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| c.is_one())
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i).checked_add(&other.coeff(i))?);
        }
        Some(Self::from_coeffs(out))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i).checked_sub(&other.coeff(i))?);
        }
        Some(Self::from_coeffs(out))
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.is_zero() || other.is_zero() {
            return Some(Self::zero());
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b)?;
                out[i + j] = out[i + j].checked_add(&prod)?;
            }
        }
        Some(Self::from_coeffs(out))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// The substitution `z -> -z`.
    pub fn negate_variable(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// The substitution `z -> z^k` for `k >= 1`.
    pub fn inflate(&self, k: usize) -> Self {
        assert!(k >= 1, "inflate needs a positive exponent");
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self { coeffs }
    }

    /// Euclidean division by a monic polynomial: `self = q * den + r` with
    /// `deg r < deg den`.
    pub fn div_rem(&self, den: &Self) -> Result<(Self, Self), PolynomialError> {
        let lead = den.leading_coefficient().ok_or(PolynomialError::ZeroDivisor)?;
        if !lead.is_one() {
            return Err(PolynomialError::NotMonic(lead.to_string()));
        }
        let d = den.coeffs.len() - 1;
        if self.coeffs.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = std::mem::replace(&mut rem[i], T::zero());
            if c.is_zero() {
                continue;
            }
            for (j, b) in den.coeffs[..d].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = c.checked_mul(b).ok_or(PolynomialError::Overflow)?;
                rem[i - d + j] = rem[i - d + j]
                    .checked_sub(&prod)
                    .ok_or(PolynomialError::Overflow)?;
            }
            quot[i - d] = c;
        }
        rem.truncate(d);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Whether `den` divides `self` exactly (`den` must be monic).
    pub fn is_divisible_by(&self, den: &Self) -> Result<bool, PolynomialError> {
        Ok(self.div_rem(den)?.1.is_zero())
    }

    /// Convert coefficients into another ring; `None` if some coefficient is
    /// not representable there.
    pub fn cast<U: Coefficient>(&self) -> Option<Polynomial<U>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_i64().map(U::from))
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial::from_coeffs(coeffs))
    }

    pub fn to_big(&self) -> Polynomial<BigInt> {
        Polynomial::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| BigInt::from(c.to_i128().expect("machine coefficient fits i128")))
                .collect(),
        )
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(T::zero)
    }
}

impl<T: Coefficient> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        self.checked_add(rhs).expect("polynomial addition overflow")
    }
}

impl<T: Coefficient> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self.checked_sub(rhs).expect("polynomial subtraction overflow")
    }
}

impl<T: Coefficient> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        self.checked_mul(rhs).expect("polynomial multiplication overflow")
    }
}

impl<T: Coefficient> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Coefficient> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}z", if show_mag { "*" } else { "" })?,
                _ => write!(f, "{}z^{i}", if show_mag { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl<T: Coefficient> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Polynomial<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Polynomial<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `z^k - 1`.
fn z_pow_minus_one(k: usize) -> Polynomial<BigInt> {
    Polynomial::from_terms(&[(-1, 0), (1, k)])
}

/// The `m`-th cyclotomic polynomial, from
/// `Phi_m(z) = prod_{d | m} (z^{m/d} - 1)^{mu(d)}` with exact division.
/// Results are memoized for the lifetime of the process.
pub fn cyclotomic(m: u64) -> Polynomial<BigInt> {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = Polynomial::one();
    let mut den = Polynomial::one();
    for d in divisors(m) {
        let factor = z_pow_minus_one((m / d) as usize);
        match mobius(d) {
            1 => num = &num * &factor,
            -1 => den = &den * &factor,
            _ => {}
        }
    }
    // den is a product of monic (or -1 leading) factors; normalize its sign.
    let sign = den.leading_coefficient().cloned().unwrap_or_else(BigInt::one);
    let den = den.scale(&sign);
    let num = num.scale(&sign);
    let (phi, rem) = num.div_rem(&den).expect("monic denominator");
    debug_assert!(rem.is_zero());
    cyclotomic_cache().lock().unwrap().insert(m, phi.clone());
    phi
}

/// `Phi_m` in a machine-integer coefficient ring.
pub fn cyclotomic_in<T: Coefficient>(m: u64) -> Polynomial<T> {
    cyclotomic(m)
        .cast()
        .expect("cyclotomic coefficients fit a machine integer")
}

/// Whether `den` divides `num`; `den` must be monic.
pub fn divides<T: Coefficient>(
    den: &Polynomial<T>,
    num: &Polynomial<T>,
) -> Result<bool, PolynomialError> {
    num.is_divisible_by(den)
}
