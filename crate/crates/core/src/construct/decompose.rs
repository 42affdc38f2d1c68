//! Decomposition of Reinhardt polynomials for `n = pq` over the generators
//! `Phi_p(-z^q)` and `Phi_q(-z^p)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_prime;
use crate::composition::SignVector;
use crate::polynomial::cyclotomic;
use crate::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("p and q must be distinct odd primes, got ({p}, {q})")]
    InvalidPrimes { p: u64, q: u64 },
    #[error("sign vector has length {len}, expected p*q = {expected}")]
    LengthMismatch { len: usize, expected: u64 },
    #[error("the polynomial is not divisible by Phi_{0}")]
    NotReinhardt(u64),
    #[error("decomposition invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub f1: IntPolynomial,
    pub f2: IntPolynomial,
    pub trivial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrivialSides {
    /// `Phi_p(-z^q)` divides `F`.
    pub p_side: bool,
    /// `Phi_q(-z^p)` divides `F`.
    pub q_side: bool,
}

impl TrivialSides {
    pub fn any(&self) -> bool {
        self.p_side || self.q_side
    }
}

fn check(v: &SignVector, p: u64, q: u64) -> Result<(), DecomposeError> {
    if p == q || p % 2 == 0 || q % 2 == 0 || !is_prime(p) || !is_prime(q) {
        return Err(DecomposeError::InvalidPrimes { p, q });
    }
    if v.n() as u64 != p * q {
        return Err(DecomposeError::LengthMismatch {
            len: v.n(),
            expected: p * q,
        });
    }
    Ok(())
}

/// `Phi_m(-z^k)`.
fn generator(m: u64, k: u64) -> IntPolynomial {
    cyclotomic(m).negate_variable().inflate(k as usize)
}

fn div_exact(num: &IntPolynomial, den: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
    num.div_rem(den).expect("cyclotomic divisors are monic")
}

/// `(a, b)` with `a Phi_p + b Phi_q = 1`, `deg a < q`, `deg b < p`.
fn bezout(p: u64, q: u64) -> (IntPolynomial, IntPolynomial) {
    let (phi_p, phi_q) = (cyclotomic(p), cyclotomic(q));
    let (mut r0, mut r1) = (phi_p.clone(), phi_q.clone());
    let (mut s0, mut s1) = (IntPolynomial::one(), IntPolynomial::zero());
    let (mut t0, mut t1) = (IntPolynomial::zero(), IntPolynomial::one());
    // Every remainder is 1 + z + ... + z^{v-1}, hence monic.
    while r1.degree() > 0 {
        let (quo, rem) = div_exact(&r0, &r1);
        let s2 = &s0 - &(&quo * &s1);
        let t2 = &t0 - &(&quo * &t1);
        (r0, r1, s0, s1, t0, t1) = (r1, rem, s1, s2, t1, t2);
    }
    assert!(r1 == IntPolynomial::one(), "Phi_p and Phi_q are coprime");
    let (k, a) = div_exact(&s1, &phi_q);
    let b = &t1 + &(&k * &phi_p);
    (a, b)
}

fn tri_valued(f: &IntPolynomial) -> bool {
    f.coeffs().iter().all(|c| c.magnitude() <= &One::one())
}

/// Coefficients of `f Phi_m(-z^k)` truncated to `n`.
fn expand(f: &IntPolynomial, m: u64, k: u64, n: usize) -> Vec<BigInt> {
    let prod = f * &generator(m, k);
    (0..n).map(|i| prod.coeff(i)).collect()
}

/// Tri-valued `(f1, f2)` with `F = f1 Phi_p(-z^q) + f2 Phi_q(-z^p)`,
/// following the constructive proof: Euclid on `Phi_p`, `Phi_q`, then the
/// shift `(f1 + m Phi_{2q}, f2 - m Phi_{2p})` normalizing `t_0 = 0`, with the
/// two fallbacks for the case where every `s_i` is nonzero.
pub fn decompose(v: &SignVector, p: u64, q: u64) -> Result<Decomposition, DecomposeError> {
    check(v, p, q)?;
    let n = (p * q) as usize;
    let f = v.to_big_polynomial();
    let (h, rem) = div_exact(&f, &cyclotomic(2 * p * q));
    if !rem.is_zero() {
        return Err(DecomposeError::NotReinhardt(2 * p * q));
    }
    let (a, b) = bezout(p, q);
    let (phi_2p, phi_2q) = (cyclotomic(2 * p), cyclotomic(2 * q));
    let (c, mut f1) = div_exact(&(&h * &a.negate_variable()), &phi_2q);
    let mut f2 = &(&h * &b.negate_variable()) + &(&c * &phi_2p);
    if f2.degree() >= p as isize || f1.degree() >= q as isize {
        return Err(DecomposeError::Invariant("degree bounds".into()));
    }

    let m = f2.coeff(0);
    if !m.is_zero() {
        f1 = &f1 + &phi_2q.scale(&m);
        f2 = &f2 - &phi_2p.scale(&m);
    }
    if !(tri_valued(&f1) && tri_valued(&f2)) {
        let s = expand(&f1, p, q, n);
        if s.iter().any(|x| x.is_zero()) {
            return Err(DecomposeError::Invariant("s has a zero but t is not tri-valued".into()));
        }
        let t = expand(&f2, q, p, n);
        if s.iter().zip(&t).all(|(x, y)| !(x + y).is_zero()) {
            f1 = cyclotomic(q).negate_variable();
            f2 = IntPolynomial::zero();
        } else {
            f1 = &f1 - &phi_2q;
            f2 = &f2 + &phi_2p;
        }
    }

    if !(tri_valued(&f1) && tri_valued(&f2)) {
        return Err(DecomposeError::Invariant(format!("no tri-valued form: f1 = {f1}, f2 = {f2}")));
    }
    if &(&f1 * &generator(p, q)) + &(&f2 * &generator(q, p)) != f {
        return Err(DecomposeError::Invariant("reconstruction differs from F".into()));
    }
    let trivial = is_trivial(&f1, &f2, p, q);
    Ok(Decomposition { f1, f2, trivial })
}

/// `f1` in `{0, Phi_q(-z)}` or `f2` in `{0, Phi_p(-z)}`.
pub fn is_trivial(f1: &IntPolynomial, f2: &IntPolynomial, p: u64, q: u64) -> bool {
    f1.is_zero() || *f1 == cyclotomic(q).negate_variable() || f2.is_zero() || *f2 == cyclotomic(p).negate_variable()
}

pub fn has_trivial_decomposition(v: &SignVector, p: u64, q: u64) -> Result<TrivialSides, DecomposeError> {
    check(v, p, q)?;
    let f = v.to_big_polynomial();
    if !div_exact(&f, &cyclotomic(2 * p * q)).1.is_zero() {
        return Err(DecomposeError::NotReinhardt(2 * p * q));
    }
    let divides = |g: IntPolynomial| div_exact(&f, &g).1.is_zero();
    Ok(TrivialSides {
        p_side: divides(generator(p, q)),
        q_side: divides(generator(q, p)),
    })
}

/// `f1 Phi_p(-z^q) + f2 Phi_q(-z^p)`.
pub fn recompose(f1: &IntPolynomial, f2: &IntPolynomial, p: u64, q: u64) -> IntPolynomial {
    &(f1 * &generator(p, q)) + &(f2 * &generator(q, p))
}
