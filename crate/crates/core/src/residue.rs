//! Exact residues of monomials modulo `Phi_{2n}`, the workhorse behind the
//! Reinhardt divisibility test.
//!
//! `F mod Phi_{2n}` is linear in the coefficients of `F`, so with the table
//! `z^k mod Phi_{2n}` for `0 <= k < n` a residue costs one row addition per
//! nonzero coefficient.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::polynomial::{cyclotomic, Polynomial};

#[derive(Debug, Clone)]
pub struct ResidueTable {
    n: usize,
    width: usize,
    rows: Vec<i64>,
    exact_in_i64: bool,
}

impl ResidueTable {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let phi = cyclotomic(2 * n as u64);
        let width = phi.degree() as usize;
        let mut rows = Vec::with_capacity(n * width);
        let mut cur = vec![BigInt::zero(); width];
        let mut exact_in_i64 = true;
        let mut max_abs: i64 = 0;
        for k in 0..n {
            if k < width {
                cur.iter_mut().for_each(|c| *c = BigInt::zero());
                cur[k] = BigInt::from(1);
            } else {
                let top = cur[width - 1].clone();
                for j in (1..width).rev() {
                    cur[j] = &cur[j - 1] - &top * phi.coeff(j);
                }
                cur[0] = -(&top * phi.coeff(0));
            }
            for c in &cur {
                match c.to_i64() {
                    Some(v) => {
                        max_abs = max_abs.max(v.abs());
                        rows.push(v);
                    }
                    None => {
                        exact_in_i64 = false;
                        rows.push(0);
                    }
                }
            }
        }
        if (max_abs as i128) * (n as i128) >= i64::MAX as i128 {
            exact_in_i64 = false;
        }
        Self {
            n,
            width,
            rows,
            exact_in_i64,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree of `Phi_{2n}`, i.e. the residue dimension `phi(2n)`.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Coefficients of `z^k mod Phi_{2n}`.
    pub fn row(&self, k: usize) -> &[i64] {
        &self.rows[k * self.width..(k + 1) * self.width]
    }

    /// Residue of `sum_k coeffs[k] z^k` modulo `Phi_{2n}`.
    pub fn residue_of(&self, coeffs: &[i8]) -> Polynomial<BigInt> {
        assert!(coeffs.len() <= self.n);
        if !self.exact_in_i64 {
            let f = Polynomial::<BigInt>::from_coeffs(
                coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            );
            return f
                .div_rem(&cyclotomic(2 * self.n as u64))
                .expect("cyclotomic polynomials are monic")
                .1;
        }
        let acc = self.accumulate(coeffs.iter().enumerate().map(|(k, &c)| (k, c)));
        Polynomial::from_coeffs(acc.into_iter().map(BigInt::from).collect())
    }

    fn accumulate(&self, terms: impl Iterator<Item = (usize, i8)>) -> Vec<i64> {
        let mut acc = vec![0i64; self.width];
        for (k, c) in terms {
            match c {
                0 => {}
                1 => acc.iter_mut().zip(self.row(k)).for_each(|(a, r)| *a += r),
                -1 => acc.iter_mut().zip(self.row(k)).for_each(|(a, r)| *a -= r),
                c => {
                    let c = c as i64;
                    acc.iter_mut().zip(self.row(k)).for_each(|(a, r)| *a += c * r)
                }
            }
        }
        acc
    }

    /// Whether `Phi_{2n}` divides `sum_k coeffs[k] z^k` (`coeffs.len() <= n`).
    pub fn divides(&self, coeffs: &[i8]) -> bool {
        if !self.exact_in_i64 {
            return self.residue_of(coeffs).is_zero();
        }
        assert!(coeffs.len() <= self.n);
        self.accumulate(coeffs.iter().enumerate().map(|(k, &c)| (k, c)))
            .iter()
            .all(|&v| v == 0)
    }

    /// Same test for a sparse polynomial given as `(exponent, sign)` pairs.
    pub fn divides_terms(&self, terms: impl Iterator<Item = (usize, i8)>) -> bool {
        if !self.exact_in_i64 {
            let mut dense = vec![0i8; self.n];
            for (k, c) in terms {
                dense[k] += c;
            }
            return self.residue_of(&dense).is_zero();
        }
        self.accumulate(terms).iter().all(|&v| v == 0)
    }
}
