//! Small-integer number theory: factorization, Möbius, totient, divisors.
//!
//! Every input in this crate is tiny (polygon side counts), so plain trial
//! division is all we need.

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The Möbius function. `mobius(0)` is defined as 0.
pub fn mobius(n: u64) -> i8 {
    if n == 0 {
        return 0;
    }
    let mut sign = 1;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Euler's totient function.
pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Distinct odd primes dividing `n`, ascending.
pub fn odd_prime_divisors(n: u64) -> Vec<u64> {
    factorize(n)
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| p != 2)
        .collect()
}

/// Every ordered pair `(p, q)` of distinct odd primes with `pq | n` and
/// `n / pq >= 2`, together with that cofactor `r`.
pub fn pqr_factorizations(n: u64) -> Vec<(u64, u64, u64)> {
    let primes = odd_prime_divisors(n);
    let mut out = Vec::new();
    for &p in &primes {
        for &q in &primes {
            if p != q && n % (p * q) == 0 && n / (p * q) >= 2 {
                out.push((p, q, n / (p * q)));
            }
        }
    }
    out
}
