//! Small-integer number theory shared by every module: primality, modular
//! powers and inverses, multiplicative orders, integer roots and valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` by trial division, in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| p.then_some(k as u64))
        .collect()
}

/// Multiplicative order of `a` modulo `m`; `None` when `a` is not a unit.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    Some(k)
}

/// Smallest generator of `(Z/p)^×` for an odd prime `p` (returns 1 for p = 2).
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Exponent of the largest power of `p` dividing `n`; `None` for `n = 0`.
pub fn valuation_u64(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// `p`-adic valuation of a big integer; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Floor of the `k`-th root of `n`.
pub fn integer_root(n: u128, k: u32) -> u128 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u128;
    let pow = |b: u128| -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..k {
            acc = acc.checked_mul(b)?;
        }
        Some(acc)
    };
    while pow(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while pow(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// If `n = p^k` for a prime `p` and `k ≥ 1`, return `(p, k)`.
pub fn as_prime_power(n: u128) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let max_k = 128 - n.leading_zeros();
    for k in (1..=max_k).rev() {
        let r = integer_root(n, k);
        if r < 2 || r > u64::MAX as u128 {
            continue;
        }
        if r.checked_pow(k) == Some(n) && is_prime(r as u64) {
            return Some((r as u64, k));
        }
    }
    None
}

/// Exact square root of a non-negative big integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Two-part of a positive integer: the largest power of 2 dividing it.
pub fn two_part(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    1 << n.trailing_zeros()
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn is_one(n: &BigInt) -> bool {
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_sieve() {
        let sieve = primes_up_to(10_000);
        let scanned: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, scanned);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn orders_and_roots() {
        assert_eq!(multiplicative_order(31, 5), Some(1));
        assert_eq!(multiplicative_order(5, 3), Some(2));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(6, 9), None);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(inv_mod(7, 25), Some(18));
        assert_eq!(inv_mod(5, 25), None);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(as_prime_power(5329), Some((73, 2)));
        assert_eq!(as_prime_power(161_051), Some((11, 5)));
        assert_eq!(as_prime_power(1 << 40), Some((2, 40)));
        assert_eq!(as_prime_power(65), None);
        assert_eq!(as_prime_power(1), None);
        assert_eq!(integer_root(80, 4), 2);
        assert_eq!(integer_root(81, 4), 3);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&big(-5329), 73), Some(2));
        assert_eq!(valuation(&big(0), 3), None);
        assert_eq!(valuation_u64(48, 2), Some(4));
        assert_eq!(two_part(24), 8);
        assert_eq!(exact_sqrt(&big(5329)), Some(big(73)));
        assert_eq!(exact_sqrt(&big(5330)), None);
    }
}
