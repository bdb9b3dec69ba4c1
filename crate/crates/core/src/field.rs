//! Finite fields `F_{p^f}` as `F_p[x]/(g)` for the lexicographically first
//! monic irreducible `g` of degree `f`.

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod, prime_factors};

/// Polynomial over `F_p`, coefficients low degree first, no trailing zeros.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let q = mul_mod(*r.last().unwrap(), lead_inv, p);
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(q, c, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial of degree `f`.
fn is_irreducible(g: &[u64], p: u64) -> bool {
    let f = g.len() as u32 - 1;
    let x = vec![0, 1];
    let frob = |k: u32| poly_powmod(&x, (p as u128).pow(k), g, p);
    if !poly_rem(&poly_sub(&frob(f), &x, p), g, p).is_empty() {
        return false;
    }
    for q in prime_factors(f as u64) {
        let h = poly_sub(&frob(f / q as u32), &x, p);
        if poly_gcd(g, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u64,
    f: u32,
    modulus: Poly,
    order: u128,
}

/// Element of a [`GaloisField`]: coefficient vector of length `f`.
pub type Fq = Vec<u64>;

impl GaloisField {
    /// Requires `p` prime, `f ≥ 1` and `p^f < 2^64`.
    pub fn new(p: u64, f: u32) -> Self {
        assert!(is_prime(p) && f >= 1, "GF({p}^{f}) is not a field");
        let order = (p as u128).checked_pow(f).expect("field order fits u128");
        assert!(order < 1 << 64, "field order too large");
        if f == 1 {
            return Self {
                p,
                f,
                modulus: vec![0, 1],
                order,
            };
        }
        let mut coeffs = vec![0u64; f as usize];
        loop {
            let mut g = coeffs.clone();
            g.push(1);
            if g[0] != 0 && is_irreducible(&g, p) {
                return Self {
                    p,
                    f,
                    modulus: g,
                    order,
                };
            }
            // next coefficient tuple in lexicographic order
            let mut i = 0;
            while i < coeffs.len() {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            assert!(i < coeffs.len(), "no irreducible polynomial found");
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.f as usize]
    }

    pub fn one(&self) -> Fq {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        let mut v = self.zero();
        v[0] = n.rem_euclid(self.p as i64) as u64;
        v
    }

    /// Element with index `k` in base-`p` digits; `0 ≤ k < q`.
    pub fn element(&self, mut k: u64) -> Fq {
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = k % self.p;
            k /= self.p;
        }
        v
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn pad(&self, a: Poly) -> Fq {
        let mut a = a;
        a.resize(self.f as usize, 0);
        a
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        if self.f == 1 {
            return vec![mul_mod(a[0], b[0], self.p)];
        }
        self.pad(poly_rem(
            &poly_mul(&trim(a.clone()), &trim(b.clone()), self.p),
            &self.modulus,
            self.p,
        ))
    }

    pub fn pow(&self, a: &Fq, e: u128) -> Fq {
        if self.f == 1 {
            return vec![pow_mod(a[0], e as u64, self.p)];
        }
        self.pad(poly_powmod(&trim(a.clone()), e, &self.modulus, self.p))
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order - 2))
    }

    /// `x ↦ x^{(q−1)/2}` as `1`, `−1` or `0` (odd characteristic only).
    pub fn quadratic_character(&self, a: &Fq) -> i32 {
        assert!(self.p != 2);
        if self.is_zero(a) {
            return 0;
        }
        let r = self.pow(a, (self.order - 1) / 2);
        if r == self.one() {
            1
        } else {
            -1
        }
    }

    /// Absolute trace to `F_2` (characteristic 2 only).
    pub fn trace_f2(&self, a: &Fq) -> u64 {
        assert_eq!(self.p, 2);
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.f {
            acc = self.add(&acc, &x);
            x = self.mul(&x, &x);
        }
        acc[0]
    }

    /// Some element of exact multiplicative order `m`, where `m | q − 1`.
    pub fn primitive_root_of_unity(&self, m: u64) -> Option<Fq> {
        let qm1 = self.order - 1;
        if m == 0 || !qm1.is_multiple_of(m as u128) {
            return None;
        }
        let factors = prime_factors(m);
        (1..self.order.min(1 << 20) as u64)
            .map(|k| self.pow(&self.element(k), qm1 / m as u128))
            .find(|y| {
                factors
                    .iter()
                    .all(|&r| self.pow(y, (m / r) as u128) != self.one())
            })
    }
}
