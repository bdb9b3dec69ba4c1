//! Dense univariate polynomials over `Z` with arbitrary-precision
//! coefficients: subresultant resultants, discriminants, and exact rational
//! root extraction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, mul_mod};

/// Coefficients low degree first; the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Evaluation modulo a word-sized modulus.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let mb = BigInt::from(m);
        self.coeffs.iter().rev().fold(0u64, |acc, c| {
            let c = c.mod_floor(&mb).to_u64().unwrap();
            (mul_mod(acc, x, m) + c) % m
        })
    }

    /// gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Pseudo-remainder: `lc(b)^{deg a − deg b + 1}·a = q·b + r`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.leading();
        let mut r = self.clone();
        let mut steps = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            let mut next = r.scale(&lb);
            for (i, c) in b.coeffs.iter().enumerate() {
                next.coeffs[dr - db + i] -= &lr * c;
            }
            next.trim();
            r = next;
            steps -= 1;
        }
        r.scale(&lb.pow(steps as u32))
    }

    /// Exact division; panics if `d` does not divide `self` over `Z`.
    pub fn div_exact(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        assert!(da >= dd, "inexact polynomial division");
        let ld = d.leading();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); da - dd + 1];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let (c, rem) = r.leading().div_rem(&ld);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (i, b) in d.coeffs.iter().enumerate() {
                r.coeffs[dr - dd + i] -= &c * b;
            }
            q[dr - dd] = c;
            r.trim();
        }
        assert!(r.is_zero(), "inexact polynomial division");
        Self::new(q)
    }

    /// Primitive gcd over `Z[x]`, with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Squarefree part (primitive).
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.primitive_part().div_exact(&g).primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Distinct rational roots, in increasing order.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let f = self.squarefree_part();
        let mut roots = Vec::new();
        // Strip the factor x.
        let f = if f.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            Self::new(f.coeffs[1..].to_vec())
        } else {
            f
        };
        let n = f.degree().unwrap();
        if n == 0 {
            return roots;
        }
        // g(y) = a^{n−1} f(y/a) is monic; rational roots of f are y/a for
        // integer roots y of g.
        let a = f.leading();
        let g = Self::new(
            (0..=n)
                .map(|i| {
                    if i == n {
                        BigInt::one()
                    } else {
                        f.coeff(i) * a.pow((n - 1 - i) as u32)
                    }
                })
                .collect(),
        );
        for y in g.integer_roots_monic() {
            roots.push(BigRational::new(y, a.clone()));
        }
        roots.sort();
        roots
    }

    /// Integer roots of a monic squarefree polynomial by Hensel lifting the
    /// roots modulo a prime where all of them are simple.
    fn integer_roots_monic(&self) -> Vec<BigInt> {
        let n = self.degree().unwrap();
        let bound: BigInt = self.coeffs.iter().map(|c| c.abs()).max().unwrap() + 1;
        let deriv = self.derivative();
        let mut p = 3u64;
        let roots_mod_p = loop {
            if is_prime(p) {
                let roots: Vec<u64> = (0..p).filter(|&x| self.eval_mod(x, p) == 0).collect();
                if roots.iter().all(|&x| deriv.eval_mod(x, p) != 0) {
                    break roots;
                }
            }
            p += 2;
            assert!(
                p < 1 << 20,
                "no prime with simple roots (input not squarefree?)"
            );
        };
        let pb = BigInt::from(p);
        let target: BigInt = bound * 2;
        let mut out = Vec::new();
        for r0 in roots_mod_p {
            let mut r = BigInt::from(r0);
            let mut m = pb.clone();
            // Newton iteration doubles the precision each step.
            while m <= target {
                m = &m * &m;
                let fr = self.eval(&r);
                let dr = deriv.eval(&r);
                let inv = mod_inverse(&dr, &m).expect("simple root stays simple");
                r = (&r - fr * inv).mod_floor(&m);
            }
            let half: BigInt = &m / 2;
            if r > half {
                r -= &m;
            }
            if self.eval(&r).is_zero() {
                out.push(r);
            }
        }
        debug_assert!(out.len() <= n);
        out
    }

    /// Resultant by the subresultant algorithm.
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut s = BigInt::one();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
            if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
                s = -s;
            }
        }
        let ca = a.content();
        let cb = b.content();
        let t =
            ca.clone().pow(b.degree().unwrap() as u32) * cb.clone().pow(a.degree().unwrap() as u32);
        a = Self::new(a.coeffs.iter().map(|c| c / &ca).collect());
        b = Self::new(b.coeffs.iter().map(|c| c / &cb).collect());
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
            if db == 0 {
                break;
            }
            let delta = (da - db) as u32;
            if da % 2 == 1 && db % 2 == 1 {
                s = -s;
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return BigInt::zero();
            }
            a = b;
            let div = &g * h.clone().pow(delta);
            b = Self::new(r.coeffs.iter().map(|c| c / &div).collect());
            g = a.leading();
            h = if delta == 0 {
                h
            } else {
                g.clone().pow(delta) / h.clone().pow(delta - 1)
            };
        }
        let da = a.degree().unwrap() as u32;
        let lb = b.leading();
        let hh = if da == 0 {
            BigInt::one()
        } else {
            lb.pow(da) / h.pow(da - 1)
        };
        s * t * hh
    }

    /// `disc(f) = (−1)^{n(n−1)/2} res(f, f′) / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree().expect("discriminant of zero polynomial");
        if n == 0 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Roots of `f` modulo a small prime, for screening.
pub fn roots_mod(f: &IntPoly, p: u64) -> Vec<u64> {
    (0..p).filter(|&x| f.eval_mod(x, p) == 0).collect()
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn discriminants() {
        // ax² + bx + c: b² − 4ac
        assert_eq!(p(&[3, 5, 2]).discriminant(), BigInt::from(25 - 24));
        // x³ + ax + b: −4a³ − 27b²
        assert_eq!(p(&[1, -1, 0, 1]).discriminant(), BigInt::from(4 - 27));
        assert_eq!(p(&[0, 0, 1]).discriminant(), BigInt::zero());
    }

    #[test]
    fn resultant_of_linear_factors() {
        // res((x−1)(x−2), (x−3)) = (1−3)(2−3) = 2
        assert_eq!(p(&[2, -3, 1]).resultant(&p(&[-3, 1])), BigInt::from(2));
        assert_eq!(p(&[2, -3, 1]).resultant(&p(&[-2, 1])), BigInt::zero());
    }

    #[test]
    fn rational_roots_found() {
        // (2x − 1)(3x + 4)(x − 5)(x² + 1)
        let f = &(&(&p(&[-1, 2]) * &p(&[4, 3])) * &p(&[-5, 1])) * &p(&[1, 0, 1]);
        let roots = f.rational_roots();
        assert_eq!(
            roots,
            vec![
                BigRational::new((-4).into(), 3.into()),
                BigRational::new(1.into(), 2.into()),
                BigRational::from_integer(5.into()),
            ]
        );
        // repeated roots and a root at zero
        let g = &(&p(&[0, 1]) * &p(&[-7, 1])) * &p(&[-7, 1]);
        assert_eq!(g.rational_roots().len(), 2);
        assert!(p(&[2, 0, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 0, 1]);
        assert!(!f.is_squarefree());
        assert_eq!(f.squarefree_part(), &p(&[-1, 1]) * &p(&[2, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 2, 1]).to_string(), "x^3 + 2*x^2 - 1");
    }
}
