//! Exact arithmetic in the truncated ring `Z/ℓ^N` of ℓ-adic integers.
//!
//! Everything is eager and fixed-precision: a [`PadicContext`] fixes the prime
//! ℓ and the precision N, and matrices and lattices carry their context.
//! Statements about `Z_ℓ`-modules are evaluated at precision N.

mod lattice;
mod matrix;

pub use lattice::{Lattice, LatticeSum, Pairing};
pub use matrix::{column_reduce, ColumnReduction, PadicMatrix, SmithForm};

use crate::arith::{inv_mod, is_prime, mul_mod};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("ℓ^N = {ell}^{precision} does not fit in 62 bits")]
    PrecisionTooLarge { ell: u64, precision: u32 },
    #[error("contexts differ: {0} vs {1}")]
    ContextMismatch(PadicContext, PadicContext),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis column {column} vanishes at precision {precision}")]
    PrecisionLoss { column: usize, precision: u32 },
    #[error("pairing is not perfect")]
    DegeneratePairing,
    #[error("lattice is not pure")]
    NotPure,
}

/// The work ring `Z/ℓ^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicContext {
    ell: u64,
    precision: u32,
    modulus: u64,
}

impl std::fmt::Display for PadicContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z/{}^{}", self.ell, self.precision)
    }
}

impl PadicContext {
    pub fn new(ell: u64, precision: u32) -> Result<Self, PadicError> {
        if !is_prime(ell) {
            return Err(PadicError::NotPrime(ell));
        }
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let modulus = ell
            .checked_pow(precision)
            .filter(|&m| m < 1 << 62)
            .ok_or(PadicError::PrecisionTooLarge { ell, precision })?;
        Ok(Self {
            ell,
            precision,
            modulus,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `ℓ^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self, PadicError> {
        Self::new(self.ell, precision)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    /// `ℓ^k` as an element of the ring (zero once `k ≥ N`).
    pub fn ell_pow(&self, k: u32) -> u64 {
        if k >= self.precision {
            0
        } else {
            self.ell.pow(k)
        }
    }

    /// ℓ-adic valuation of a residue; the zero residue has valuation N.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.precision;
        }
        let mut v = 0;
        while a.is_multiple_of(self.ell) {
            a /= self.ell;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.ell)
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.modulus)
    }

    /// Splits a nonzero residue as `ℓ^k · u` and returns `(k, u^{-1})`.
    pub(crate) fn split_unit(&self, a: u64) -> (u32, u64) {
        let k = self.valuation(a);
        let unit = a / self.ell.pow(k);
        let inv = self.inverse(unit).expect("unit part is invertible");
        (k, inv)
    }

    /// Exact quotient `a / ℓ^k` for `a` of valuation at least `k`, as a
    /// representative in `[0, ℓ^N)`. The result is only defined modulo `ℓ^{N-k}`.
    pub(crate) fn div_ell_pow(&self, a: u64, k: u32) -> u64 {
        debug_assert!(self.valuation(a) >= k);
        a / self.ell.pow(k)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        crate::arith::pow_mod(a, e, self.modulus)
    }

    /// Symmetric representative in `(-ℓ^N/2, ℓ^N/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        assert_eq!(PadicContext::new(4, 2), Err(PadicError::NotPrime(4)));
        assert_eq!(PadicContext::new(5, 0), Err(PadicError::ZeroPrecision));
        assert!(PadicContext::new(2, 62).is_err());
        let ctx = PadicContext::new(5, 3).unwrap();
        assert_eq!(ctx.modulus(), 125);
        assert_eq!(ctx.valuation(50), 2);
        assert_eq!(ctx.valuation(0), 3);
        assert_eq!(ctx.reduce(-1), 124);
        assert_eq!(ctx.signed(124), -1);
        assert_eq!(ctx.ell_pow(3), 0);
        assert_eq!(ctx.split_unit(50), (2, 63));
    }
}
