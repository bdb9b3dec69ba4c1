//! Integral Weierstrass curves over `Q`: invariants, local reduction type,
//! point counts, rational torsion, Vélu quotients, and a genus-2
//! discriminant check.

mod count;
mod genus2;
mod point;
mod torsion;
mod velu;

pub use count::{count_points, frobenius_trace, is_ordinary};
pub use genus2::{hyperelliptic_odd_disc, Genus2Disc};
pub use point::Point;
pub use torsion::{division_polynomial, has_rational_ell_torsion, rational_torsion_points};
pub use velu::velu_quotient;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, valuation};
use crate::poly::IntPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve is singular (Δ = 0)")]
    Singular,
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field size {0} exceeds the point-counting limit")]
    FieldTooLarge(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ℓ = {0} is not supported (expected 2, 3, 5 or 7)")]
    UnsupportedEll(u64),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point does not have prime order {0}")]
    NotOfPrimeOrder(u64),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("invalid polynomial degrees: {0}")]
    InvalidDegree(String),
    #[error("cannot parse curve: {0}")]
    Parse(String),
}

type Result<T> = std::result::Result<T, CurveError>;

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInvariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub discriminant: BigInt,
    pub j: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub p: u64,
    pub kind: ReductionKind,
    /// `ord_p(Δ)` for multiplicative reduction, 1 otherwise.
    pub component_order: u32,
}

fn b_invariants(a: [&BigInt; 5]) -> [BigInt; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + a2 * 4;
    let b4 = a1 * a3 + a4 * 2;
    let b6 = a3 * a3 + a6 * 4;
    let b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    [b2, b4, b6, b8]
}

impl WeierstrassCurve {
    pub fn new(a: [i64; 5]) -> Result<Self> {
        Self::from_big(a.map(BigInt::from))
    }

    pub fn from_big(a: [BigInt; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let e = Self { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(e)
    }

    pub fn coefficients(&self) -> [BigInt; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    /// Coefficients as machine integers, when they fit.
    pub fn coefficients_i64(&self) -> Option<[i64; 5]> {
        let c = self.coefficients();
        Some([
            c[0].to_i64()?,
            c[1].to_i64()?,
            c[2].to_i64()?,
            c[3].to_i64()?,
            c[4].to_i64()?,
        ])
    }

    fn refs(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn invariants(&self) -> CurveInvariants {
        let [b2, b4, b6, b8] = b_invariants(self.refs());
        let c4 = &b2 * &b2 - &b4 * 24;
        let c6 = -(&b2 * &b2 * &b2) + &b2 * &b4 * 36 - &b6 * 216;
        let discriminant: BigInt =
            -(&b2 * &b2 * &b8) - &b4 * &b4 * &b4 * 8 - &b6 * &b6 * 27 + &b2 * &b4 * &b6 * 9;
        let j = if discriminant.is_zero() {
            BigRational::zero()
        } else {
            BigRational::new(&c4 * &c4 * &c4, discriminant.clone())
        };
        CurveInvariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
            j,
        }
    }

    pub fn discriminant(&self) -> BigInt {
        self.invariants().discriminant
    }

    pub fn j_invariant(&self) -> BigRational {
        self.invariants().j
    }

    /// `4x³ + b2·x² + 2b4·x + b6`, the square of `2y + a1·x + a3`.
    pub fn two_division_cubic(&self) -> IntPoly {
        let [b2, b4, b6, _] = b_invariants(self.refs());
        IntPoly::new(vec![b6, b4 * 2, b2, BigInt::from(4)])
    }

    /// Reduction type at `p`, read off the given model (assumed minimal at `p`).
    pub fn local_data(&self, p: u64) -> Result<LocalData> {
        if !is_prime(p) {
            return Err(CurveError::NotPrime(p));
        }
        let inv = self.invariants();
        let v = valuation(&inv.discriminant, p).unwrap_or(0);
        let kind = if v == 0 {
            ReductionKind::Good
        } else if (&inv.c4 % BigInt::from(p)).is_zero() {
            ReductionKind::Additive
        } else {
            ReductionKind::Multiplicative
        };
        Ok(LocalData {
            p,
            kind,
            component_order: if kind == ReductionKind::Multiplicative {
                v
            } else {
                1
            },
        })
    }

    /// `ord_p(Δ)` of a model minimal at `p`, for `p ≥ 5`.
    pub fn minimal_ord_delta(&self, p: u64) -> u32 {
        assert!(p >= 5, "minimal valuation formula needs p ≥ 5");
        let inv = self.invariants();
        let vd = valuation(&inv.discriminant, p).unwrap_or(0);
        let v4 = valuation(&inv.c4, p).map_or(u32::MAX, |v| v / 4);
        let v6 = valuation(&inv.c6, p).map_or(u32::MAX, |v| v / 6);
        vd - 12 * v4.min(v6).min(vd / 12)
    }

    pub fn is_on_curve(&self, x: &BigRational, y: &BigRational) -> bool {
        let q = |c: &BigInt| BigRational::from_integer(c.clone());
        let lhs = y * y + q(&self.a1) * x * y + q(&self.a3) * y;
        let rhs = x * x * x + q(&self.a2) * x * x + q(&self.a4) * x + q(&self.a6);
        lhs == rhs
    }

    /// Integral model with `a1, a3 ∈ {0,1}`, `a2 ∈ {−1,0,1}` and the given
    /// `c4, c6`, if one exists.
    pub fn from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<Self> {
        let twelve = BigInt::from(12);
        let mut b2 = (-c6).mod_floor(&twelve);
        if b2 > BigInt::from(6) {
            b2 -= &twelve;
        }
        let exact = |n: BigInt, d: i64| -> Option<BigInt> {
            let (q, r) = n.div_rem(&BigInt::from(d));
            r.is_zero().then_some(q)
        };
        let b4 = exact(&b2 * &b2 - c4, 24)?;
        let b6 = exact(-(&b2 * &b2 * &b2) + &b2 * &b4 * 36 - c6, 216)?;
        let two = BigInt::from(2);
        let a1 = b2.mod_floor(&two);
        let a3 = b6.mod_floor(&two);
        let a2 = exact(&b2 - &a1, 4)?;
        let a4 = exact(&b4 - &a1 * &a3, 2)?;
        let a6 = exact(&b6 - &a3, 4)?;
        let e = Self::from_big([a1, a2, a3, a4, a6]).ok()?;
        let inv = e.invariants();
        (inv.c4 == *c4 && inv.c6 == *c6).then_some(e)
    }

    /// Reduced model, minimal at every prime below `10⁵` and at the listed
    /// extra primes.
    pub fn minimal_model(&self, extra_primes: &[u64]) -> Self {
        let inv = self.invariants();
        let (mut c4, mut c6) = (inv.c4, inv.c6);
        let g = c6.gcd(&inv.discriminant).gcd(&c4);
        let mut primes = small_prime_divisors(&g, 100_000);
        primes.extend(extra_primes.iter().copied().filter(|&p| is_prime(p)));
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            let (p4, p6) = (BigInt::from(p).pow(4), BigInt::from(p).pow(6));
            loop {
                if c4.is_zero() && c6.is_zero() {
                    break;
                }
                if !(&c4 % &p4).is_zero() || !(&c6 % &p6).is_zero() {
                    break;
                }
                let (n4, n6) = (&c4 / &p4, &c6 / &p6);
                if Self::from_c4c6(&n4, &n6).is_none() {
                    break;
                }
                c4 = n4;
                c6 = n6;
            }
        }
        Self::from_c4c6(&c4, &c6).unwrap_or_else(|| self.clone())
    }
}

/// Primes below `limit` dividing `n`.
pub fn small_prime_divisors(n: &BigInt, limit: u64) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    while d < limit && n > BigInt::from(1) {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if let Some(r) = n.to_u64() {
        if r > 1 && is_prime(r) {
            out.push(r);
        }
    }
    out
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl FromStr for WeierstrassCurve {
    type Err = CurveError;

    /// Five comma-separated integers `a1,a2,a3,a4,a6`, optionally bracketed.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<BigInt> = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| CurveError::Parse(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<_>>()?;
        let a: [BigInt; 5] = parts
            .try_into()
            .map_err(|_| CurveError::Parse("expected five coefficients".into()))?;
        Self::from_big(a)
    }
}
