use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{CurveError, Result};
use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Genus2Disc {
    /// `disc(4P + Q²)`.
    #[serde(serialize_with = "crate::ser::big_int")]
    pub discriminant: BigInt,
    pub two_valuation: u32,
    /// `disc / 2^{two_valuation}`, sign kept.
    #[serde(serialize_with = "crate::ser::big_int")]
    pub odd_part: BigInt,
}

impl Genus2Disc {
    /// `(q, k)` when `|odd_part| = q^k` for the given `q` and some `k ≥ 1`.
    pub fn odd_part_is_power_of(&self, q: u64) -> Option<u32> {
        let q = BigInt::from(q);
        let mut n = self.odd_part.abs();
        let mut k = 0;
        while !n.is_zero() && (&n % &q).is_zero() {
            n /= &q;
            k += 1;
        }
        (k > 0 && n == BigInt::from(1)).then_some(k)
    }
}

/// Discriminant data of `y² + Q(x)·y = P(x)`, i.e. of `4P + Q²`, for `P` of
/// degree 5 and `Q` of degree at most 3.
pub fn hyperelliptic_odd_disc(p: &IntPoly, q: &IntPoly) -> Result<Genus2Disc> {
    if p.degree() != Some(5) {
        return Err(CurveError::InvalidDegree(format!(
            "P must have degree 5, found {:?}",
            p.degree()
        )));
    }
    if q.degree().is_some_and(|d| d > 3) {
        return Err(CurveError::InvalidDegree(
            "Q must have degree at most 3".into(),
        ));
    }
    let r = &p.scale(&BigInt::from(4)) + &(q * q);
    let discriminant = r.discriminant();
    if discriminant.is_zero() {
        return Err(CurveError::NotSquarefree);
    }
    let two_valuation = discriminant.trailing_zeros().unwrap_or(0) as u32;
    let odd_part = &discriminant >> two_valuation;
    Ok(Genus2Disc {
        discriminant,
        two_valuation,
        odd_part,
    })
}
