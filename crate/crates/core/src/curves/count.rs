use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{CurveError, Result, WeierstrassCurve};
use crate::arith::{as_prime_power, mul_mod, pow_mod};
use crate::field::GaloisField;

/// Largest field size accepted by [`count_points`].
pub const MAX_FIELD_SIZE: u64 = 1_000_000;

fn residue(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// `#E(F_q)`, point at infinity included, for `q = p^f ≤ 10⁶` with `p ∤ Δ`.
pub fn count_points(e: &WeierstrassCurve, q: u64) -> Result<u64> {
    let (p, f) = as_prime_power(q as u128).ok_or(CurveError::NotPrimePower(q))?;
    if q > MAX_FIELD_SIZE {
        return Err(CurveError::FieldTooLarge(q));
    }
    if residue(&e.discriminant(), p) == 0 {
        return Err(CurveError::BadReduction(p));
    }
    let a = e.coefficients().map(|c| residue(&c, p));
    if f == 1 && p > 2 {
        return Ok(count_prime_odd(e, p));
    }
    let k = GaloisField::new(p, f);
    let lift = |c: u64| k.from_int(c as i64);
    let [a1, a2, a3, a4, a6] = a.map(lift);
    let affine: u64 = (0..q)
        .into_par_iter()
        .map(|idx| {
            let x = k.element(idx);
            let x2 = k.mul(&x, &x);
            let rhs = k.add(
                &k.add(&k.mul(&x2, &x), &k.mul(&a2, &x2)),
                &k.add(&k.mul(&a4, &x), &a6),
            );
            let b = k.add(&k.mul(&a1, &x), &a3);
            if p == 2 {
                // y² + b·y = rhs
                if k.is_zero(&b) {
                    1
                } else {
                    let b2 = k.mul(&b, &b);
                    let z = k.mul(&rhs, &k.inv(&b2).unwrap());
                    if k.trace_f2(&z) == 0 {
                        2
                    } else {
                        0
                    }
                }
            } else {
                // (2y + b)² = b² + 4·rhs
                let d = k.add(&k.mul(&b, &b), &k.mul(&k.from_int(4), &rhs));
                (1 + k.quadratic_character(&d)) as u64
            }
        })
        .sum();
    Ok(affine + 1)
}

fn count_prime_odd(e: &WeierstrassCurve, p: u64) -> u64 {
    let cubic = e.two_division_cubic();
    let c: Vec<u64> = cubic.coeffs().iter().map(|x| residue(x, p)).collect();
    let half = (p - 1) / 2;
    let affine: u64 = (0..p)
        .into_par_iter()
        .map(|x| {
            let v = c
                .iter()
                .rev()
                .fold(0u64, |acc, &ci| (mul_mod(acc, x, p) + ci) % p);
            if v == 0 {
                1
            } else if pow_mod(v, half, p) == 1 {
                2
            } else {
                0
            }
        })
        .sum();
    affine + 1
}

/// `a_q = q + 1 − #E(F_q)`.
pub fn frobenius_trace(e: &WeierstrassCurve, q: u64) -> Result<i64> {
    Ok(q as i64 + 1 - count_points(e, q)? as i64)
}

/// Ordinary reduction at ℓ: `a_ℓ ≢ 0 mod ℓ`.
pub fn is_ordinary(e: &WeierstrassCurve, ell: u64) -> Result<bool> {
    Ok(frobenius_trace(e, ell)?.rem_euclid(ell as i64) != 0)
}
