use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{small_prime_divisors, CurveError, Point, Result, WeierstrassCurve};
use crate::arith::is_prime;

/// Quotient of `E` by the subgroup generated by a rational point of prime
/// order, via Vélu's formulas. The result is returned as a reduced integral
/// model, minimal at the primes of bad reduction of `E` and at 2 and 3.
pub fn velu_quotient(e: &WeierstrassCurve, p: &Point) -> Result<WeierstrassCurve> {
    if p.is_infinity() {
        return Err(CurveError::NotOfPrimeOrder(1));
    }
    if !e.contains(p) {
        return Err(CurveError::NotOnCurve);
    }
    let order = e
        .point_order(p, 16)
        .filter(|&n| is_prime(n))
        .ok_or(CurveError::NotOfPrimeOrder(0))?;
    let q = |c: &BigInt| BigRational::from_integer(c.clone());
    let (a1, a2, a3, a4, a6) = (q(&e.a1), q(&e.a2), q(&e.a3), q(&e.a4), q(&e.a6));
    let r = |k: i64| BigRational::from_integer(BigInt::from(k));

    // One representative of each pair {Q, −Q} in ⟨P⟩ \ {O}.
    let reps: Vec<Point> = if order == 2 {
        vec![p.clone()]
    } else {
        (1..=(order - 1) / 2).map(|k| e.multiply(k, p)).collect()
    };
    let mut t = BigRational::zero();
    let mut w = BigRational::zero();
    for point in &reps {
        let Point::Affine { x, y } = point else {
            unreachable!("multiples below the order are affine")
        };
        let gx = r(3) * x * x + r(2) * &a2 * x + &a4 - &a1 * y;
        let gy = r(-2) * y - &a1 * x - &a3;
        let tq = if order == 2 {
            gx.clone()
        } else {
            r(2) * &gx - &a1 * &gy
        };
        let uq = &gy * &gy;
        w += uq + x * &tq;
        t += tq;
    }
    let new_a4 = &a4 - r(5) * &t;
    let new_a6 = &a6 - (&a1 * &a1 + r(4) * &a2) * &t - r(7) * &w;
    let coeffs = [a1, a2, a3, new_a4, new_a6];

    // Clear denominators with a ↦ u^i·a_i.
    let mut u = BigInt::one();
    for (i, c) in coeffs.iter().enumerate() {
        let weight = [1u32, 2, 3, 4, 6][i];
        for prime in small_prime_divisors(c.denom(), 1 << 20) {
            let v = crate::arith::valuation(c.denom(), prime).unwrap();
            let needed = v.div_ceil(weight);
            let have = crate::arith::valuation(&u, prime).unwrap_or(0);
            if needed > have {
                u *= BigInt::from(prime).pow(needed - have);
            }
        }
    }
    let scaled: Vec<BigInt> = coeffs
        .iter()
        .zip([1u32, 2, 3, 4, 6])
        .map(|(c, k)| {
            let s = c * BigRational::from_integer(u.clone().pow(k));
            debug_assert!(s.is_integer());
            s.to_integer()
        })
        .collect();
    let image = WeierstrassCurve::from_big(scaled.try_into().unwrap())?;
    let mut extra = small_prime_divisors(&e.discriminant().abs(), 1 << 20);
    extra.extend(small_prime_divisors(&u, 1 << 20));
    extra.extend([2, 3]);
    Ok(image.minimal_model(&extra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::rational_torsion_points;

    fn curve(a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::new(a).unwrap()
    }

    #[test]
    fn two_isogeny_in_the_73_class() {
        let dagger = curve([1, -1, 0, 4, -3]);
        let small = curve([1, -1, 0, -1, 0]);
        let images: Vec<WeierstrassCurve> = rational_torsion_points(&dagger, 2)
            .unwrap()
            .iter()
            .map(|p| velu_quotient(&dagger, p).unwrap())
            .collect();
        let twin = images
            .iter()
            .find(|c| c.j_invariant() == small.j_invariant())
            .expect("the Δ = p curve is a 2-isogenous image");
        assert_eq!(twin.minimal_ord_delta(73), 1);
    }

    #[test]
    fn five_isogeny_chain_of_conductor_11() {
        let e = curve([0, -1, 1, 0, 0]);
        let p = rational_torsion_points(&e, 5).unwrap().remove(0);
        let image = velu_quotient(&e, &p).unwrap();
        assert_eq!(image, curve([0, -1, 1, -10, -20]));
        assert_eq!(image.minimal_ord_delta(11), 5);
    }

    #[test]
    fn rejects_identity_and_strangers() {
        let e = curve([0, -1, 1, 0, 0]);
        assert!(velu_quotient(&e, &Point::Infinity).is_err());
        let off = Point::affine(BigRational::one(), BigRational::one());
        assert_eq!(velu_quotient(&e, &off), Err(CurveError::NotOnCurve));
    }
}
