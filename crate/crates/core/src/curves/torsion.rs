use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{b_invariants, CurveError, Point, Result, WeierstrassCurve};
use crate::arith::exact_sqrt;
use crate::poly::IntPoly;

/// The polynomial part `f_n` of the `n`-th division polynomial: `ψ_n = f_n`
/// for odd `n` and `ψ_n = ψ_2·f_n` for even `n`, where `ψ_2² = F` is the
/// 2-division cubic. The roots of `f_n` (odd `n`) are the x-coordinates of
/// the nonzero `n`-torsion points.
pub fn division_polynomial(e: &WeierstrassCurve, n: u32) -> IntPoly {
    let mut memo = HashMap::new();
    division_rec(e, n, &mut memo)
}

fn division_rec(e: &WeierstrassCurve, n: u32, memo: &mut HashMap<u32, IntPoly>) -> IntPoly {
    if let Some(f) = memo.get(&n) {
        return f.clone();
    }
    let [b2, b4, b6, b8] = b_invariants(e.refs());
    let big = |k: i64| BigInt::from(k);
    let f = match n {
        0 => IntPoly::zero(),
        1 | 2 => IntPoly::constant(big(1)),
        3 => IntPoly::new(vec![b8, &b6 * 3, &b4 * 3, b2, big(3)]),
        4 => IntPoly::new(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            &b8 * 10,
            &b6 * 10,
            &b4 * 5,
            b2,
            big(2),
        ]),
        _ => {
            let m = n / 2;
            let mut g = |k: u32| division_rec(e, k, memo);
            let cubic = e.two_division_cubic();
            let f_sq = &cubic * &cubic;
            if n % 2 == 1 {
                let (fm2, fm, fm1, fp1) = (g(m + 2), g(m), g(m - 1), g(m + 1));
                let first = &fm2 * &fm.pow(3);
                let second = &fm1 * &fp1.pow(3);
                if m.is_multiple_of(2) {
                    &(&f_sq * &first) - &second
                } else {
                    &first - &(&f_sq * &second)
                }
            } else {
                let (fm, fp2, fm1, fm2, fp1) = (g(m), g(m + 2), g(m - 1), g(m - 2), g(m + 1));
                let inner = &(&fp2 * &fm1.pow(2)) - &(&fm2 * &fp1.pow(2));
                &fm * &inner
            }
        }
    };
    memo.insert(n, f.clone());
    f
}

fn check_ell(ell: u64) -> Result<()> {
    if matches!(ell, 2 | 3 | 5 | 7) {
        Ok(())
    } else {
        Err(CurveError::UnsupportedEll(ell))
    }
}

/// Exact square root of a non-negative rational, if it is a square.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = exact_sqrt(r.numer())?;
    let d = exact_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

/// All rational points of exact order ℓ.
pub fn rational_torsion_points(e: &WeierstrassCurve, ell: u64) -> Result<Vec<Point>> {
    check_ell(ell)?;
    let q = |c: &BigInt| BigRational::from_integer(c.clone());
    let two = BigRational::from_integer(BigInt::from(2));
    let cubic = e.two_division_cubic();
    let mut points = Vec::new();
    if ell == 2 {
        for x in cubic.rational_roots() {
            let y = -(q(&e.a1) * &x + q(&e.a3)) / &two;
            points.push(Point::affine(x, y));
        }
        return Ok(points);
    }
    let f = division_polynomial(e, ell as u32);
    for x in f.rational_roots() {
        let disc = cubic.eval_rational(&x);
        let Some(root) = rational_sqrt(&disc) else {
            continue;
        };
        let base = -(q(&e.a1) * &x + q(&e.a3));
        let mut ys = vec![(&base + &root) / &two];
        if !root.is_zero() {
            ys.push((&base - &root) / &two);
        }
        for y in ys {
            let p = Point::affine(x.clone(), y);
            debug_assert!(e.contains(&p));
            if e.multiply(ell, &p).is_infinity() {
                points.push(p);
            }
        }
    }
    Ok(points)
}

/// A rational point of order ℓ, if one exists.
pub fn has_rational_ell_torsion(e: &WeierstrassCurve, ell: u64) -> Result<Option<Point>> {
    Ok(rational_torsion_points(e, ell)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::new(a).unwrap()
    }

    #[test]
    fn division_polynomial_degrees() {
        let e = curve([0, -1, 1, -10, -20]);
        for (n, d) in [(3, 4), (5, 12), (7, 24), (4, 6), (6, 16), (9, 40)] {
            assert_eq!(division_polynomial(&e, n).degree(), Some(d), "n = {n}");
        }
    }

    #[test]
    fn torsion_examples() {
        let e11 = curve([0, -1, 1, 0, 0]);
        let pts = rational_torsion_points(&e11, 5).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(has_rational_ell_torsion(&e11, 3).unwrap().is_none());
        // both members of the Neumann–Setzer pair for p = 73 carry rational 2-torsion
        for a in [[1, -1, 0, -1, 0], [1, -1, 0, 4, -3]] {
            assert!(has_rational_ell_torsion(&curve(a), 2).unwrap().is_some());
        }
        assert!(has_rational_ell_torsion(&curve([0, 0, 0, 0, 2]), 2)
            .unwrap()
            .is_none());
        assert!(matches!(
            rational_torsion_points(&e11, 11),
            Err(CurveError::UnsupportedEll(11))
        ));
    }
}
