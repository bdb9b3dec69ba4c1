use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::WeierstrassCurve;

/// Rational point on a Weierstrass curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

fn q(c: &BigInt) -> BigRational {
    BigRational::from_integer(c.clone())
}

impl Point {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl WeierstrassCurve {
    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => self.is_on_curve(x, y),
        }
    }

    pub fn negate(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y - q(&self.a1) * x - q(&self.a3)),
        }
    }

    pub fn add(&self, p: &Point, r: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, r) {
            (Point::Infinity, _) => return r.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (a1, a2, a3, a4, a6) = (
            q(&self.a1),
            q(&self.a2),
            q(&self.a3),
            q(&self.a4),
            q(&self.a6),
        );
        let (lambda, nu) = if x1 == x2 {
            let denom = y1 + y2 + &a1 * x2 + &a3;
            if denom.is_zero() {
                return Point::Infinity;
            }
            let d = y1 * BigRational::from_integer(2.into()) + &a1 * x1 + &a3;
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            let lambda = (three * x1 * x1 + &two * &a2 * x1 + &a4 - &a1 * y1) / &d;
            let nu = (-(x1 * x1 * x1) + &a4 * x1 + two * &a6 - &a3 * y1) / &d;
            (lambda, nu)
        } else {
            let dx = x2 - x1;
            ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
        };
        let x3 = &lambda * &lambda + &a1 * &lambda - &a2 - x1 - x2;
        let y3 = -(&lambda + &a1) * &x3 - nu - a3;
        Point::affine(x3, y3)
    }

    pub fn multiply(&self, n: u64, p: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = p.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Order of a torsion point, searched up to `limit`.
    pub fn point_order(&self, p: &Point, limit: u64) -> Option<u64> {
        let mut r = p.clone();
        for n in 1..=limit {
            if r.is_infinity() {
                return Some(n);
            }
            r = self.add(&r, p);
        }
        None
    }
}
