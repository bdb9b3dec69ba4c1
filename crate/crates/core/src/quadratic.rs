//! Class numbers of imaginary quadratic fields by counting reduced binary
//! quadratic forms, and the degree of the maximal (2,p)-controlled 2-extension.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, two_part};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadraticError {
    #[error("discriminant {0} must be negative")]
    NotNegative(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

/// Binary quadratic form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        if n.is_multiple_of(d) {
            n /= d;
        }
        d += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => d != 1 && is_squarefree(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// All reduced forms of discriminant `d < 0`, enumerated over `b ≥ 0` and
/// the divisors `a` of `(b² − d)/4`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>, QuadraticError> {
    if d >= 0 {
        return Err(QuadraticError::NotNegative(d));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(QuadraticError::NotFundamental(d));
    }
    let mut forms = Vec::new();
    let mut b = d.rem_euclid(2);
    while 3 * b * b <= -d {
        let ac = (b * b - d) / 4;
        let mut a = b.max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let c = ac / a;
                forms.push(QuadForm { a, b, c });
                if b > 0 && b != a && a != c {
                    forms.push(QuadForm { a, b: -b, c });
                }
            }
            a += 1;
        }
        b += 2;
    }
    forms.sort();
    Ok(forms)
}

/// Class number of the imaginary quadratic field of discriminant `d`.
pub fn class_number(d: i64) -> Result<u64, QuadraticError> {
    if d >= 0 {
        return Err(QuadraticError::NotNegative(d));
    }
    if !is_fundamental(d) {
        return Err(QuadraticError::NotFundamental(d));
    }
    Ok(reduced_forms(d)?.len() as u64)
}

/// Field discriminant of `Q(√−p)`.
pub fn field_discriminant(p: u64) -> i64 {
    if p % 4 == 3 {
        -(p as i64)
    } else {
        -4 * p as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControlledExtensionReport {
    pub p: u64,
    pub disc: i64,
    pub h: u64,
    /// 2-part of `h`.
    pub n: u64,
    pub gal_mk_order: u64,
    pub degree_over_q: u64,
    pub dihedral: bool,
}

/// Degree data of the maximal (2,p)-controlled 2-extension `M` of `Q`:
/// `Gal(M/K)` cyclic of order `2n`, `[M : Q] = 4n`, `K = Q(√−p)`.
pub fn prop37_report(p: u64) -> Result<ControlledExtensionReport, QuadraticError> {
    if p == 2 || !is_prime(p) {
        return Err(QuadraticError::NotOddPrime(p));
    }
    let disc = field_discriminant(p);
    let h = class_number(disc)?;
    let n = two_part(h);
    Ok(ControlledExtensionReport {
        p,
        disc,
        h,
        n,
        gal_mk_order: 2 * n,
        degree_over_q: 4 * n,
        dihedral: true,
    })
}
