//! Neumann–Setzer and Miyawaki curves: enumeration, isogeny classes and the
//! member with the largest component group.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, primes_up_to, valuation};
use crate::curves::{
    is_ordinary, rational_torsion_points, velu_quotient, CurveError, ReductionKind,
    WeierstrassCurve,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("no curve of the family is known for (ℓ, p) = ({0}, {1})")]
    UnknownInstance(u64, u64),
    #[error("maximal component group is not unique: members {0:?} tie")]
    NonUniqueMaximum(Vec<usize>),
    #[error("bad data line {0}: {1}")]
    Data(usize, String),
    #[error("empty isogeny class")]
    EmptyClass,
}

type Result<T> = std::result::Result<T, FamilyError>;

/// Coefficient box of the Miyawaki search: `|a_i| ≤ MIYAWAKI_BOX`.
pub const MIYAWAKI_BOX: i64 = 8;
/// Maximal path length when closing an isogeny class under Vélu quotients.
pub const CLOSURE_DEPTH: usize = 3;
/// Primes tried as isogeny degrees during the closure.
pub const ISOGENY_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Curves found by the bounded Miyawaki search, kept as regression data.
pub const MIYAWAKI_DATA: &str = include_str!("../data/miyawaki.txt");

/// The pair of curves attached to `p = u² + 64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NsInstance {
    pub u: i64,
    pub p: u64,
    #[serde(serialize_with = "crate::ser::display")]
    pub curve_delta_p: WeierstrassCurve,
    #[serde(serialize_with = "crate::ser::display")]
    pub curve_delta_p2: WeierstrassCurve,
    /// `Δ = p` and `Δ = −p²` hold exactly.
    pub discriminants_ok: bool,
    /// Both curves are multiplicative at `p`.
    pub multiplicative_at_p: bool,
    /// `a₂` is odd for both curves.
    pub ordinary_at_2: bool,
}

/// `y² + xy = x³ + ((u−1)/4)x² − x`, with `Δ = p`.
pub fn ns_curve_delta_p(u: i64) -> Result<WeierstrassCurve> {
    Ok(WeierstrassCurve::new([1, (u - 1).div_euclid(4), 0, -1, 0])?)
}

/// `y² + xy = x³ + ((u−1)/4)x² + 4x + u`, with `Δ = −p²`.
pub fn ns_curve_delta_p2(u: i64) -> Result<WeierstrassCurve> {
    Ok(WeierstrassCurve::new([1, (u - 1).div_euclid(4), 0, 4, u])?)
}

/// The exceptional prime of the `ℓ = 2` family.
pub const NS_SPECIAL_PRIME: u64 = 17;

/// Seed of the exceptional class: `y² + xy + y = x³ − x² − x`.
pub fn ns_special_seed() -> WeierstrassCurve {
    WeierstrassCurve::new([1, -1, 1, -1, 0]).expect("nonsingular")
}

fn ns_instance(u: i64) -> Result<NsInstance> {
    let p = (u * u + 64) as u64;
    let e1 = ns_curve_delta_p(u)?;
    let e2 = ns_curve_delta_p2(u)?;
    let pb = BigInt::from(p);
    let discriminants_ok = e1.discriminant() == pb && e2.discriminant() == -(&pb * &pb);
    let multiplicative_at_p = [&e1, &e2].iter().all(|e| {
        e.local_data(p)
            .is_ok_and(|d| d.kind == ReductionKind::Multiplicative)
    });
    let mut ordinary_at_2 = true;
    for e in [&e1, &e2] {
        ordinary_at_2 &= is_ordinary(e, 2)?;
    }
    Ok(NsInstance {
        u,
        p,
        curve_delta_p: e1,
        curve_delta_p2: e2,
        discriminants_ok,
        multiplicative_at_p,
        ordinary_at_2,
    })
}

/// All primes `p = u² + 64 ≤ bound`, with the sign of `u` chosen so that
/// `u ≡ 1 mod 4`. The exceptional `p = 17` is not included.
pub fn ns_enumerate(bound: u64) -> Result<Vec<NsInstance>> {
    let mut us = Vec::new();
    let mut n: i64 = 1;
    while (n * n + 64) as u64 <= bound {
        let u = if n % 4 == 1 { n } else { -n };
        if is_prime((u * u + 64) as u64) {
            us.push(u);
        }
        n += 2;
    }
    us.into_par_iter().map(ns_instance).collect()
}

/// `u` with `u ≡ 1 mod 4` and `u² + 64 = p`, if any.
pub fn ns_parameter(p: u64) -> Option<i64> {
    let n = p.checked_sub(64)?;
    let r = (n as f64).sqrt().round() as i64;
    (r > 0 && (r * r) as u64 == n && r % 2 == 1).then(|| if r % 4 == 1 { r } else { -r })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MiyawakiHit {
    pub p: u64,
    #[serde(serialize_with = "crate::ser::display")]
    pub curve: WeierstrassCurve,
    /// `ord_p Δ` of the model found.
    pub ord_delta: u32,
}

fn discriminant_i128(a: [i64; 5]) -> i128 {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    let b2 = a1 * a1 + 4 * a2;
    let b4 = a1 * a3 + 2 * a4;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
}

/// `(p, k)` when `|n| = p^k` with `p` among `primes`.
fn prime_power_in(n: i128, primes: &[u64]) -> Option<(u64, u32)> {
    let mut n = n.unsigned_abs();
    if n < 2 {
        return None;
    }
    for &p in primes {
        let pp = p as u128;
        if n.is_multiple_of(pp) {
            let mut k = 0;
            while n.is_multiple_of(pp) {
                n /= pp;
                k += 1;
            }
            return (n == 1).then_some((p, k));
        }
    }
    None
}

/// Curves in the box `|a_i| ≤ MIYAWAKI_BOX` with `|Δ| = p^k` for a prime
/// `p ≤ bound`, multiplicative at `p`, and a rational point of order `ℓ`;
/// reported as reduced minimal models, deduplicated by `j`. Sorted by `(p, ord_p Δ, coefficients)`.
pub fn miyawaki_search(ell: u64, bound: u64) -> Result<Vec<MiyawakiHit>> {
    if !matches!(ell, 3 | 5 | 7) {
        return Err(CurveError::UnsupportedEll(ell).into());
    }
    let primes = primes_up_to(bound);
    let side = 2 * MIYAWAKI_BOX + 1;
    let total = side.pow(5);
    let screened: Vec<([i64; 5], u64, u32)> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut a = [0i64; 5];
            for c in a.iter_mut() {
                *c = idx % side - MIYAWAKI_BOX;
                idx /= side;
            }
            let (p, k) = prime_power_in(discriminant_i128(a), &primes)?;
            Some((a, p, k))
        })
        .collect();
    let mut hits: Vec<MiyawakiHit> = screened
        .into_par_iter()
        .filter_map(|(a, p, k)| {
            let e = WeierstrassCurve::new(a).ok()?;
            let c4 = e.invariants().c4;
            if (&c4 % BigInt::from(p)).is_zero() {
                return None;
            }
            rational_torsion_points(&e, ell)
                .ok()
                .filter(|pts| !pts.is_empty())
                .map(|_| MiyawakiHit {
                    p,
                    curve: e.minimal_model(&[2, 3, p]),
                    ord_delta: k,
                })
        })
        .collect();
    hits.sort_by(|x, y| {
        (x.p, x.ord_delta, x.curve.coefficients()).cmp(&(y.p, y.ord_delta, y.curve.coefficients()))
    });
    let mut seen = BTreeSet::new();
    hits.retain(|h| seen.insert(h.curve.j_invariant()));
    Ok(hits)
}

/// One record of the regression data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiyawakiRecord {
    pub ell: u64,
    pub p: u64,
    pub curve: WeierstrassCurve,
}

/// Parse lines `ell p a1 a2 a3 a4 a6`; `#` starts a comment.
pub fn parse_miyawaki_data(text: &str) -> Result<Vec<MiyawakiRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| FamilyError::Data(i + 1, t.to_string()))
            })
            .collect::<Result<_>>()?;
        let [ell, p, a1, a2, a3, a4, a6] = nums[..] else {
            return Err(FamilyError::Data(i + 1, "expected seven integers".into()));
        };
        out.push(MiyawakiRecord {
            ell: ell as u64,
            p: p as u64,
            curve: WeierstrassCurve::new([a1, a2, a3, a4, a6])?,
        });
    }
    Ok(out)
}

/// Close `{seed}` under Vélu quotients by rational points of prime order,
/// along paths of length ≤ `depth`. Members are deduplicated by `j`.
pub fn isogeny_class(seed: &WeierstrassCurve, depth: usize) -> Result<Vec<WeierstrassCurve>> {
    let mut seen = BTreeSet::from([seed.j_invariant()]);
    let mut class = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for e in &frontier {
            for ell in ISOGENY_PRIMES {
                for pt in rational_torsion_points(e, ell)? {
                    let image = velu_quotient(e, &pt)?;
                    if seen.insert(image.j_invariant()) {
                        next.push(image.clone());
                        class.push(image);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassMember {
    #[serde(serialize_with = "crate::ser::display")]
    pub curve: WeierstrassCurve,
    pub ord_delta: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalReport {
    pub ell: u64,
    pub p: u64,
    pub class_members: Vec<ClassMember>,
    pub dagger_index: usize,
    pub dagger_valuation: u32,
    /// The value the family predicts: 4 at `(2, 17)`, `ℓ` otherwise.
    pub expected_valuation: u32,
}

impl MaximalReport {
    pub fn matches_expected(&self) -> bool {
        self.dagger_valuation == self.expected_valuation
    }

    pub fn dagger(&self) -> &WeierstrassCurve {
        &self.class_members[self.dagger_index].curve
    }
}

pub fn expected_dagger_valuation(ell: u64, p: u64) -> u32 {
    if (ell, p) == (2, NS_SPECIAL_PRIME) {
        4
    } else {
        ell as u32
    }
}

/// The member maximizing `ord_ℓ(ord_p Δ)`; a tie is an error.
pub fn identify_dagger(ell: u64, p: u64, members: &[WeierstrassCurve]) -> Result<MaximalReport> {
    if members.is_empty() {
        return Err(FamilyError::EmptyClass);
    }
    let class_members: Vec<ClassMember> = members
        .iter()
        .map(|e| ClassMember {
            curve: e.clone(),
            ord_delta: e.minimal_ord_delta(p),
        })
        .collect();
    let score = |m: &ClassMember| crate::arith::valuation_u64(m.ord_delta as u64, ell).unwrap_or(0);
    let best = class_members.iter().map(score).max().unwrap();
    let argmax: Vec<usize> = (0..class_members.len())
        .filter(|&i| score(&class_members[i]) == best)
        .collect();
    if argmax.len() != 1 {
        return Err(FamilyError::NonUniqueMaximum(argmax));
    }
    let dagger_index = argmax[0];
    Ok(MaximalReport {
        ell,
        p,
        dagger_valuation: class_members[dagger_index].ord_delta,
        class_members,
        dagger_index,
        expected_valuation: expected_dagger_valuation(ell, p),
    })
}

/// A curve of the family at `(ℓ, p)`: the `Δ = p` Neumann–Setzer curve, the
/// exceptional seed at 17, or the first regression record for odd `ℓ`.
pub fn family_seed(ell: u64, p: u64) -> Result<WeierstrassCurve> {
    if ell == 2 {
        if p == NS_SPECIAL_PRIME {
            return Ok(ns_special_seed());
        }
        if is_prime(p) {
            if let Some(u) = ns_parameter(p) {
                return ns_curve_delta_p(u);
            }
        }
        return Err(FamilyError::UnknownInstance(ell, p));
    }
    parse_miyawaki_data(MIYAWAKI_DATA)?
        .into_iter()
        .find(|r| r.ell == ell && r.p == p)
        .map(|r| r.curve)
        .ok_or(FamilyError::UnknownInstance(ell, p))
}

/// Build the isogeny class of the family at `(ℓ, p)` and locate `E_†`.
pub fn dagger_for(ell: u64, p: u64) -> Result<MaximalReport> {
    let seed = family_seed(ell, p)?;
    let class = isogeny_class(&seed, CLOSURE_DEPTH)?;
    identify_dagger(ell, p, &class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceEntry {
    pub p: u64,
    pub residue: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub ell: u64,
    /// `p ≡ 1 mod modulus` is required; `None` when no congruence applies.
    pub modulus: Option<u64>,
    pub entries: Vec<CongruenceEntry>,
    pub all_pass: bool,
}

/// `p ≡ 1 mod 8` for `ℓ = 2` and `p ≡ 1 mod 3` for `ℓ = 3`.
pub fn theorem11_congruences(ell: u64, primes: &[u64]) -> CongruenceReport {
    let modulus = match ell {
        2 => Some(8),
        3 => Some(3),
        _ => None,
    };
    let entries: Vec<CongruenceEntry> = primes
        .iter()
        .map(|&p| {
            let residue = modulus.map_or(0, |m| p % m);
            CongruenceEntry {
                p,
                residue,
                pass: modulus.is_none() || residue == 1,
            }
        })
        .collect();
    CongruenceReport {
        ell,
        modulus,
        all_pass: entries.iter().all(|e| e.pass),
        entries,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingProxy {
    pub p: u64,
    /// `ord_p` of the discriminant of the 2-division cubic.
    pub disc_valuation: u32,
    /// Roots of the cubic mod `p`, with multiplicity.
    pub roots_mod_p: usize,
    pub holds: bool,
}

/// Shadow of "`ℚ(E[2])` is unramified at `p`": the 2-division cubic has
/// discriminant of even `p`-valuation and splits completely mod `p`.
pub fn two_division_splitting_proxy(e: &WeierstrassCurve, p: u64) -> SplittingProxy {
    let cubic = e.two_division_cubic();
    let disc_valuation = valuation(&cubic.discriminant(), p).unwrap_or(0);
    let mut coeffs: Vec<u64> = cubic
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
        .collect();
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    let mut roots = 0;
    let mut x = 0;
    while x < p && coeffs.len() > 1 {
        // synthetic division by (X − x) mod p
        let n = coeffs.len();
        let mut q = vec![0u64; n - 1];
        let mut acc = 0u64;
        for i in (0..n).rev() {
            acc = (acc * x + coeffs[i]) % p;
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        if acc == 0 {
            roots += 1;
            coeffs = q;
        } else {
            x += 1;
        }
    }
    SplittingProxy {
        p,
        disc_valuation,
        roots_mod_p: roots,
        holds: disc_valuation.is_multiple_of(2) && roots == 3,
    }
}

/// Local conclusions for a family member: ordinary at ℓ (when
/// good there) and multiplicative at `p`.
pub fn ordinary_and_toroidal(
    e: &WeierstrassCurve,
    ell: u64,
    p: u64,
) -> Result<(Option<bool>, bool)> {
    let e = &e.minimal_model(&[ell, p]);
    let good_at_ell = valuation(&e.discriminant(), ell) == Some(0);
    let ordinary = if good_at_ell {
        Some(is_ordinary(e, ell)?)
    } else {
        None
    };
    let toroidal = e.local_data(p)?.kind == ReductionKind::Multiplicative;
    Ok((ordinary, toroidal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ns_small_bound() {
        let inst = ns_enumerate(200).unwrap();
        let got: Vec<(i64, u64)> = inst.iter().map(|i| (i.u, i.p)).collect();
        assert_eq!(got, vec![(-3, 73), (5, 89), (-7, 113)]);
        assert!(inst
            .iter()
            .all(|i| i.discriminants_ok && i.multiplicative_at_p && i.ordinary_at_2));
        assert_eq!(
            inst[0].curve_delta_p,
            WeierstrassCurve::new([1, -1, 0, -1, 0]).unwrap()
        );
        assert_eq!(
            inst[0].curve_delta_p2,
            WeierstrassCurve::new([1, -1, 0, 4, -3]).unwrap()
        );
    }

    #[test]
    fn ns_parameters() {
        assert_eq!(ns_parameter(73), Some(-3));
        assert_eq!(ns_parameter(89), Some(5));
        assert_eq!(ns_parameter(65), Some(1));
        assert_eq!(ns_parameter(17), None);
        assert_eq!(ns_parameter(70), None);
    }

    #[test]
    fn congruences() {
        assert!(theorem11_congruences(3, &[19, 37]).all_pass);
        assert!(!theorem11_congruences(2, &[7]).all_pass);
        assert!(theorem11_congruences(5, &[11]).all_pass);
    }

    #[test]
    fn daggers_of_small_classes() {
        for (ell, p, v, size) in [
            (2, 73, 2, 2),
            (2, 17, 4, 4),
            (3, 19, 3, 3),
            (3, 37, 3, 3),
            (5, 11, 5, 3),
        ] {
            let r = dagger_for(ell, p).unwrap();
            assert_eq!(r.dagger_valuation, v, "({ell}, {p})");
            assert_eq!(r.class_members.len(), size);
        }
        let r = dagger_for(2, 73).unwrap();
        assert_eq!(r.dagger().discriminant(), BigInt::from(-73 * 73));
    }

    #[test]
    fn tie_is_reported() {
        let e = WeierstrassCurve::new([1, -1, 0, -1, 0]).unwrap();
        let twin = WeierstrassCurve::new([0, -1, 1, 0, 0]).unwrap();
        assert!(matches!(
            identify_dagger(2, 73, &[e, twin]),
            Err(FamilyError::NonUniqueMaximum(_))
        ));
    }

    #[test]
    fn splitting_proxy_separates_the_pair() {
        let small = WeierstrassCurve::new([1, -1, 0, -1, 0]).unwrap();
        let big = WeierstrassCurve::new([1, -1, 0, 4, -3]).unwrap();
        assert!(two_division_splitting_proxy(&big, 73).holds);
        assert!(!two_division_splitting_proxy(&small, 73).holds);
    }

    #[test]
    fn search_matches_regression_data() {
        let data = parse_miyawaki_data(MIYAWAKI_DATA).unwrap();
        for ell in [3, 5, 7] {
            let found: Vec<(u64, WeierstrassCurve)> = miyawaki_search(ell, 100)
                .unwrap()
                .into_iter()
                .map(|h| (h.p, h.curve))
                .collect();
            let recorded: Vec<(u64, WeierstrassCurve)> = data
                .iter()
                .filter(|r| r.ell == ell)
                .map(|r| (r.p, r.curve.clone()))
                .collect();
            assert_eq!(found, recorded, "ℓ = {ell}");
        }
    }

    #[test]
    fn data_parser() {
        let recs = parse_miyawaki_data("# c\n5 11 0 -1 1 0 0\n\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert!(parse_miyawaki_data("5 11 0").is_err());
    }
}
