//! Ramification filtrations as abstract order sequences: the Herbrand function,
//! upper-numbering jumps, conductor exponents, and the (ℓ,S)-controlled
//! predicates.
//!
//! Lower numbering follows Serre: for real `u ≥ 0`, `G_u = G_⌈u⌉`.

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{as_prime_power, is_prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RamificationError {
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("ramification index must be non-negative")]
    NegativeIndex,
    #[error("{order} is not a power of {ell}; only abelian ℓ-extensions are covered")]
    NotEllPower { order: u64, ell: u64 },
    #[error("inconsistent tower: {0}")]
    InconsistentTower(String),
    #[error("rational arithmetic overflowed")]
    Overflow,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

type Result<T> = std::result::Result<T, RamificationError>;

/// Lower-numbering orders `[|G_0|, |G_1|, …]`; every later group is trivial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamFiltration {
    orders: Vec<u64>,
    base_field_tag: String,
}

impl RamFiltration {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        Self::with_tag(orders, "Q_ell")
    }

    pub fn with_tag(mut orders: Vec<u64>, tag: &str) -> Result<Self> {
        if orders.is_empty() {
            orders.push(1);
        }
        if orders.contains(&0) {
            return Err(RamificationError::InvalidFiltration(
                "group orders must be positive".into(),
            ));
        }
        for w in orders.windows(2) {
            if w[0] % w[1] != 0 {
                return Err(RamificationError::InvalidFiltration(format!(
                    "{} does not divide {}",
                    w[1], w[0]
                )));
            }
        }
        // Normalize to exactly one trailing 1.
        while orders.last() == Some(&1) {
            orders.pop();
        }
        orders.push(1);
        Ok(Self {
            orders,
            base_field_tag: tag.to_string(),
        })
    }

    pub fn trivial() -> Self {
        Self::new(vec![1]).unwrap()
    }

    /// Tame filtration `[ℓ−1, 1]`.
    pub fn tame(ell: u64) -> Self {
        Self::new(vec![ell - 1, 1]).unwrap()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn base_field_tag(&self) -> &str {
        &self.base_field_tag
    }

    /// `|G_i|` for an integer index.
    pub fn order(&self, i: usize) -> u64 {
        self.orders.get(i).copied().unwrap_or(1)
    }

    /// `|G_u|` for a rational index `u ≥ 0`.
    pub fn order_at(&self, u: Rational64) -> u64 {
        let i = u.ceil().to_integer().max(0) as usize;
        self.order(i)
    }

    pub fn is_trivial(&self) -> bool {
        self.orders[0] == 1
    }

    /// Largest `c` with `G_c ≠ 1`.
    pub fn last_nontrivial(&self) -> Option<usize> {
        self.orders.iter().rposition(|&g| g > 1)
    }

    /// `φ(u) = ∫₀ᵘ dt / [G_0 : G_t]`.
    pub fn herbrand_phi(&self, u: Rational64) -> Result<Rational64> {
        if u < Rational64::zero() {
            return Err(RamificationError::NegativeIndex);
        }
        let g0 = self.orders[0] as i64;
        let whole = u.floor().to_integer();
        let frac = u - Rational64::from_integer(whole);
        let mut acc = Rational64::zero();
        for i in 1..=whole {
            let step = Rational64::new(self.order(i as usize) as i64, g0);
            acc = acc.checked_add(&step).ok_or(RamificationError::Overflow)?;
        }
        let slope = Rational64::new(self.order(whole as usize + 1) as i64, g0);
        let tail = frac
            .checked_mul(&slope)
            .ok_or(RamificationError::Overflow)?;
        acc.checked_add(&tail).ok_or(RamificationError::Overflow)
    }

    /// Inverse of [`herbrand_phi`](Self::herbrand_phi).
    pub fn herbrand_psi(&self, v: Rational64) -> Result<Rational64> {
        if v < Rational64::zero() {
            return Err(RamificationError::NegativeIndex);
        }
        let g0 = self.orders[0] as i64;
        let mut base = Rational64::zero();
        let mut i: i64 = 0;
        loop {
            let slope = Rational64::new(self.order(i as usize + 1) as i64, g0);
            let next = base
                .checked_add(&slope)
                .ok_or(RamificationError::Overflow)?;
            if v <= next || i as usize >= self.orders.len() {
                let rest = v.checked_sub(&base).ok_or(RamificationError::Overflow)?;
                let step = rest
                    .checked_mul(&slope.recip())
                    .ok_or(RamificationError::Overflow)?;
                return Ok(Rational64::from_integer(i) + step);
            }
            base = next;
            i += 1;
        }
    }

    /// Upper-numbering jumps `φ(i)` at each lower index where `G_i ≠ G_{i+1}`.
    pub fn upper_jumps(&self) -> Result<Vec<Rational64>> {
        (0..self.orders.len())
            .filter(|&i| self.order(i) != self.order(i + 1))
            .map(|i| self.herbrand_phi(Rational64::from_integer(i as i64)))
            .collect()
    }

    /// Artin conductor exponent of an abelian extension: 0 if unramified,
    /// otherwise `φ(c) + 1`.
    pub fn conductor_exponent(&self) -> Result<Rational64> {
        match self.last_nontrivial() {
            None => Ok(Rational64::zero()),
            Some(c) => Ok(self.herbrand_phi(Rational64::from_integer(c as i64))? + 1),
        }
    }

    /// Higher ramification above `1/(ℓ−1)` (upper numbering) is trivial.
    /// A jump exactly at `1/(ℓ−1)` is allowed.
    pub fn check_l4(&self, ell: u64) -> Result<bool> {
        let Some(c) = self.last_nontrivial() else {
            return Ok(true);
        };
        let top = self.herbrand_phi(Rational64::from_integer(c as i64))?;
        Ok(top <= Rational64::new(1, ell as i64 - 1))
    }
}

fn ell_exponent(order: u64, ell: u64) -> Result<u32> {
    if order == 1 {
        return Ok(0);
    }
    match as_prime_power(order as u128) {
        Some((p, k)) if p == ell => Ok(k),
        _ => Err(RamificationError::NotEllPower { order, ell }),
    }
}

/// `E ⊇ F ⊇ Q_ℓ(μ_ℓ) ⊇ Q_ℓ` with `E/Q_ℓ(μ_ℓ)` a totally ramified abelian ℓ-extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerData {
    ell: u64,
    /// `Gal(E/Q_ℓ)`.
    pub total: RamFiltration,
    /// `Gal(E/F)`.
    pub sub: RamFiltration,
    /// `Gal(F/Q_ℓ(μ_ℓ))`, in its own lower numbering.
    pub quotient: RamFiltration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma31Report {
    pub l4_holds: bool,
    #[serde(serialize_with = "crate::ser::display")]
    pub f_top: Rational64,
    #[serde(serialize_with = "crate::ser::display")]
    pub f_bottom: Rational64,
    pub equivalence_witnessed: bool,
}

impl TowerData {
    pub fn new(
        ell: u64,
        total: RamFiltration,
        sub: RamFiltration,
        quotient: RamFiltration,
    ) -> Result<Self> {
        let tower = Self {
            ell,
            total,
            sub,
            quotient,
        };
        tower.validate()?;
        Ok(tower)
    }

    /// Builds the tower from ℓ-exponents of `H_i = Gal(E/Q_ℓ(μ_ℓ))_i` and
    /// `N_i = Gal(E/F)_i` for `i ≥ 1` (index 0 repeats index 1); the quotient
    /// filtration is derived through Herbrand's theorem.
    pub fn from_exponents(ell: u64, h: &[u32], n: &[u32]) -> Result<Self> {
        if !is_prime(ell) {
            return Err(RamificationError::NotPrime(ell));
        }
        let h_at = |i: usize| h.get(i.max(1) - 1).copied().unwrap_or(0);
        let n_at = |i: usize| n.get(i.max(1) - 1).copied().unwrap_or(0);
        let len = h.len().max(n.len()) + 1;
        let mut total = vec![(ell - 1) * ell.pow(h_at(0))];
        total.extend((1..len).map(|i| ell.pow(h_at(i))));
        let sub_orders: Vec<u64> = (0..len).map(|i| ell.pow(n_at(i))).collect();
        if (0..len).any(|i| n_at(i) > h_at(i)) {
            return Err(RamificationError::InconsistentTower(
                "sub larger than the ambient group".into(),
            ));
        }
        let sub = RamFiltration::with_tag(sub_orders, "E/F")?;
        let mut quotient = Vec::new();
        for j in 0.. {
            let x = sub.herbrand_psi(Rational64::from_integer(j))?;
            let i = x.ceil().to_integer() as usize;
            let q = ell.pow(h_at(i) - n_at(i).min(h_at(i)));
            quotient.push(q);
            if q == 1 {
                break;
            }
        }
        Self::new(
            ell,
            RamFiltration::with_tag(total, "Q_ell")?,
            sub,
            RamFiltration::with_tag(quotient, "Q_ell(mu_ell)")?,
        )
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Lower filtration of `H = Gal(E/Q_ℓ(μ_ℓ))`: `H_0 = H_1 = D_1`, `H_i = D_i`.
    pub fn ell_part(&self) -> RamFiltration {
        let mut orders = self.total.orders.clone();
        orders[0] = self.total.order(1);
        RamFiltration::with_tag(orders, "Q_ell(mu_ell)").expect("tail of a valid filtration")
    }

    fn validate(&self) -> Result<()> {
        let ell = self.ell;
        if !is_prime(ell) {
            return Err(RamificationError::NotPrime(ell));
        }
        let bad = |msg: String| Err(RamificationError::InconsistentTower(msg));
        let d0 = self.total.order(0);
        let d1 = self.total.order(1);
        if d0 != (ell - 1) * d1 {
            return bad(format!("tame index {} ≠ ℓ−1", d0 / d1));
        }
        let h = self.ell_part();
        for &g in h.orders().iter().chain(self.sub.orders()) {
            ell_exponent(g, ell)?;
        }
        if self.sub.order(0) != self.sub.order(1) {
            return bad("Gal(E/F) must lie in the wild inertia".into());
        }
        let len = h.orders().len().max(self.sub.orders().len()) + 1;
        for i in 0..len {
            if !h.order(i).is_multiple_of(self.sub.order(i)) {
                return bad(format!("|N_{i}| does not divide |H_{i}|"));
            }
        }
        if self.quotient.order(0) * self.sub.order(0) != h.order(0) {
            return bad("quotient order differs from the index [H : N]".into());
        }
        // Herbrand: H_x N / N = Q_{φ_{E/F}(x)}. Check at the integers, at
        // ψ of integers, and at midpoints between consecutive sample points.
        let mut xs: Vec<Rational64> = (0..=len as i64 + 1).map(Rational64::from_integer).collect();
        for j in 0..=self.quotient.orders().len() as i64 + 1 {
            xs.push(self.sub.herbrand_psi(Rational64::from_integer(j))?);
        }
        xs.sort();
        xs.dedup();
        let mids: Vec<Rational64> = xs
            .windows(2)
            .map(|w| (w[0] + w[1]) / Rational64::from_integer(2))
            .collect();
        xs.extend(mids);
        for x in xs {
            let lhs = self.quotient.order_at(self.sub.herbrand_phi(x)?);
            let rhs = h.order_at(x) / self.sub.order_at(x);
            if lhs != rhs {
                return bad(format!("Herbrand compatibility fails at x = {x}"));
            }
        }
        Ok(())
    }

    /// Both sides of the equivalence "L4 for `Gal(E/Q_ℓ)`" ⇔ "both abelian
    /// conductor exponents `f(E/F)`, `f(F/Q_ℓ(μ_ℓ))` are at most 2".
    pub fn lemma31_check(&self) -> Result<Lemma31Report> {
        let l4_holds = self.total.check_l4(self.ell)?;
        let f_top = self.sub.conductor_exponent()?;
        let f_bottom = self.quotient.conductor_exponent()?;
        let two = Rational64::from_integer(2);
        let conductors_small = f_top <= two && f_bottom <= two;
        Ok(Lemma31Report {
            l4_holds,
            f_top,
            f_bottom,
            equivalence_witnessed: l4_holds == conductors_small,
        })
    }
}

/// Ramification at one rational prime of a Galois extension `L/Q`.
#[derive(Debug, Clone)]
pub struct PlaceRamification {
    pub prime: u64,
    pub ramification_degree: u64,
    /// Decomposition-group filtration, consulted at the prime ℓ.
    pub filtration: Option<RamFiltration>,
}

#[derive(Debug, Clone)]
pub struct RamificationProfile {
    /// L1 (Galois over Q, contains μ_ℓ) is taken on trust.
    pub galois_with_mu_ell: bool,
    pub places: Vec<PlaceRamification>,
}

/// Properties L1–L4 of an (ℓ, S)-controlled extension.
pub fn controlled_predicate(profile: &RamificationProfile, ell: u64, s: &[u64]) -> Result<bool> {
    if !profile.galois_with_mu_ell {
        return Ok(false);
    }
    for place in &profile.places {
        if place.prime == ell {
            if let Some(f) = &place.filtration {
                if !f.check_l4(ell)? {
                    return Ok(false);
                }
            }
            continue;
        }
        if place.ramification_degree <= 1 {
            continue;
        }
        // L2: ramified only over S ∪ {ℓ}; L3: degree divides ℓ.
        if !s.contains(&place.prime) || !ell.is_multiple_of(place.ramification_degree) {
            return Ok(false);
        }
    }
    Ok(true)
}
