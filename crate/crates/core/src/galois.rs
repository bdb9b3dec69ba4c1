//! The ℓ-adic model of a product of Tate curves: `σ` (inertia at p) and `τ`
//! (a lift of a generator of `Gal(ℚ(μ_ℓ∞)/ℚ)` acting through `ω`), the group
//! ring identities they satisfy, stable submodules and the component-group
//! bookkeeping along isogenies.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::padic::{Lattice, PadicContext, PadicError, PadicMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("ℓ = {0} is not supported (expected 2, 3 or 5)")]
    UnsupportedEll(u64),
    #[error("s = {s} must be a nonzero multiple of ℓ = {ell}")]
    InvalidS { ell: u64, s: i64 },
    #[error("d = {0} must be positive")]
    InvalidDimension(usize),
    #[error("exhaustive enumeration needs ℓ^n ≤ 9 and d ≤ 2 (got ℓ^n = {modulus}, d = {d})")]
    SizeGuard { modulus: u64, d: usize },
    #[error("component-group transfer is not integral: {phi}·ℓ^{gain}/ℓ^{loss}")]
    NonIntegralTransfer { phi: u64, gain: u32, loss: u32 },
    #[error("kernel is not stable under σ and τ")]
    UnstableKernel,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

type Result<T> = std::result::Result<T, GaloisError>;

/// `ρ(σ)` and `ρ(τ)` on `(ℤ/ℓ^N)^{2d}`, `d` diagonal copies of the 2×2 model
/// `σ = (1 s; 0 1)`, `τ = (0 −ω; 1 1+ω)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisRep {
    pub ctx: PadicContext,
    pub d: usize,
    pub s: i64,
    pub omega: u64,
    /// Residue mod ℓ that `ω` lifts.
    pub omega_generator: u64,
    pub sigma: PadicMatrix,
    pub tau: PadicMatrix,
}

/// The (ℓ−1)-th root of unity in `ℤ/ℓ^N` congruent to `g` mod ℓ, by Newton
/// iteration on `x^{ℓ−1} − 1`.
pub fn teichmuller(ctx: PadicContext, g: u64) -> u64 {
    let ell = ctx.ell();
    let mut x = g % ctx.modulus();
    for _ in 0..=ctx.precision() {
        let f = ctx.sub(ctx.pow(x, ell - 1), 1);
        let df = ctx.mul(
            ctx.reduce((ell - 1) as i64),
            ctx.pow(x, ell.saturating_sub(2)),
        );
        let step = ctx.mul(f, ctx.inverse(df).expect("derivative is a unit"));
        x = ctx.sub(x, step);
    }
    x
}

/// `ω` and the residue it lifts: `−1` for ℓ = 2, 3; the Teichmüller lift of
/// 2 for ℓ = 5.
fn omega_for(ctx: PadicContext) -> (u64, u64) {
    match ctx.ell() {
        2 | 3 => (ctx.neg(1), ctx.neg(1) % ctx.ell()),
        ell => (teichmuller(ctx, 2), 2 % ell),
    }
}

pub fn build_rep(ell: u64, d: usize, s: i64, precision: u32) -> Result<GaloisRep> {
    if !matches!(ell, 2 | 3 | 5) {
        return Err(GaloisError::UnsupportedEll(ell));
    }
    if s == 0 || s.rem_euclid(ell as i64) != 0 {
        return Err(GaloisError::InvalidS { ell, s });
    }
    if d == 0 {
        return Err(GaloisError::InvalidDimension(d));
    }
    let ctx = PadicContext::new(ell, precision)?;
    let (omega, omega_generator) = omega_for(ctx);
    let w = ctx.signed(omega);
    let sigma = PadicMatrix::from_rows(ctx, &[vec![1, s], vec![0, 1]]).block_diagonal(d);
    let tau = PadicMatrix::from_rows(ctx, &[vec![0, -w], vec![1, 1 + w]]).block_diagonal(d);
    Ok(GaloisRep {
        ctx,
        d,
        s,
        omega,
        omega_generator,
        sigma,
        tau,
    })
}

impl GaloisRep {
    pub fn ell(&self) -> u64 {
        self.ctx.ell()
    }

    pub fn dim(&self) -> usize {
        2 * self.d
    }

    /// The same model rebuilt at another precision.
    pub fn at_precision(&self, precision: u32) -> Result<Self> {
        build_rep(self.ell(), self.d, self.s, precision)
    }

    pub fn sigma_inv(&self) -> PadicMatrix {
        self.sigma.inverse().expect("unipotent")
    }

    pub fn tau_inv(&self) -> PadicMatrix {
        self.tau.inverse().expect("det τ = ω^d is a unit")
    }

    /// `σ^τ = τ⁻¹στ`.
    pub fn sigma_conj(&self) -> PadicMatrix {
        self.tau_inv().mul(&self.sigma).mul(&self.tau)
    }

    /// `M̄₂`: the span of the first basis vector of each block, fixed by σ.
    pub fn m2(&self) -> Lattice {
        let dim = self.dim();
        let gens = (0..self.d)
            .map(|j| {
                let mut v = vec![0; dim];
                v[2 * j] = 1;
                v
            })
            .collect();
        Lattice::span(self.ctx, dim, gens)
    }

    pub fn filtration(&self) -> FiltrationData {
        let m2 = self.m2();
        FiltrationData {
            tau_m2: m2.image(&self.tau),
            m1: m2.clone(),
            m2,
        }
    }
}

/// Grothendieck filtration `M₂ ⊆ M₁` of the totally toroidal model (`M₁ = M₂`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationData {
    pub m2: Lattice,
    pub m1: Lattice,
    pub tau_m2: Lattice,
}

fn signed_rows(m: &PadicMatrix) -> Vec<Vec<i64>> {
    let ctx = m.ctx();
    m.row_major()
        .into_iter()
        .map(|r| r.into_iter().map(|x| ctx.signed(x)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Vec<Vec<i64>>,
    pub rhs: Vec<Vec<i64>>,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: PadicMatrix, rhs: PadicMatrix) -> Self {
        Self {
            name: name.to_string(),
            pass: lhs == rhs,
            lhs: signed_rows(&lhs),
            rhs: signed_rows(&rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub ell: u64,
    pub s: i64,
    pub precision: u32,
    pub d: usize,
    pub omega: i64,
    pub omega_generator: u64,
    pub checks: Vec<IdentityCheck>,
    pub all_pass: bool,
}

/// The group-ring identities applicable to `ℓ`, evaluated exactly:
/// `στ − τσ⁻¹ = s` (ℓ = 2, 3); `στ² − τ²σ⁻¹ = (1+ω)s` and
/// `σ^τσ − σσ^τ = −s²ω (1 2(1+ω); 0 −1)` (ℓ = 5).
pub fn verify_prop66(rep: &GaloisRep) -> IdentityReport {
    let ctx = rep.ctx;
    let dim = rep.dim();
    let id = PadicMatrix::identity(ctx, dim);
    let s = ctx.reduce(rep.s);
    let (sigma, tau) = (&rep.sigma, &rep.tau);
    let mut checks = Vec::new();
    if rep.ell() != 5 {
        let lhs = sigma.mul(tau).sub(&tau.mul(&rep.sigma_inv()));
        checks.push(IdentityCheck::new("στ − τσ⁻¹ = s", lhs, id.scale(s)));
    } else {
        let tau2 = tau.mul(tau);
        let lhs = sigma.mul(&tau2).sub(&tau2.mul(&rep.sigma_inv()));
        let rhs = id.scale(ctx.mul(ctx.add(1, rep.omega), s));
        checks.push(IdentityCheck::new("στ² − τ²σ⁻¹ = (1+ω)s", lhs, rhs));

        let conj = rep.sigma_conj();
        let lhs = conj.mul(sigma).sub(&sigma.mul(&conj));
        let w = rep.omega;
        let block = PadicMatrix::from_rows(
            ctx,
            &[vec![1, ctx.signed(ctx.mul(2, ctx.add(1, w)))], vec![0, -1]],
        )
        .block_diagonal(rep.d);
        let coeff = ctx.neg(ctx.mul(ctx.mul(s, s), w));
        checks.push(IdentityCheck::new(
            "σ^τσ − σσ^τ = −s²ω (1 2(1+ω); 0 −1)",
            lhs,
            block.scale(coeff),
        ));
    }
    IdentityReport {
        ell: rep.ell(),
        s: rep.s,
        precision: ctx.precision(),
        d: rep.d,
        omega: ctx.signed(rep.omega),
        omega_generator: rep.omega_generator,
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Characteristic polynomial `x² − tr·x + det` of the first τ-block, as
/// `[det, −tr, 1]`, next to the expected `(x−1)(x−ω)`.
pub fn tau_char_poly(rep: &GaloisRep) -> ([u64; 3], [u64; 3]) {
    let ctx = rep.ctx;
    let t = &rep.tau;
    let tr = ctx.add(t.get(0, 0), t.get(1, 1));
    let det = ctx.sub(
        ctx.mul(t.get(0, 0), t.get(1, 1)),
        ctx.mul(t.get(0, 1), t.get(1, 0)),
    );
    let expected = [rep.omega, ctx.neg(ctx.add(1, rep.omega)), 1];
    ([det, ctx.neg(tr), 1], expected)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingSpan {
    pub depth: usize,
    /// Span of the words, as a lattice in `(ℤ/ℓ^N)^4` (row-major entries).
    pub lattice: Lattice,
    pub words: usize,
    /// Whether `s·E_ij` lies in the span for all four matrix units.
    pub contains_s_m2: bool,
}

fn flatten(m: &PadicMatrix) -> Vec<u64> {
    m.row_major().concat()
}

/// `ℤ/ℓ^N`-span of all words of length ≤ `depth` in `σ^{±1}`, `τ^{±1}` (d = 1).
pub fn group_ring_span(rep: &GaloisRep, depth: usize) -> Result<GroupRingSpan> {
    if rep.d != 1 {
        return Err(GaloisError::InvalidDimension(rep.d));
    }
    let ctx = rep.ctx;
    let letters = [
        rep.sigma.clone(),
        rep.tau.clone(),
        rep.sigma_inv(),
        rep.tau_inv(),
    ];
    let id = PadicMatrix::identity(ctx, 2);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([flatten(&id)]);
    let mut layer = vec![id];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for g in &letters {
                let m = w.mul(g);
                if seen.insert(flatten(&m)) {
                    next.push(m);
                }
            }
        }
        layer = next;
    }
    let mut gens: Vec<Vec<u64>> = seen.into_iter().collect();
    gens.sort_unstable();
    let words = gens.len();
    let lattice = Lattice::span(ctx, 4, gens);
    let s = ctx.reduce(rep.s);
    let contains_s_m2 = (0..4).all(|k| {
        let mut v = vec![0; 4];
        v[k] = s;
        lattice.contains(&v)
    });
    Ok(GroupRingSpan {
        depth,
        lattice,
        words,
        contains_s_m2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientStructure {
    pub ell: u64,
    pub presentation: String,
    pub relations: Vec<String>,
    /// Order of `ρ(τ)` in `GL₂(ℤ/ℓ^N)`.
    pub tau_order: u64,
    pub conclusion: String,
    /// The group-ring identities behind the relations hold and the right-hand
    /// sides vanish on `A[ℓ]` (they are divisible by ℓ).
    pub identities_verified: bool,
}

fn matrix_order(m: &PadicMatrix, limit: u64) -> Option<u64> {
    let id = PadicMatrix::identity(m.ctx(), m.rows());
    let mut p = m.clone();
    for k in 1..=limit {
        if p == id {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

/// Presentation of `Gal(ℚ(A[ℓ])/ℚ)` forced by the identities: an identity
/// `X = ℓ·Y` in the group ring becomes `X = 0` on `A[ℓ]` for every lattice
/// in the isogeny class.
pub fn quotient_group_structure(ell: u64) -> Result<QuotientStructure> {
    let rep = build_rep(ell, 1, ell as i64, 4)?;
    let report = verify_prop66(&rep);
    let divisible = report.checks.iter().all(|c| {
        c.rhs
            .iter()
            .flatten()
            .all(|&x| x.rem_euclid(ell as i64) == 0)
    });
    let tau_order = matrix_order(&rep.tau, 64).unwrap_or(0);
    let (relations, conclusion): (Vec<&str>, &str) = match ell {
        2 => (
            vec!["σ̃² = 1", "τ̃² = 1", "σ̃τ̃ = τ̃σ̃⁻¹"],
            "G is a quotient of ℤ/2 × ℤ/2",
        ),
        3 => (
            vec!["σ̃³ = 1", "τ̃² = 1", "σ̃τ̃ = τ̃σ̃⁻¹"],
            "G is a quotient of S₃",
        ),
        _ => (
            vec![
                "σ̃⁵ = 1",
                "τ̃⁴ = 1",
                "σ̃τ̃² = τ̃²σ̃⁻¹",
                "[σ̃^τ̃, σ̃] = 1",
            ],
            "H = ⟨σ̃, σ̃^τ̃⟩ is abelian of exponent dividing 5 and rank at most 2, and τ̃⁻²hτ̃² = h⁻¹ on H",
        ),
    };
    Ok(QuotientStructure {
        ell,
        presentation: format!("⟨σ̃, τ̃ | {}⟩", relations.join(", ")),
        relations: relations.into_iter().map(String::from).collect(),
        tau_order,
        conclusion: conclusion.to_string(),
        identities_verified: report.all_pass && divisible && tau_order == (ell - 1).max(2),
    })
}

fn check_guard(ell: u64, n: u32, d: usize) -> Result<()> {
    let modulus = ell.checked_pow(n).unwrap_or(u64::MAX);
    if modulus > 9 || d > 2 {
        return Err(GaloisError::SizeGuard { modulus, d });
    }
    Ok(())
}

fn sort_key(l: &Lattice) -> (u32, Vec<Vec<u64>>) {
    (l.log_order(), l.generators())
}

/// Smallest submodule containing `v` and stable under σ and τ.
fn cyclic_closure(v: Vec<u64>, maps: &[PadicMatrix], ctx: PadicContext, dim: usize) -> Lattice {
    let mut l = Lattice::span(ctx, dim, vec![v]);
    loop {
        let mut gens = l.generators();
        for m in maps {
            gens.extend(l.generators().iter().map(|g| m.apply(g)));
        }
        let next = Lattice::span(ctx, dim, gens);
        if next == l {
            return l;
        }
        l = next;
    }
}

/// All submodules of `(ℤ/ℓ^n)^{2d}` stable under σ and τ, sorted by order
/// and canonical basis.
pub fn stable_submodules(rep: &GaloisRep, n: u32) -> Result<Vec<Lattice>> {
    let ell = rep.ell();
    check_guard(ell, n, rep.d)?;
    let r = rep.at_precision(n)?;
    let (ctx, dim) = (r.ctx, r.dim());
    let maps = [r.sigma.clone(), r.tau.clone()];
    let q = ctx.modulus();
    let total = q.pow(dim as u32);
    let cyclic: HashSet<Lattice> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let v: Vec<u64> = (0..dim)
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    c
                })
                .collect();
            cyclic_closure(v, &maps, ctx, dim)
        })
        .collect();
    // every stable submodule is a sum of cyclic ones
    let mut all: HashSet<Lattice> = cyclic.clone();
    let cyclic: Vec<Lattice> = cyclic.into_iter().collect();
    let mut frontier: Vec<Lattice> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let fresh: HashSet<Lattice> = frontier
            .par_iter()
            .flat_map_iter(|a| {
                cyclic.iter().map(move |c| {
                    Lattice::span(ctx, dim, [a.generators(), c.generators()].concat())
                })
            })
            .filter(|l| !all.contains(l))
            .collect();
        frontier = fresh.iter().cloned().collect();
        all.extend(fresh);
    }
    let mut out: Vec<Lattice> = all.into_iter().collect();
    out.sort_by_key(sort_key);
    Ok(out)
}

/// `|Φ_{A/κ}|_ℓ = |Φ_A|_ℓ · |κ ∩ M̄₂| / |κ/(κ ∩ M̄₁)|` for a stable `κ ⊆ A[ℓ^n]`.
pub fn lemma43_transfer(rep: &GaloisRep, kernel: &Lattice, phi_ell: u64, n: u32) -> Result<u64> {
    let r = rep.at_precision(n)?;
    let kernel = if kernel.ctx() == r.ctx {
        kernel.clone()
    } else {
        kernel.with_precision(n)?
    };
    let filt = r.filtration();
    let gain = kernel.intersect(&filt.m2)?.log_order();
    let loss = kernel.log_order() - kernel.intersect(&filt.m1)?.log_order();
    let ell = r.ell();
    let up = phi_ell * ell.pow(gain);
    let down = ell.pow(loss);
    if phi_ell == 0 || !up.is_multiple_of(down) {
        return Err(GaloisError::NonIntegralTransfer {
            phi: phi_ell,
            gain,
            loss,
        });
    }
    Ok(up / down)
}

/// `ℓ^{-k}(κ̃ + ℓ^n T)` scaled into `T` but not into `ℓT`, read at precision
/// `ctx` (which must exceed `n`): a key for the isomorphism class of `A/κ`.
fn node_lattice(kernel: &Lattice, n: u32, ctx: PadicContext) -> Lattice {
    let dim = kernel.ambient_rank();
    let ell = ctx.ell();
    let unit = |i: usize, c: u64| {
        let mut v = vec![0; dim];
        v[i] = c;
        v
    };
    let mut gens: Vec<Vec<u64>> = kernel.generators();
    let mut level = n;
    gens.extend((0..dim).map(|i| unit(i, ctx.ell_pow(level))));
    let mut l = Lattice::span(ctx, dim, gens);
    while level > 0 && l.is_divisible_by_ell() {
        level -= 1;
        let mut gens: Vec<Vec<u64>> = l
            .generators()
            .into_iter()
            .map(|g| g.into_iter().map(|x| x / ell).collect())
            .collect();
        gens.extend((0..dim).map(|i| unit(i, ctx.ell_pow(level))));
        l = Lattice::span(ctx, dim, gens);
    }
    l
}

/// Whether σ acts trivially on `L/ℓL`, i.e. `(σ − 1)L ⊆ ℓL`.
fn sigma_trivial_on(l: &Lattice, sigma: &PadicMatrix) -> bool {
    let ctx = l.ctx();
    let dim = l.ambient_rank();
    let n = sigma.sub(&PadicMatrix::identity(ctx, dim));
    let ell_l = Lattice::span(
        ctx,
        dim,
        l.generators()
            .into_iter()
            .map(|g| g.into_iter().map(|x| ctx.mul(x, ctx.ell())).collect())
            .collect(),
    );
    l.image(&n).is_subset_of(&ell_l)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsogenyNode {
    /// Canonical generators of one kernel `κ ⊆ A[ℓ^n]` reaching this node.
    pub kernel: Vec<Vec<u64>>,
    pub n: u32,
    pub phi_ell_part: u64,
    pub is_maximal: bool,
    pub sigma_trivial_first_layer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalSearchReport {
    pub ell: u64,
    pub d: usize,
    pub s: i64,
    pub n_max: u32,
    pub phi_start: u64,
    pub nodes: Vec<IsogenyNode>,
    pub maximal_phi: u64,
    pub maximal_count: usize,
    /// Kernels reaching the same node always gave the same transfer.
    pub transfer_consistent: bool,
    /// σ acts trivially on the first layer of every maximal node.
    pub maximal_sigma_trivial: bool,
    /// σ acts nontrivially on the first layer of every other node.
    pub nonmaximal_sigma_nontrivial: bool,
    pub stability_basis: String,
}

/// Walk the varieties `A/κ` for stable `κ ⊆ A[ℓ^n]`, `n ≤ n_max`, up to
/// isomorphism, and locate the maximal ℓ-part of the component group.
pub fn find_ell_maximal(
    rep: &GaloisRep,
    phi_start: u64,
    n_max: u32,
) -> Result<MaximalSearchReport> {
    check_guard(rep.ell(), n_max, rep.d)?;
    let wide = rep.at_precision(n_max + 1)?;
    // node key → (first kernel, n, phi); keys sorted for determinism
    type Node = (Vec<Vec<u64>>, u32, u64);
    let mut nodes: BTreeMap<(u32, Vec<Vec<u64>>), Node> = BTreeMap::new();
    let mut keys: Vec<Lattice> = Vec::new();
    let mut transfer_consistent = true;
    for n in 1..=n_max {
        for kernel in stable_submodules(rep, n)? {
            let phi = lemma43_transfer(rep, &kernel, phi_start, n)?;
            let key_lattice = node_lattice(&kernel, n, wide.ctx);
            let key = sort_key(&key_lattice);
            match nodes.get(&key) {
                Some(&(_, _, old)) => transfer_consistent &= old == phi,
                None => {
                    nodes.insert(key, (kernel.generators(), n, phi));
                    keys.push(key_lattice);
                }
            }
        }
    }
    keys.sort_by_key(sort_key);
    let maximal_phi = nodes.values().map(|v| v.2).max().unwrap_or(phi_start);
    let out: Vec<IsogenyNode> = keys
        .iter()
        .map(|l| {
            let (kernel, n, phi) = nodes[&sort_key(l)].clone();
            IsogenyNode {
                kernel,
                n,
                phi_ell_part: phi,
                is_maximal: phi == maximal_phi,
                sigma_trivial_first_layer: sigma_trivial_on(l, &wide.sigma),
            }
        })
        .collect();
    Ok(MaximalSearchReport {
        ell: rep.ell(),
        d: rep.d,
        s: rep.s,
        n_max,
        phi_start,
        maximal_phi,
        maximal_count: out.iter().filter(|x| x.is_maximal).count(),
        transfer_consistent,
        maximal_sigma_trivial: out
            .iter()
            .filter(|x| x.is_maximal)
            .all(|x| x.sigma_trivial_first_layer),
        nonmaximal_sigma_nontrivial: out
            .iter()
            .filter(|x| !x.is_maximal)
            .all(|x| !x.sigma_trivial_first_layer),
        nodes: out,
        stability_basis: "⟨σ,τ⟩".to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop412Report {
    pub intersection_trivial: bool,
    pub sum_is_full: bool,
    pub holds: bool,
}

/// `M̄₂ ∩ τ(M̄₂) = 0` and `M₂ ⊕ τ(M₂)` is the whole lattice.
pub fn check_prop412(rep: &GaloisRep) -> Result<Prop412Report> {
    let m2 = rep.m2();
    let tau_m2 = m2.image(&rep.tau);
    let intersection_trivial = m2
        .project_mod_ell()
        .intersect(&tau_m2.project_mod_ell())?
        .is_zero();
    let sum = m2.sum(&tau_m2)?;
    let sum_is_full = sum.lattice == Lattice::full(rep.ctx, rep.dim()) && sum.is_direct;
    Ok(Prop412Report {
        intersection_trivial,
        sum_is_full,
        holds: intersection_trivial && sum_is_full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_values() {
        let r = build_rep(5, 1, 5, 2).unwrap();
        assert_eq!(r.omega, 7);
        let r = build_rep(2, 1, 2, 4).unwrap();
        assert_eq!(signed_rows(&r.tau), vec![vec![0, 1], vec![1, 0]]);
        for ell in [2, 3, 5] {
            let r = build_rep(ell, 1, ell as i64, 5).unwrap();
            assert_eq!(r.tau.determinant(), r.omega);
            let (got, want) = tau_char_poly(&r);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(build_rep(7, 1, 7, 3), Err(GaloisError::UnsupportedEll(7)));
        assert!(matches!(
            build_rep(3, 1, 0, 3),
            Err(GaloisError::InvalidS { .. })
        ));
        assert!(matches!(
            build_rep(3, 1, 4, 3),
            Err(GaloisError::InvalidS { .. })
        ));
    }

    #[test]
    fn identities_small() {
        let r = verify_prop66(&build_rep(2, 1, 2, 6).unwrap());
        assert!(r.all_pass, "{r:?}");
        let r = verify_prop66(&build_rep(5, 2, 5, 4).unwrap());
        assert_eq!(r.checks.len(), 2);
        assert!(r.all_pass, "{r:?}");
    }

    #[test]
    fn stable_lines() {
        let r = build_rep(2, 1, 2, 3).unwrap();
        let subs = stable_submodules(&r, 1).unwrap();
        assert_eq!(subs.len(), 3);
        assert!(subs[1] == Lattice::span(subs[1].ctx(), 2, vec![vec![1, 1]]));
        let r = build_rep(3, 1, 3, 3).unwrap();
        let lines: Vec<Lattice> = stable_submodules(&r, 1)
            .unwrap()
            .into_iter()
            .filter(|l| l.log_order() == 1)
            .collect();
        let ctx = lines[0].ctx();
        let expect: HashSet<Lattice> = [vec![1, 1], vec![1, 2]]
            .into_iter()
            .map(|v| Lattice::span(ctx, 2, vec![v]))
            .collect();
        assert_eq!(lines.into_iter().collect::<HashSet<_>>(), expect);
    }

    #[test]
    fn transfer_examples() {
        let r = build_rep(2, 1, 2, 3).unwrap();
        let ctx = PadicContext::new(2, 1).unwrap();
        let diag = Lattice::span(ctx, 2, vec![vec![1, 1]]);
        assert_eq!(lemma43_transfer(&r, &diag, 2, 1), Ok(1));
        let m2 = Lattice::span(ctx, 2, vec![vec![1, 0]]);
        assert_eq!(lemma43_transfer(&r, &m2, 1, 1), Ok(2));
        assert_eq!(lemma43_transfer(&r, &Lattice::zero(ctx, 2), 2, 1), Ok(2));
        assert!(lemma43_transfer(&r, &diag, 1, 1).is_err());
    }

    #[test]
    fn ns_two_node_graph() {
        let r = build_rep(2, 1, 2, 3).unwrap();
        let rep = find_ell_maximal(&r, 2, 1).unwrap();
        assert_eq!(rep.nodes.len(), 2);
        assert_eq!(rep.maximal_phi, 2);
        assert_eq!(rep.maximal_count, 1);
        assert!(rep.transfer_consistent);
        assert!(rep.maximal_sigma_trivial && rep.nonmaximal_sigma_nontrivial);
    }

    #[test]
    fn direct_sum_and_negative_control() {
        for (ell, d) in [(2, 1), (5, 2)] {
            let r = build_rep(ell, d, ell as i64, 4).unwrap();
            assert!(check_prop412(&r).unwrap().holds);
        }
        let mut bad = build_rep(2, 1, 2, 4).unwrap();
        bad.tau = PadicMatrix::identity(bad.ctx, 2);
        assert!(!check_prop412(&bad).unwrap().holds);
    }

    #[test]
    fn group_ring_depths() {
        let r = build_rep(5, 1, 5, 4).unwrap();
        assert_eq!(group_ring_span(&r, 0).unwrap().lattice.rank(), 1);
        assert!(group_ring_span(&r, 4).unwrap().contains_s_m2);
    }

    #[test]
    fn quotient_presentations() {
        for ell in [2, 3, 5] {
            let q = quotient_group_structure(ell).unwrap();
            assert!(q.identities_verified, "{q:?}");
        }
        assert_eq!(quotient_group_structure(5).unwrap().tau_order, 4);
    }
}
