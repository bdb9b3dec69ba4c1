//! Splitting of `p` in `Q(μ_ℓ)` and the image of global units in
//! `Γ_S = ∏_{v | p} F_v^× / (F_v^×)^ℓ`.
//!
//! Units are never represented as algebraic numbers: a unit is an integer
//! polynomial in `ζ`, and we only ever look at it modulo `λ²` (through
//! `ζ = 1 + t` in `F_ℓ[t]/t²`) and in the residue fields over `p`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{inv_mod, is_prime, multiplicative_order};
use crate::field::{Fq, GaloisField};
use crate::padic::{Lattice, PadicContext};

/// Largest ℓ for which `Z[μ_ℓ]` has class number one.
pub const MAX_ELL: u64 = 19;

/// Exponent box `[−2ℓ, 2ℓ]^k` is scanned only when it has at most this many points.
const BOX_LIMIT: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ℓ = {0} is outside the supported range 2..=19")]
    UnsupportedEll(u64),
    #[error("p must differ from ℓ")]
    EllEqualsP,
    #[error("internal error: {0}")]
    Internal(String),
}

type Result<T> = std::result::Result<T, CyclotomicError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingData {
    pub ell: u64,
    pub p: u64,
    /// Residue degree of `p` in `Q(μ_ℓ)`.
    pub f: u64,
    /// Number of primes over `p` in `Q(μ_ℓ)`.
    pub g: u64,
    /// Number of primes over `p` in `Q(μ_{2ℓ})`.
    pub g2: u64,
    /// At least two primes over `p` in `Q(μ_{2ℓ})`, and `p ≡ 1 mod 8` when ℓ = 2.
    pub necessary_condition: bool,
}

fn validate(ell: u64, p: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(CyclotomicError::NotPrime(ell));
    }
    if ell > MAX_ELL {
        return Err(CyclotomicError::UnsupportedEll(ell));
    }
    if !is_prime(p) {
        return Err(CyclotomicError::NotPrime(p));
    }
    if ell == p {
        return Err(CyclotomicError::EllEqualsP);
    }
    Ok(())
}

/// Conductor of `Q(μ_{2ℓ})`: `ℓ` for odd ℓ, `4` for ℓ = 2.
fn conductor(ell: u64) -> u64 {
    if ell == 2 {
        4
    } else {
        ell
    }
}

pub fn splitting(ell: u64, p: u64) -> Result<SplittingData> {
    validate(ell, p)?;
    let f = multiplicative_order(p % ell, ell).unwrap_or(1);
    let g = (ell - 1) / f;
    let g2 = if ell == 2 {
        if p % 4 == 1 {
            2
        } else {
            1
        }
    } else {
        g
    };
    let necessary_condition = g2 >= 2 && (ell != 2 || p % 8 == 1);
    Ok(SplittingData {
        ell,
        p,
        f,
        g,
        g2,
        necessary_condition,
    })
}

/// `F_ℓ`-rank of `Γ_S`: one cyclic factor of order ℓ per prime over `p` in
/// `F = Q(μ_{2ℓ})`.
pub fn gamma_rank(ell: u64, p: u64) -> Result<usize> {
    Ok(splitting(ell, p)?.g2 as usize)
}

/// A global unit as an integer polynomial in `ζ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitGenerator {
    pub name: String,
    pub coeffs: Vec<i64>,
}

/// Torsion generator (`−ζ`, or `i` for ℓ = 2) followed by the cyclotomic
/// units `u_b = (1 − ζ^b)/(1 − ζ)`, `2 ≤ b ≤ (ℓ−1)/2`.
pub fn unit_generators(ell: u64) -> Vec<UnitGenerator> {
    if ell == 2 {
        return vec![UnitGenerator {
            name: "i".into(),
            coeffs: vec![0, 1],
        }];
    }
    let mut gens = vec![UnitGenerator {
        name: "-zeta".into(),
        coeffs: vec![0, -1],
    }];
    for b in 2..=(ell - 1) / 2 {
        gens.push(UnitGenerator {
            name: format!("u_{b}"),
            coeffs: vec![1; b as usize],
        });
    }
    gens
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Image of `Σ a_k ζ^k` in `F_ℓ[t]/t²` under `ζ ↦ 1 + t`, as `(c₀, c₁)`.
fn mod_lambda_sq(coeffs: &[i64], ell: u64) -> (u64, u64) {
    let l = ell as i64;
    let c0: i64 = coeffs.iter().sum();
    let c1: i64 = coeffs.iter().enumerate().map(|(k, &a)| k as i64 * a).sum();
    (c0.rem_euclid(l) as u64, c1.rem_euclid(l) as u64)
}

/// The homomorphism `ε ↦ c₁/c₀` from units to `F_ℓ`; its kernel (read on
/// exponent vectors mod ℓ) is exactly the set of `ε ≡ 1 mod λ²` mod ℓ-th powers.
fn log_derivative(coeffs: &[i64], ell: u64) -> Result<u64> {
    let (c0, c1) = mod_lambda_sq(coeffs, ell);
    let inv = inv_mod(c0, ell)
        .ok_or_else(|| CyclotomicError::Internal("generator is not a unit mod λ".into()))?;
    Ok(c1 * inv % ell)
}

/// Residue fields over `p` and the embeddings `ζ ↦ r^{a_j}`, one per prime.
struct ResidueData {
    field: GaloisField,
    /// `ζ`'s image at each prime over `p`.
    zetas: Vec<Fq>,
    /// Primitive ℓ-th root of unity used to read off classes mod ℓ-th powers.
    rho: Fq,
    ell: u64,
}

impl ResidueData {
    fn new(ell: u64, p: u64) -> Result<Self> {
        let m = conductor(ell);
        let f = multiplicative_order(p % m, m).unwrap_or(1);
        let field = GaloisField::new(p, f as u32);
        let r = field.primitive_root_of_unity(m).ok_or_else(|| {
            CyclotomicError::Internal(format!("no primitive {m}-th root of unity in F_{p}^{f}"))
        })?;
        // Coset representatives of ⟨p⟩ in (Z/m)^×.
        let mut seen = HashSet::new();
        let mut reps = Vec::new();
        for a in 1..m {
            if num_integer::gcd(a, m) != 1 || seen.contains(&a) {
                continue;
            }
            reps.push(a);
            let mut x = a;
            loop {
                seen.insert(x);
                x = x * p % m;
                if x == a {
                    break;
                }
            }
        }
        let zetas = reps.iter().map(|&a| field.pow(&r, a as u128)).collect();
        let rho = field.pow(&r, (m / ell) as u128);
        Ok(Self {
            field,
            zetas,
            rho,
            ell,
        })
    }

    fn evaluate(&self, coeffs: &[i64], zeta: &Fq) -> Fq {
        let k = &self.field;
        let mut acc = k.zero();
        let mut power = k.one();
        for &a in coeffs {
            acc = k.add(&acc, &k.mul(&k.from_int(a), &power));
            power = k.mul(&power, zeta);
        }
        acc
    }

    /// Class of a nonzero residue in `F_q^×/(F_q^×)^ℓ ≅ Z/ℓ`.
    fn class(&self, x: &Fq) -> Result<u64> {
        let k = &self.field;
        let y = k.pow(x, (k.order() - 1) / self.ell as u128);
        let mut z = k.one();
        for j in 0..self.ell {
            if z == y {
                return Ok(j);
            }
            z = k.mul(&z, &self.rho);
        }
        Err(CyclotomicError::Internal(
            "unit vanishes at a prime over p".into(),
        ))
    }

    fn image(&self, coeffs: &[i64]) -> Result<Vec<u64>> {
        self.zetas
            .iter()
            .map(|z| self.class(&self.evaluate(coeffs, z)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaSReport {
    pub ell: u64,
    pub p: u64,
    pub splitting: SplittingData,
    pub generators: Vec<String>,
    /// `c₁/c₀` of each generator modulo `λ²`.
    pub log_derivatives: Vec<u64>,
    pub gamma_rank: usize,
    pub unit_image_rank: usize,
    pub bound: usize,
    /// Rank found by scanning exponent vectors in `[−2ℓ, 2ℓ]^k`, when the box is small.
    pub box_scan_rank: Option<usize>,
    /// Rank unchanged after adjoining all pairwise products of generators.
    pub stabilized: bool,
}

fn f_ell_rank(ell: u64, dim: usize, vectors: Vec<Vec<u64>>) -> usize {
    let ctx = PadicContext::new(ell, 1).expect("ℓ is prime");
    Lattice::span(ctx, dim, vectors).rank()
}

/// Rank of `γ(ker c)` where `c` is the log-derivative functional on exponent
/// vectors and `γ` the residue-class map.
fn kernel_image_rank(ell: u64, dim: usize, c: &[u64], images: &[Vec<u64>]) -> usize {
    let combine = |coeffs: &[(usize, u64)]| -> Vec<u64> {
        (0..dim)
            .map(|v| {
                coeffs
                    .iter()
                    .fold(0, |acc, &(j, w)| (acc + w * images[j][v]) % ell)
            })
            .collect()
    };
    let kernel: Vec<Vec<u64>> = match c.iter().position(|&x| x != 0) {
        None => (0..c.len()).map(|j| combine(&[(j, 1)])).collect(),
        Some(j0) => {
            let inv = inv_mod(c[j0], ell).unwrap();
            (0..c.len())
                .filter(|&j| j != j0)
                .map(|j| combine(&[(j, 1), (j0, (ell - c[j] * inv % ell) % ell)]))
                .collect()
        }
    };
    f_ell_rank(ell, dim, kernel)
}

/// Rank of the image in `Γ_S` of the units `ε ≡ 1 mod λ²` of `Z[μ_{2ℓ}]`,
/// and the resulting bound `rank Γ_S − rank 𝒰`.
pub fn unit_image_rank(ell: u64, p: u64) -> Result<GammaSReport> {
    let splitting = splitting(ell, p)?;
    let residues = ResidueData::new(ell, p)?;
    let dim = residues.zetas.len();
    if dim != splitting.g2 as usize {
        return Err(CyclotomicError::Internal("prime count mismatch".into()));
    }
    let gens = unit_generators(ell);
    let c: Vec<u64> = gens
        .iter()
        .map(|g| log_derivative(&g.coeffs, ell))
        .collect::<Result<_>>()?;
    let images: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| residues.image(&g.coeffs))
        .collect::<Result<_>>()?;
    let unit_image_rank = kernel_image_rank(ell, dim, &c, &images);

    // Adjoin every product g_i·g_j, evaluated directly rather than through
    // linearity, and recompute.
    let mut ext_polys: Vec<Vec<i64>> = gens.iter().map(|g| g.coeffs.clone()).collect();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            ext_polys.push(poly_mul(&gens[i].coeffs, &gens[j].coeffs));
        }
    }
    let ext_c: Vec<u64> = ext_polys
        .iter()
        .map(|g| log_derivative(g, ell))
        .collect::<Result<_>>()?;
    let ext_images: Vec<Vec<u64>> = ext_polys
        .iter()
        .map(|g| residues.image(g))
        .collect::<Result<_>>()?;
    let stabilized = kernel_image_rank(ell, dim, &ext_c, &ext_images) == unit_image_rank;

    let box_scan_rank = box_scan(ell, &gens, &residues)?;
    let gamma_rank = splitting.g2 as usize;
    Ok(GammaSReport {
        ell,
        p,
        generators: gens.iter().map(|g| g.name.clone()).collect(),
        log_derivatives: c,
        gamma_rank,
        unit_image_rank,
        bound: gamma_rank - unit_image_rank,
        box_scan_rank,
        stabilized,
        splitting,
    })
}

type Dual = (u64, u64);

fn dual_mul(a: Dual, b: Dual, ell: u64) -> Dual {
    (a.0 * b.0 % ell, (a.0 * b.1 + a.1 * b.0) % ell)
}

/// Independent route: multiply out every `∏ g_j^{e_j}` with `|e_j| ≤ 2ℓ`,
/// keep those `≡ 1 mod λ²`, and span their residue classes.
fn box_scan(ell: u64, gens: &[UnitGenerator], residues: &ResidueData) -> Result<Option<usize>> {
    let radius = 2 * ell as i64;
    let side = 2 * radius as u64 + 1;
    let k = gens.len() as u32;
    let total = match side.checked_pow(k) {
        Some(t) if t <= BOX_LIMIT => t,
        _ => return Ok(None),
    };
    let field = &residues.field;
    let dim = residues.zetas.len();
    // powers[j][e + radius] for the dual-number image and each residue image
    let mut dual_pows: Vec<Vec<Dual>> = Vec::new();
    let mut res_pows: Vec<Vec<Vec<Fq>>> = Vec::new();
    for g in gens {
        let base = mod_lambda_sq(&g.coeffs, ell);
        let inv0 = inv_mod(base.0, ell).unwrap();
        let inv = (inv0, (ell - base.1 * inv0 % ell * inv0 % ell) % ell);
        let mut row = Vec::new();
        for e in -radius..=radius {
            let (b, n) = if e < 0 { (inv, -e) } else { (base, e) };
            let mut acc = (1, 0);
            for _ in 0..n {
                acc = dual_mul(acc, b, ell);
            }
            row.push(acc);
        }
        dual_pows.push(row);
        let mut per_prime = Vec::new();
        for z in &residues.zetas {
            let x = residues.evaluate(&g.coeffs, z);
            let xinv = field
                .inv(&x)
                .ok_or_else(|| CyclotomicError::Internal("unit vanishes mod p".into()))?;
            per_prime.push(
                (-radius..=radius)
                    .map(|e| {
                        if e < 0 {
                            field.pow(&xinv, (-e) as u128)
                        } else {
                            field.pow(&x, e as u128)
                        }
                    })
                    .collect(),
            );
        }
        res_pows.push(per_prime);
    }
    let classes: HashSet<Vec<u64>> = (0..total)
        .into_par_iter()
        .map(|mut idx| -> Result<Option<Vec<u64>>> {
            let mut digits = Vec::with_capacity(k as usize);
            for _ in 0..k {
                digits.push((idx % side) as usize);
                idx /= side;
            }
            let mut d = (1, 0);
            for (j, &e) in digits.iter().enumerate() {
                d = dual_mul(d, dual_pows[j][e], ell);
            }
            if d != (1, 0) {
                return Ok(None);
            }
            (0..dim)
                .map(|v| {
                    let mut x = field.one();
                    for (j, &e) in digits.iter().enumerate() {
                        x = field.mul(&x, &res_pows[j][v][e]);
                    }
                    residues.class(&x)
                })
                .collect::<Result<Vec<u64>>>()
                .map(Some)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Some(f_ell_rank(ell, dim, classes.into_iter().collect())))
}
