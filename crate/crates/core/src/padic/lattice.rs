use super::matrix::{howell_columns, same_ctx};
use super::{PadicContext, PadicError, PadicMatrix};

/// A submodule of `(Z/ℓ^N)^r`, stored by its canonical column form.
///
/// Two lattices are equal exactly when their canonical bases agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ctx: PadicContext,
    ambient_rank: usize,
    basis: PadicMatrix,
}

/// Result of [`Lattice::sum`].
#[derive(Debug, Clone)]
pub struct LatticeSum {
    pub lattice: Lattice,
    pub is_direct: bool,
    pub is_pure: bool,
    /// Whether the projections to `F_ℓ^r` meet trivially.
    pub projections_disjoint: bool,
}

impl LatticeSum {
    /// For pure summands with disjoint projections the sum must be pure and direct.
    pub fn purity_criterion_holds(&self, x: &Lattice, y: &Lattice) -> bool {
        !(self.projections_disjoint && x.is_pure() && y.is_pure())
            || (self.is_direct && self.is_pure)
    }
}

/// Bilinear form `e(x, y) = xᵀ·G·y` with values in `Z/ℓ^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    gram: PadicMatrix,
}

impl Pairing {
    pub fn new(gram: PadicMatrix) -> Self {
        Self { gram }
    }

    pub fn standard(ctx: PadicContext, r: usize) -> Self {
        Self::new(PadicMatrix::identity(ctx, r))
    }

    pub fn gram(&self) -> &PadicMatrix {
        &self.gram
    }

    pub fn is_perfect(&self) -> bool {
        self.gram.rows() == self.gram.cols() && self.gram.ctx().is_unit(self.gram.determinant())
    }

    pub fn evaluate(&self, x: &[u64], y: &[u64]) -> u64 {
        let gy = self.gram.apply(y);
        let ctx = self.gram.ctx();
        x.iter()
            .zip(&gy)
            .fold(0, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
    }
}

impl Lattice {
    pub fn zero(ctx: PadicContext, ambient_rank: usize) -> Self {
        Self {
            ctx,
            ambient_rank,
            basis: PadicMatrix::zeros(ctx, ambient_rank, 0),
        }
    }

    pub fn full(ctx: PadicContext, ambient_rank: usize) -> Self {
        Self {
            ctx,
            ambient_rank,
            basis: PadicMatrix::identity(ctx, ambient_rank),
        }
    }

    /// The submodule generated by arbitrary residue vectors.
    pub fn span(ctx: PadicContext, ambient_rank: usize, gens: Vec<Vec<u64>>) -> Self {
        let gens = gens
            .into_iter()
            .map(|g| {
                assert_eq!(g.len(), ambient_rank, "generator length");
                g.into_iter().map(|x| x % ctx.modulus()).collect()
            })
            .collect();
        let cols = howell_columns(ctx, ambient_rank, gens);
        Self {
            ctx,
            ambient_rank,
            basis: PadicMatrix::from_columns(ctx, ambient_rank, &cols),
        }
    }

    /// Span of signed integer vectors.
    pub fn span_i64(ctx: PadicContext, ambient_rank: usize, gens: &[Vec<i64>]) -> Self {
        Self::span(
            ctx,
            ambient_rank,
            gens.iter()
                .map(|g| g.iter().map(|&x| ctx.reduce(x)).collect())
                .collect(),
        )
    }

    /// Column span of `m`.
    pub fn column_span(m: &PadicMatrix) -> Self {
        Self::span(m.ctx(), m.rows(), m.columns())
    }

    /// Lattice with a declared basis; fails when a basis vector becomes
    /// dependent at the working precision.
    pub fn from_basis(m: &PadicMatrix) -> Result<Self, PadicError> {
        let smith = m.smith();
        if let Some(column) = smith
            .divisors
            .iter()
            .position(|&e| e >= m.ctx().precision())
        {
            return Err(PadicError::PrecisionLoss {
                column,
                precision: m.ctx().precision(),
            });
        }
        if m.cols() > m.rows() {
            return Err(PadicError::PrecisionLoss {
                column: m.rows(),
                precision: m.ctx().precision(),
            });
        }
        Ok(Self::column_span(m))
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &PadicMatrix {
        &self.basis
    }

    /// Number of canonical basis columns.
    pub fn declared_rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.basis.columns()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.cols() == 0
    }

    /// Elementary divisors of the module: `X ≅ ⊕ Z/ℓ^{N - e_i}`.
    pub fn elementary_divisors(&self) -> Vec<u32> {
        let n = self.ctx.precision();
        self.basis
            .smith()
            .divisors
            .into_iter()
            .filter(|&e| e < n)
            .collect()
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// `log_ℓ |X|`.
    pub fn log_order(&self) -> u32 {
        let n = self.ctx.precision();
        self.elementary_divisors().iter().map(|&e| n - e).sum()
    }

    /// A direct summand of the ambient module: every elementary divisor is 0.
    pub fn is_pure(&self) -> bool {
        self.elementary_divisors().iter().all(|&e| e == 0)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient_rank);
        let ctx = self.ctx;
        let mut w: Vec<u64> = v.iter().map(|&x| x % ctx.modulus()).collect();
        for col in self.basis.columns() {
            let Some(prow) = col.iter().position(|&x| x != 0) else {
                continue;
            };
            if w[..prow].iter().any(|&x| x != 0) {
                return false;
            }
            let k = ctx.valuation(col[prow]);
            if w[prow] == 0 {
                continue;
            }
            if ctx.valuation(w[prow]) < k {
                return false;
            }
            let c = w[prow] / ctx.ell().pow(k);
            for (x, &b) in w.iter_mut().zip(&col) {
                *x = ctx.sub(*x, ctx.mul(c, b));
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.basis.columns().iter().all(|c| other.contains(c))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PadicError> {
        same_ctx(self.ctx, other.ctx)?;
        if self.ambient_rank != other.ambient_rank {
            return Err(PadicError::DimensionMismatch {
                expected: self.ambient_rank,
                found: other.ambient_rank,
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ctx, self.ambient_rank));
        }
        let ctx = self.ctx;
        let a = self.basis.cols();
        let b = other.basis.cols();
        // Solve X·u = Y·w through the kernel of [X | -Y].
        let mut joint = PadicMatrix::zeros(ctx, self.ambient_rank, a + b);
        for i in 0..self.ambient_rank {
            for j in 0..a {
                joint.set(i, j, self.basis.get(i, j));
            }
            for j in 0..b {
                joint.set(i, a + j, ctx.neg(other.basis.get(i, j)));
            }
        }
        let gens = joint
            .kernel()
            .into_iter()
            .map(|z| self.basis.apply(&z[..a]))
            .collect();
        Ok(Self::span(ctx, self.ambient_rank, gens))
    }

    /// A basis of a pure lattice: `rank` columns spanning it freely.
    pub fn free_basis(&self) -> Result<PadicMatrix, PadicError> {
        if !self.is_pure() {
            return Err(PadicError::NotPure);
        }
        let smith = self.basis.smith();
        let bv = self.basis.mul(&smith.right);
        let k = self.rank();
        let cols: Vec<Vec<u64>> = (0..k).map(|j| bv.column(j)).collect();
        Ok(PadicMatrix::from_columns(
            self.ctx,
            self.ambient_rank,
            &cols,
        ))
    }

    /// Reduction mod ℓ^N of the ℓ-adic intersection of pure lattices.
    ///
    /// Unlike [`Lattice::intersect`], which returns the exact intersection of
    /// the finite modules (and may pick up non-pure `ℓ^{N−c}`-torsion), this
    /// solves `X·u = Y·w` over `Z_ℓ`: only Smith divisors of `[X | −Y]` that
    /// vanish at precision N contribute. A nonzero divisor of valuation ≥ N is
    /// indistinguishable from zero here, which is the usual precision caveat.
    pub fn intersect_adic(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_compatible(other)?;
        let x = self.free_basis()?;
        let y = other.free_basis()?;
        let ctx = self.ctx;
        let (a, b) = (x.cols(), y.cols());
        if a == 0 || b == 0 {
            return Ok(Self::zero(ctx, self.ambient_rank));
        }
        let mut joint = PadicMatrix::zeros(ctx, self.ambient_rank, a + b);
        for i in 0..self.ambient_rank {
            for j in 0..a {
                joint.set(i, j, x.get(i, j));
            }
            for j in 0..b {
                joint.set(i, a + j, ctx.neg(y.get(i, j)));
            }
        }
        let smith = joint.smith();
        let gens = (0..a + b)
            .filter(|&j| smith.divisors.get(j).is_none_or(|&e| e >= ctx.precision()))
            .map(|j| x.apply(&smith.right.column(j)[..a]))
            .collect();
        Ok(Self::span(ctx, self.ambient_rank, gens))
    }

    pub fn sum(&self, other: &Self) -> Result<LatticeSum, PadicError> {
        self.check_compatible(other)?;
        let mut gens = self.generators();
        gens.extend(other.generators());
        let lattice = Self::span(self.ctx, self.ambient_rank, gens);
        let is_direct = self.intersect(other)?.is_zero();
        let projections_disjoint = self
            .project_mod_ell()
            .intersect(&other.project_mod_ell())?
            .is_zero();
        let is_pure = lattice.is_pure();
        Ok(LatticeSum {
            lattice,
            is_direct,
            is_pure,
            projections_disjoint,
        })
    }

    /// Image in `F_ℓ^r`, returned as a lattice at precision 1.
    pub fn project_mod_ell(&self) -> Self {
        self.with_precision(1)
            .expect("precision 1 is always representable")
    }

    /// Image in `(Z/ℓ^n)^r` for `n ≤ N`, or the same generators read at a
    /// higher precision for `n > N`.
    pub fn with_precision(&self, n: u32) -> Result<Self, PadicError> {
        let ctx = self.ctx.with_precision(n)?;
        Ok(Self::span(
            ctx,
            self.ambient_rank,
            self.basis
                .columns()
                .into_iter()
                .map(|c| c.into_iter().map(|x| x % ctx.modulus()).collect())
                .collect(),
        ))
    }

    /// `{y : e(x, y) = 0 for all x ∈ X}`.
    pub fn orthogonal(&self, pairing: &Pairing) -> Result<Self, PadicError> {
        let gram = pairing.gram();
        same_ctx(self.ctx, gram.ctx())?;
        if gram.rows() != self.ambient_rank {
            return Err(PadicError::DimensionMismatch {
                expected: self.ambient_rank,
                found: gram.rows(),
            });
        }
        if !pairing.is_perfect() {
            return Err(PadicError::DegeneratePairing);
        }
        if self.is_zero() {
            return Ok(Self::full(self.ctx, gram.cols()));
        }
        let conditions = self.basis.transpose().mul(gram);
        Ok(Self::span(self.ctx, gram.cols(), conditions.kernel()))
    }

    /// Image under a linear map given by a square matrix.
    pub fn image(&self, map: &PadicMatrix) -> Self {
        assert_eq!(map.cols(), self.ambient_rank);
        Self::span(
            self.ctx,
            map.rows(),
            self.generators().iter().map(|g| map.apply(g)).collect(),
        )
    }

    pub fn is_stable_under(&self, map: &PadicMatrix) -> bool {
        self.image(map).is_subset_of(self)
    }

    /// `{v : ℓ·v ∈ X}` read one precision lower: the lattice `ℓ^{-1}X` when
    /// `X ⊆ ℓ·T`.
    pub fn divide_by_ell(&self) -> Result<Self, PadicError> {
        let n = self.ctx.precision();
        let lower = self.ctx.with_precision(n.saturating_sub(1).max(1))?;
        let ell = self.ctx.ell();
        Ok(Self::span(
            lower,
            self.ambient_rank,
            self.generators()
                .into_iter()
                .map(|g| g.into_iter().map(|x| (x / ell) % lower.modulus()).collect())
                .collect(),
        ))
    }

    /// Whether every element lies in `ℓ·(Z/ℓ^N)^r`.
    pub fn is_divisible_by_ell(&self) -> bool {
        let ell = self.ctx.ell();
        self.basis
            .columns()
            .iter()
            .all(|c| c.iter().all(|&x| x % ell == 0))
    }
}
