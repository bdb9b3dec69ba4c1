use super::{PadicContext, PadicError};
use serde::Serialize;

/// Dense matrix over `Z/ℓ^N`, row-major, entries in `[0, ℓ^N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicMatrix {
    ctx: PadicContext,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PadicMatrix {
    pub fn zeros(ctx: PadicContext, rows: usize, cols: usize) -> Self {
        Self {
            ctx,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ctx: PadicContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows(ctx: PadicContext, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(ctx, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, ctx.reduce(x));
            }
        }
        m
    }

    /// Builds an `rows × k` matrix whose columns are the given residue vectors.
    pub fn from_columns(ctx: PadicContext, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(ctx, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x % ctx.modulus());
            }
        }
        m
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_major(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let m = self.ctx.modulus() as u128;
        let mut out = Self::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u128 * other.get(k, j) as u128) % m;
                }
                out.set(i, j, acc as u64);
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let m = self.ctx.modulus() as u128;
        (0..self.rows)
            .map(|i| {
                let mut acc: u128 = 0;
                for (k, &x) in v.iter().enumerate() {
                    acc = (acc + self.get(i, k) as u128 * x as u128) % m;
                }
                acc as u64
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.ctx, other.ctx, "context mismatch");
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Self {
            ctx: self.ctx,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let ctx = self.ctx;
        self.zip_with(other, |a, b| ctx.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let ctx = self.ctx;
        self.zip_with(other, |a, b| ctx.sub(a, b))
    }

    pub fn scale(&self, c: u64) -> Self {
        let ctx = self.ctx;
        let c = c % ctx.modulus();
        Self {
            data: self.data.iter().map(|&a| ctx.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        let ctx = self.ctx;
        Self {
            data: self.data.iter().map(|&a| ctx.neg(a)).collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.ctx, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Block-diagonal matrix with `copies` copies of `self`.
    pub fn block_diagonal(&self, copies: usize) -> Self {
        let mut out = Self::zeros(self.ctx, self.rows * copies, self.cols * copies);
        for b in 0..copies {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out.set(b * self.rows + i, b * self.cols + j, self.get(i, j));
                }
            }
        }
        out
    }

    /// Reinterprets the entries at another precision of the same prime
    /// (reducing when the precision drops, keeping representatives otherwise).
    pub fn with_context(&self, ctx: PadicContext) -> Self {
        assert_eq!(ctx.ell(), self.ctx.ell(), "prime mismatch");
        Self {
            ctx,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a % ctx.modulus()).collect(),
        }
    }

    /// Determinant by fraction-free elimination over the local ring.
    pub fn determinant(&self) -> u64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let smith = self.smith();
        let ctx = self.ctx;
        let mut det = 1u64;
        for &e in &smith.divisors {
            det = ctx.mul(det, ctx.ell_pow(e));
        }
        // det(U)·det(M)·det(V) = det(D); recover the units of U and V.
        let du = unit_determinant(&smith.left);
        let dv = unit_determinant(&smith.right);
        let inv = ctx.inverse(ctx.mul(du, dv)).expect("unimodular transforms");
        ctx.mul(det, inv)
    }

    pub fn inverse(&self) -> Option<Self> {
        let smith = self.smith();
        if smith.divisors.iter().any(|&e| e > 0) || smith.divisors.len() != self.rows {
            return None;
        }
        // D = U M V with D = I, hence M^{-1} = V U.
        Some(smith.right.mul(&smith.left))
    }

    /// Smith normal form `U · M · V = diag(ℓ^{e_1}, …)` with `e_1 ≤ e_2 ≤ …`.
    pub fn smith(&self) -> SmithForm {
        let ctx = self.ctx;
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = Self::identity(ctx, m);
        let mut v = Self::identity(ctx, n);
        let mut divisors = Vec::with_capacity(m.min(n));
        for t in 0..m.min(n) {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = a.get(i, j);
                    if x != 0 {
                        let val = ctx.valuation(x);
                        if best.is_none_or(|(b, _, _)| val < b) {
                            best = Some((val, i, j));
                        }
                    }
                }
            }
            let Some((k, pi, pj)) = best else {
                divisors.extend(std::iter::repeat_n(ctx.precision(), m.min(n) - t));
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let (_, inv) = ctx.split_unit(a.get(t, t));
            a.scale_col(t, inv);
            v.scale_col(t, inv);
            for i in t + 1..m {
                let x = a.get(i, t);
                if x != 0 {
                    let c = ctx.div_ell_pow(x, k);
                    a.row_axpy(i, t, c);
                    u.row_axpy(i, t, c);
                }
            }
            for j in t + 1..n {
                let x = a.get(t, j);
                if x != 0 {
                    let c = ctx.div_ell_pow(x, k);
                    a.col_axpy(j, t, c);
                    v.col_axpy(j, t, c);
                }
            }
            divisors.push(k);
        }
        SmithForm {
            divisors,
            left: u,
            right: v,
        }
    }

    /// Generators of the right kernel `{z : M z = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let ctx = self.ctx;
        let smith = self.smith();
        let mut gens = Vec::new();
        for i in 0..self.cols {
            let e = smith.divisors.get(i).copied().unwrap_or(ctx.precision());
            let scale = ctx.ell_pow(ctx.precision() - e);
            if scale == 0 {
                continue;
            }
            let col: Vec<u64> = smith
                .right
                .column(i)
                .into_iter()
                .map(|x| ctx.mul(x, scale))
                .collect();
            if col.iter().any(|&x| x != 0) {
                gens.push(col);
            }
        }
        gens
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_col(&mut self, j: usize, c: u64) {
        for i in 0..self.rows {
            let x = self.get(i, j);
            self.set(i, j, self.ctx.mul(x, c));
        }
    }

    /// `row_i -= c · row_t`.
    fn row_axpy(&mut self, i: usize, t: usize, c: u64) {
        for j in 0..self.cols {
            let x = self
                .ctx
                .sub(self.get(i, j), self.ctx.mul(c, self.get(t, j)));
            self.set(i, j, x);
        }
    }

    /// `col_j -= c · col_t`.
    fn col_axpy(&mut self, j: usize, t: usize, c: u64) {
        for i in 0..self.rows {
            let x = self
                .ctx
                .sub(self.get(i, j), self.ctx.mul(c, self.get(i, t)));
            self.set(i, j, x);
        }
    }
}

fn unit_determinant(m: &PadicMatrix) -> u64 {
    // Transforms are products of swaps, unit scalings and transvections, so
    // plain Gaussian elimination with unit pivots always succeeds.
    let ctx = m.ctx();
    let n = m.rows();
    let mut a = m.clone();
    let mut det = 1u64;
    for t in 0..n {
        let p = (t..n)
            .find(|&i| ctx.is_unit(a.get(i, t)))
            .expect("unimodular matrix has a unit pivot");
        if p != t {
            a.swap_rows(t, p);
            det = ctx.neg(det);
        }
        let piv = a.get(t, t);
        det = ctx.mul(det, piv);
        let inv = ctx.inverse(piv).expect("unit");
        for i in t + 1..n {
            let c = ctx.mul(a.get(i, t), inv);
            if c != 0 {
                a.row_axpy(i, t, c);
            }
        }
    }
    det
}

/// Smith decomposition; `divisors[i] = N` marks a zero diagonal entry.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub divisors: Vec<u32>,
    pub left: PadicMatrix,
    pub right: PadicMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnReduction {
    #[serde(skip)]
    pub reduced: PadicMatrix,
    pub elementary_divisors: Vec<u32>,
}

/// Canonical column form of `m` together with its elementary divisors.
///
/// The reduced matrix is the column Howell form: columns sorted by pivot row,
/// each pivot normalized to `ℓ^k`, entries to the right of a pivot in its row
/// reduced below the pivot, and closed under `ℓ^{N-k}`-multiples so that the
/// form depends only on the column module. Elementary divisors are the
/// valuations of the Smith diagonal, with `N` for a vanishing entry.
pub fn column_reduce(m: &PadicMatrix) -> ColumnReduction {
    let reduced = howell_columns(m.ctx(), m.rows(), m.columns());
    ColumnReduction {
        reduced: PadicMatrix::from_columns(m.ctx(), m.rows(), &reduced),
        elementary_divisors: m.smith().divisors,
    }
}

pub(crate) fn howell_columns(ctx: PadicContext, rows: usize, gens: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let nonzero = |v: &Vec<u64>| v.iter().any(|&x| x != 0);
    let mut pending: Vec<Vec<u64>> = gens.into_iter().filter(nonzero).collect();
    let mut basis: Vec<(usize, u32, Vec<u64>)> = Vec::new();
    for row in 0..rows {
        let pick = pending
            .iter()
            .enumerate()
            .filter(|(_, v)| v[row] != 0)
            .min_by_key(|(_, v)| ctx.valuation(v[row]))
            .map(|(i, _)| i);
        let Some(idx) = pick else { continue };
        let mut piv = pending.swap_remove(idx);
        let (k, inv) = ctx.split_unit(piv[row]);
        for x in piv.iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for q in pending.iter_mut() {
            if q[row] != 0 {
                let c = ctx.div_ell_pow(q[row], k);
                for (qi, &pi) in q.iter_mut().zip(&piv) {
                    *qi = ctx.sub(*qi, ctx.mul(c, pi));
                }
            }
        }
        if k > 0 {
            let f = ctx.ell_pow(ctx.precision() - k);
            pending.push(piv.iter().map(|&x| ctx.mul(x, f)).collect());
        }
        pending.retain(nonzero);
        basis.push((row, k, piv));
    }
    debug_assert!(pending.is_empty());
    for i in 0..basis.len() {
        let (prow, k, ref piv) = basis[i];
        let piv = piv.clone();
        let pk = ctx.ell.pow(k);
        for entry in basis.iter_mut().take(i) {
            let c = entry.2[prow] / pk;
            if c != 0 {
                for (x, &p) in entry.2.iter_mut().zip(&piv) {
                    *x = ctx.sub(*x, ctx.mul(c, p));
                }
            }
        }
    }
    basis.into_iter().map(|(_, _, v)| v).collect()
}

/// Checks that two contexts agree.
pub(crate) fn same_ctx(a: PadicContext, b: PadicContext) -> Result<(), PadicError> {
    if a == b {
        Ok(())
    } else {
        Err(PadicError::ContextMismatch(a, b))
    }
}
