//! Random lattice pairs checked against exhaustive enumeration of
//! `(ℤ/ℓ^N)^r`: spans, intersections, sums, purity and orthogonals.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semistable_core::padic::{Lattice, PadicContext, PadicMatrix, Pairing};

/// Largest ambient module scanned element by element.
pub const AMBIENT_CAP: u64 = 4_096;

/// A subset of the ambient module as a bitmap over encoded vectors.
pub struct Brute {
    ell: u64,
    q: u64,
    r: usize,
}

impl Brute {
    pub fn new(ell: u64, n: u32, r: usize) -> Self {
        Self {
            ell,
            q: ell.pow(n),
            r,
        }
    }
    pub fn size(&self) -> usize {
        self.q.pow(self.r as u32) as usize
    }
    pub fn encode(&self, v: &[u64]) -> usize {
        v.iter()
            .rev()
            .fold(0, |acc, &x| acc * self.q as usize + (x % self.q) as usize)
    }
    pub fn decode(&self, mut k: usize) -> Vec<u64> {
        (0..self.r)
            .map(|_| {
                let c = (k % self.q as usize) as u64;
                k /= self.q as usize;
                c
            })
            .collect()
    }
    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.q).collect()
    }
    pub fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|x| x * c % self.q).collect()
    }
    /// All ℤ-combinations of `gens`.
    pub fn span(&self, gens: &[Vec<u64>]) -> Vec<bool> {
        let mut set = vec![false; self.size()];
        set[0] = true;
        let mut members = vec![vec![0; self.r]];
        for g in gens {
            let mut i = 0;
            while i < members.len() {
                let w = self.add(&members[i], g);
                let k = self.encode(&w);
                if !set[k] {
                    set[k] = true;
                    members.push(w);
                }
                i += 1;
            }
        }
        set
    }
    pub fn elements(&self, set: &[bool]) -> Vec<Vec<u64>> {
        (0..set.len())
            .filter(|&k| set[k])
            .map(|k| self.decode(k))
            .collect()
    }
    pub fn and(a: &[bool], b: &[bool]) -> Vec<bool> {
        a.iter().zip(b).map(|(x, y)| *x && *y).collect()
    }
    pub fn count(a: &[bool]) -> usize {
        a.iter().filter(|&&x| x).count()
    }
    /// `X ∩ ℓ^k T = ℓ^k X` for every `k`.
    pub fn is_pure(&self, set: &[bool], n: u32) -> bool {
        let elems = self.elements(set);
        (1..n).all(|k| {
            let lk = self.ell.pow(k);
            let mut scaled = vec![false; self.size()];
            for e in &elems {
                scaled[self.encode(&self.scale(e, lk))] = true;
            }
            (0..self.size()).all(|i| {
                let in_lkt = self.decode(i).iter().all(|&c| c % lk == 0);
                (set[i] && in_lkt) == scaled[i]
            })
        })
    }
    /// Image in `F_ℓ^r`, as a bitmap over `F_ℓ^r`.
    pub fn project(&self, set: &[bool]) -> Vec<bool> {
        let low = Brute::new(self.ell, 1, self.r);
        let mut out = vec![false; low.size()];
        for e in self.elements(set) {
            out[low.encode(&e.iter().map(|x| x % self.ell).collect::<Vec<_>>())] = true;
        }
        out
    }
    /// `l` equals the enumerated set: its generators lie in it, the orders
    /// agree, and membership agrees on a sample of ambient vectors.
    pub fn agrees(&self, l: &Lattice, set: &[bool]) -> bool {
        let order = (self.ell as f64).powi(l.log_order() as i32).round() as usize;
        let step = (self.size() / 97).max(1);
        l.generators().iter().all(|g| set[self.encode(g)])
            && order == Brute::count(set)
            && (0..self.size())
                .step_by(step)
                .all(|k| l.contains(&self.decode(k)) == set[k])
    }
    /// `{y : e(x, y) = 0}` for `x` running over generators of a submodule.
    pub fn orthogonal(&self, gram: &[Vec<u64>], elems: &[Vec<u64>]) -> Vec<bool> {
        (0..self.size())
            .map(|k| {
                let y = self.decode(k);
                elems.iter().all(|x| {
                    let mut s = 0;
                    for i in 0..self.r {
                        for j in 0..self.r {
                            s = (s + x[i] * gram[i][j] % self.q * y[j]) % self.q;
                        }
                    }
                    s == 0
                })
            })
            .collect()
    }
}

pub fn random_unimodular(rng: &mut ChaCha8Rng, ell: u64, r: usize) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..r).map(|_| rng.gen_range(-6..=6)).collect())
            .collect();
        let ctx = PadicContext::new(ell, 1).unwrap();
        if PadicMatrix::from_rows(ctx, &m).determinant() != 0 {
            return m;
        }
    }
}

/// Columns `0..k` of a random matrix invertible mod ℓ: a pure submodule.
pub fn random_pure(rng: &mut ChaCha8Rng, ell: u64, r: usize) -> Vec<Vec<i64>> {
    let u = random_unimodular(rng, ell, r);
    let k = rng.gen_range(0..=r);
    (0..k).map(|j| (0..r).map(|i| u[i][j]).collect()).collect()
}

pub fn random_any(rng: &mut ChaCha8Rng, r: usize) -> Vec<Vec<i64>> {
    let k = rng.gen_range(0..=r + 1);
    (0..k)
        .map(|_| (0..r).map(|_| rng.gen_range(-9..=9)).collect())
        .collect()
}

pub fn params(rng: &mut ChaCha8Rng) -> (u64, usize, u32) {
    loop {
        let ell: u64 = [2, 3, 5][rng.gen_range(0..3)];
        let r = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=4);
        if ell.pow(n).pow(r as u32) <= AMBIENT_CAP {
            return (ell, r, n);
        }
    }
}

pub fn reduce(ctx: PadicContext, gens: &[Vec<i64>]) -> Vec<Vec<u64>> {
    gens.iter()
        .map(|g| g.iter().map(|&x| ctx.reduce(x)).collect())
        .collect()
}

#[derive(Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: &str, case: &str) {
        if !ok {
            self.failures.push(format!("{what}: {case}"));
        }
    }
}

/// Exact intersection at precision `N + 20`, read mod ℓ^N, must equal the
/// ℓ-adic intersection whenever no Smith divisor of `[X | −Y]` falls in the
/// ambiguous band `[N, N + 20)`.
pub fn adic_against_high_precision(
    xg: &[Vec<i64>],
    yg: &[Vec<i64>],
    r: usize,
    ctx: PadicContext,
    adic: &Lattice,
    t: &mut Tally,
    case: &str,
) {
    let n = ctx.precision();
    let hi = (n + 20).min(if ctx.ell() == 2 {
        60
    } else if ctx.ell() == 3 {
        38
    } else {
        26
    });
    let wide = PadicContext::new(ctx.ell(), hi).unwrap();
    let (xw, yw) = (
        Lattice::span_i64(wide, r, xg),
        Lattice::span_i64(wide, r, yg),
    );
    let (Ok(xb), Ok(yb)) = (xw.free_basis(), yw.free_basis()) else {
        return;
    };
    let mut rows = vec![vec![0i64; xb.cols() + yb.cols()]; r];
    for (i, row) in rows.iter_mut().enumerate() {
        let (left, right) = row.split_at_mut(xb.cols());
        for (j, x) in left.iter_mut().enumerate() {
            *x = wide.signed(xb.get(i, j));
        }
        for (j, x) in right.iter_mut().enumerate() {
            *x = -wide.signed(yb.get(i, j));
        }
    }
    let divisors = PadicMatrix::from_rows(wide, &rows).smith().divisors;
    if divisors.iter().any(|&e| e >= n && e < hi) {
        return;
    }
    let reference = xw.intersect(&yw).unwrap().with_precision(n).unwrap();
    t.check(&reference == adic, "adic vs high precision", case);
}

/// Consequences of purity that must also hold two precisions higher.
pub fn purity_consequences_at(
    ell: u64,
    r: usize,
    n: u32,
    xg: &[Vec<i64>],
    yg: &[Vec<i64>],
    t: &mut Tally,
    case: &str,
) {
    let ctx = PadicContext::new(ell, n).unwrap();
    let x = Lattice::span_i64(ctx, r, xg);
    let y = Lattice::span_i64(ctx, r, yg);
    t.check(x.is_pure() && y.is_pure(), "generated pure", case);
    let meet = x.intersect_adic(&y).unwrap();
    t.check(meet.is_pure(), "(ii) at precision", case);
    t.check(
        !x.project_mod_ell().is_zero() || x.is_zero(),
        "(iii) at precision",
        case,
    );
    let s = x.sum(&y).unwrap();
    t.check(s.purity_criterion_holds(&x, &y), "(iv) at precision", case);
    let pairing = Pairing::standard(ctx, r);
    let lhs = x
        .orthogonal(&pairing)
        .unwrap()
        .sum(&y.orthogonal(&pairing).unwrap())
        .unwrap();
    let rhs = meet.orthogonal(&pairing).unwrap();
    t.check(
        lhs.lattice.is_subset_of(&rhs),
        "⊥ inclusion at precision",
        case,
    );
    if lhs.lattice.is_pure() {
        t.check(lhs.lattice == rhs, "⊥ equality at precision", case);
    }
}

pub fn run_case(rng: &mut ChaCha8Rng, t: &mut Tally) {
    let (ell, r, n) = params(rng);
    let pure_pair = rng.gen_bool(0.7);
    let (xg, yg) = if pure_pair {
        (random_pure(rng, ell, r), random_pure(rng, ell, r))
    } else {
        (random_any(rng, r), random_any(rng, r))
    };
    let case = format!("ℓ={ell} r={r} N={n} X={xg:?} Y={yg:?}");
    let ctx = PadicContext::new(ell, n).unwrap();
    let b = Brute::new(ell, n, r);
    let x = Lattice::span_i64(ctx, r, &xg);
    let y = Lattice::span_i64(ctx, r, &yg);
    let bx = b.span(&reduce(ctx, &xg));
    let by = b.span(&reduce(ctx, &yg));

    // membership, intersection and sum agree with the enumeration
    t.check(b.agrees(&x, &bx), "span", &case);
    let meet = x.intersect(&y).unwrap();
    let bmeet = Brute::and(&bx, &by);
    t.check(b.agrees(&meet, &bmeet), "intersect", &case);
    let sum = x.sum(&y).unwrap();
    let bsum = b.span(&[reduce(ctx, &xg), reduce(ctx, &yg)].concat());
    t.check(b.agrees(&sum.lattice, &bsum), "sum", &case);
    t.check(
        sum.is_direct == (Brute::count(&bmeet) == 1),
        "directness",
        &case,
    );
    t.check(
        x.log_order() as f64 == (Brute::count(&bx) as f64).log(ell as f64).round(),
        "order",
        &case,
    );

    // purity agrees with the divisibility oracle
    let px = b.is_pure(&bx, n);
    let py = b.is_pure(&by, n);
    t.check(x.is_pure() == px, "is_pure X", &case);
    t.check(y.is_pure() == py, "is_pure Y", &case);

    // (i) holds for arbitrary submodules
    let (proj_x, proj_y) = (b.project(&bx), b.project(&by));
    let proj_meet = b.project(&bmeet);
    t.check(
        proj_meet
            .iter()
            .zip(Brute::and(&proj_x, &proj_y))
            .all(|(a, c)| !*a || c),
        "(i) intersection",
        &case,
    );
    let low = Brute::new(ell, 1, r);
    let proj_sum = {
        let gx: Vec<Vec<u64>> = low.elements(&proj_x);
        let gy: Vec<Vec<u64>> = low.elements(&proj_y);
        low.span(&[gx, gy].concat())
    };
    t.check(b.project(&bsum) == proj_sum, "(i) sum", &case);
    t.check(
        low.agrees(&x.project_mod_ell(), &proj_x),
        "project_mod_ell",
        &case,
    );

    if px && py {
        // (ii), for the ℓ-adic intersection: the finite one can carry
        // ℓ^{N−c}-torsion (span{(1,1)} ∩ span{(1,3)} mod 8 = span{(4,4)})
        let adic = x.intersect_adic(&y).unwrap();
        let badic = b.span(&adic.generators());
        t.check(b.is_pure(&badic, n), "(ii)", &case);
        t.check(
            badic.iter().zip(&bmeet).all(|(a, c)| !*a || *c),
            "adic ⊆ finite",
            &case,
        );
        adic_against_high_precision(&xg, &yg, r, ctx, &adic, t, &case);
        // (iii)
        if Brute::count(&proj_x) == 1 {
            t.check(Brute::count(&bx) == 1, "(iii)", &case);
        }
        // (iv)
        if Brute::count(&Brute::and(&proj_x, &proj_y)) == 1 {
            t.check(b.is_pure(&bsum, n), "(iv) pure", &case);
            t.check(Brute::count(&bmeet) == 1, "(iv) direct", &case);
        }
        // ⊥ clause, against a random perfect pairing
        let u = random_unimodular(rng, ell, r);
        let gram_rows: Vec<Vec<u64>> = reduce(ctx, &u);
        let pairing = Pairing::new(PadicMatrix::from_rows(ctx, &u));
        let xo = b.orthogonal(&gram_rows, &reduce(ctx, &xg));
        let yo = b.orthogonal(&gram_rows, &reduce(ctx, &yg));
        let mo = b.orthogonal(&gram_rows, &adic.generators());
        let lx = x.orthogonal(&pairing).unwrap();
        t.check(b.agrees(&lx, &xo), "orthogonal", &case);
        let osum = b.span(&[b.elements(&xo), b.elements(&yo)].concat());
        t.check(
            osum.iter().zip(&mo).all(|(a, c)| !*a || *c),
            "⊥ inclusion",
            &case,
        );
        if b.is_pure(&osum, n) {
            t.check(osum == mo, "⊥ equality", &case);
        }
        // precision artifacts: the same integral generators two levels up
        // (only meaningful when purity holds by construction)
        if pure_pair {
            purity_consequences_at(ell, r, n + 2, &xg, &yg, t, &case);
        }
    }
    t.cases += 1;
}

/// Seed of the pinned case stream.
pub const SEED: u64 = 0x05ee_d3a8;

/// Runs `count` seeded cases.
pub fn run_cases(seed: u64, count: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    for _ in 0..count {
        run_case(&mut rng, &mut t);
    }
    t
}
