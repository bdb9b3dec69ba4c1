//! The toroidal Galois model: group-ring identities against hand-rolled
//! matrix arithmetic, stable submodules against brute-force enumeration,
//! and the component-group walk.

use std::collections::{BTreeSet, HashSet};

use semistable_core::galois::{
    build_rep, check_prop412, find_ell_maximal, group_ring_span, lemma43_transfer,
    stable_submodules, verify_prop66, GaloisRep,
};
use semistable_core::padic::{Lattice, PadicMatrix};

type M2 = [[i128; 2]; 2];

fn mul(a: M2, b: M2, m: i128) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]).rem_euclid(m);
        }
    }
    c
}

fn sub(a: M2, b: M2, m: i128) -> M2 {
    let mut c = a;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][j] - b[i][j]).rem_euclid(m);
        }
    }
    c
}

fn scalar(x: i128, m: i128) -> M2 {
    [[x.rem_euclid(m), 0], [0, x.rem_euclid(m)]]
}

/// ω found by search: `−1` for ℓ ∈ {2, 3}, the fourth root of unity
/// congruent to 2 mod 5 for ℓ = 5.
fn omega_by_search(ell: i128, m: i128) -> i128 {
    if ell != 5 {
        return m - 1;
    }
    (0..m)
        .find(|&x| x % 5 == 2 && (x * x % m) * (x * x % m) % m == 1)
        .unwrap()
}

/// The identities on one 2×2 block, computed without the library.
fn identities_by_hand(ell: i128, s: i128, n: u32) -> bool {
    let m = ell.pow(n);
    let w = omega_by_search(ell, m);
    let sigma = [[1, s.rem_euclid(m)], [0, 1]];
    let sigma_inv = [[1, (-s).rem_euclid(m)], [0, 1]];
    let tau = [[0, (-w).rem_euclid(m)], [1, (1 + w).rem_euclid(m)]];
    if ell != 5 {
        return sub(mul(sigma, tau, m), mul(tau, sigma_inv, m), m) == scalar(s, m);
    }
    let tau2 = mul(tau, tau, m);
    let first = sub(mul(sigma, tau2, m), mul(tau2, sigma_inv, m), m) == scalar((1 + w) * s, m);
    // τ⁻¹ = −ω⁻¹(τ − (1+ω)) by Cayley–Hamilton
    let w_inv = (0..m).find(|&x| x * w % m == 1).unwrap();
    let shifted = sub(tau, scalar(1 + w, m), m);
    let tau_inv = shifted.map(|r| r.map(|x| (-x * w_inv).rem_euclid(m)));
    assert_eq!(mul(tau, tau_inv, m), scalar(1, m));
    let conj = mul(mul(tau_inv, sigma, m), tau, m);
    let lhs = sub(mul(conj, sigma, m), mul(sigma, conj, m), m);
    let c = -s * s * w;
    let rhs = [
        [c.rem_euclid(m), (c * 2 * (1 + w)).rem_euclid(m)],
        [0, (-c).rem_euclid(m)],
    ];
    first && lhs == rhs
}

#[test]
fn identity_grid() {
    for ell in [2u64, 3, 5] {
        for s in [ell as i64, 2 * ell as i64] {
            for n in [4u32, 6] {
                assert!(
                    identities_by_hand(ell as i128, s as i128, n),
                    "({ell}, {s}, {n})"
                );
                for d in [1usize, 2] {
                    let rep = build_rep(ell, d, s, n).unwrap();
                    let r = verify_prop66(&rep);
                    assert!(r.all_pass, "({ell}, {s}, {n}, {d}): {r:?}");
                    assert_eq!(r.checks.len(), if ell == 5 { 2 } else { 1 });
                }
            }
        }
    }
}

#[test]
fn corrupted_tau_fails() {
    for ell in [2u64, 3, 5] {
        let mut rep = build_rep(ell, 1, ell as i64, 4).unwrap();
        rep.tau = PadicMatrix::identity(rep.ctx, 2);
        assert!(!verify_prop66(&rep).all_pass);
        assert!(!check_prop412(&rep).unwrap().holds);
    }
}

#[test]
fn unit_multiple_of_s_changes_nothing() {
    for ell in [2u64, 3, 5] {
        let unit = if ell == 2 { 3 } else { ell as i64 + 1 };
        let a = build_rep(ell, 1, ell as i64, 1).unwrap();
        let b = build_rep(ell, 1, unit * ell as i64, 1).unwrap();
        assert!(verify_prop66(&b.at_precision(5).unwrap()).all_pass);
        let (sa, sb) = (
            stable_submodules(&a, 1).unwrap(),
            stable_submodules(&b, 1).unwrap(),
        );
        assert_eq!(sa, sb, "ℓ = {ell}");
        for depth in 0..5 {
            let ga = group_ring_span(&a.at_precision(4).unwrap(), depth).unwrap();
            let gb = group_ring_span(&b.at_precision(4).unwrap(), depth).unwrap();
            assert_eq!(ga.lattice.log_order(), gb.lattice.log_order());
            assert_eq!(ga.contains_s_m2, gb.contains_s_m2);
        }
    }
}

#[test]
fn group_ring_span_is_monotone_and_stabilizes() {
    for ell in [2u64, 3, 5] {
        let rep = build_rep(ell, 1, ell as i64, 4).unwrap();
        let spans: Vec<Lattice> = (0..=7)
            .map(|k| group_ring_span(&rep, k).unwrap().lattice)
            .collect();
        for w in spans.windows(2) {
            assert!(w[0].is_subset_of(&w[1]));
        }
        for later in &spans[4..] {
            assert_eq!(later, &spans[4], "ℓ = {ell}");
        }
        assert!(group_ring_span(&rep, 4).unwrap().contains_s_m2);
    }
}

/// Orbit closure of a set of elements under `+`, σ, τ on `(ℤ/q)^dim`.
fn closure(seed: &BTreeSet<Vec<u64>>, rep: &GaloisRep, q: u64) -> BTreeSet<Vec<u64>> {
    let apply = |m: &PadicMatrix, v: &[u64]| m.apply(v);
    let mut set = seed.clone();
    set.insert(vec![0; rep.dim()]);
    loop {
        let mut next = set.clone();
        for v in &set {
            next.insert(apply(&rep.sigma, v));
            next.insert(apply(&rep.tau, v));
            for w in &set {
                next.insert(v.iter().zip(w).map(|(a, b)| (a + b) % q).collect());
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn elements(l: &Lattice, q: u64) -> BTreeSet<Vec<u64>> {
    let dim = l.ambient_rank();
    let total = q.pow(dim as u32);
    (0..total)
        .map(|mut i| {
            (0..dim)
                .map(|_| {
                    let c = i % q;
                    i /= q;
                    c
                })
                .collect::<Vec<u64>>()
        })
        .filter(|v| l.contains(v))
        .collect()
}

#[test]
fn stable_submodules_match_brute_force() {
    for (ell, n, d) in [
        (2u64, 1u32, 1usize),
        (3, 1, 1),
        (5, 1, 1),
        (2, 2, 1),
        (3, 2, 1),
        (2, 1, 2),
    ] {
        let rep = build_rep(ell, d, ell as i64, n).unwrap();
        let q = ell.pow(n);
        let dim = rep.dim();
        let all: Vec<Vec<u64>> = (0..q.pow(dim as u32))
            .map(|mut i| {
                (0..dim)
                    .map(|_| {
                        let c = i % q;
                        i /= q;
                        c
                    })
                    .collect()
            })
            .collect();
        let zero = closure(&BTreeSet::new(), &rep, q);
        let mut found: HashSet<BTreeSet<Vec<u64>>> = HashSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(s) = frontier.pop() {
            for v in &all {
                if s.contains(v) {
                    continue;
                }
                let mut seed = s.clone();
                seed.insert(v.clone());
                let c = closure(&seed, &rep, q);
                if found.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
        let lib: HashSet<BTreeSet<Vec<u64>>> = stable_submodules(&rep, n)
            .unwrap()
            .iter()
            .map(|l| elements(l, q))
            .collect();
        assert_eq!(
            lib.len(),
            stable_submodules(&rep, n).unwrap().len(),
            "duplicates"
        );
        assert_eq!(lib, found, "(ℓ, n, d) = ({ell}, {n}, {d})");
    }
}

#[test]
fn full_torsion_transfer_is_identity() {
    // A → A/A[ℓⁿ] ≅ A is multiplication by ℓⁿ
    for (ell, d) in [(2u64, 1usize), (2, 2), (3, 1), (5, 1)] {
        let rep = build_rep(ell, d, ell as i64, 3).unwrap();
        for n in 1..=2u32 {
            if ell.pow(n) > 9 {
                continue;
            }
            let full = stable_submodules(&rep, n).unwrap().pop().unwrap();
            assert_eq!(full.log_order(), n * rep.dim() as u32);
            for phi in [1u64, ell, ell * ell] {
                assert_eq!(lemma43_transfer(&rep, &full, phi, n), Ok(phi));
            }
        }
    }
}

#[test]
fn two_node_graph() {
    let rep = build_rep(2, 1, 2, 3).unwrap();
    let r = find_ell_maximal(&rep, 2, 1).unwrap();
    assert_eq!(r.nodes.len(), 2);
    assert_eq!(r.maximal_phi, 2);
    assert_eq!(r.maximal_count, 1);
    assert!(r.maximal_sigma_trivial && r.nonmaximal_sigma_nontrivial);
}

#[test]
fn product_maximality() {
    for (ell, phi) in [(2u64, 2u64), (3, 3)] {
        let one = find_ell_maximal(&build_rep(ell, 1, ell as i64, 3).unwrap(), phi, 1).unwrap();
        let two =
            find_ell_maximal(&build_rep(ell, 2, ell as i64, 3).unwrap(), phi * phi, 1).unwrap();
        assert!(one.transfer_consistent && two.transfer_consistent);
        assert_eq!(
            two.maximal_phi,
            one.maximal_phi * one.maximal_phi,
            "ℓ = {ell}"
        );
        assert!(two.maximal_sigma_trivial, "ℓ = {ell}");
    }
}
