//! Lattice operations against exhaustive enumeration of `(ℤ/ℓ^N)^r`.

#[path = "support/lattice_cases.rs"]
mod lattice_cases;

use lattice_cases::{run_cases, Brute, SEED};
use proptest::prelude::*;
use semistable_core::padic::{Lattice, PadicContext, PadicMatrix, Pairing};

#[test]
fn lattice_properties_against_enumeration() {
    let t = run_cases(SEED, 1200);
    assert!(t.cases >= 1000);
    assert!(
        t.failures.is_empty(),
        "{} failures, first: {:?}",
        t.failures.len(),
        &t.failures[..t.failures.len().min(5)]
    );
}

#[test]
fn worked_examples() {
    let c = |ell, n| PadicContext::new(ell, n).unwrap();
    // [[2,2],[0,4]] over ℤ/2⁴ has divisors [1,2]: brute-force over the 16⁴
    // ambient vectors gives a module of order 2^{(4−1)+(4−2)} = 32
    let m = Lattice::span_i64(c(2, 4), 2, &[vec![2, 0], vec![2, 4]]);
    let b = Brute::new(2, 4, 2);
    assert_eq!(Brute::count(&b.span(&[vec![2, 0], vec![2, 4]])), 32);
    assert_eq!(m.elementary_divisors(), vec![1, 2]);

    // span{(1,2)} over ℤ/3⁴ is pure: the quotient has no 3-torsion
    let b3 = Brute::new(3, 4, 2);
    let x = b3.span(&[vec![1, 2]]);
    assert!(b3.is_pure(&x, 4));
    assert!(Lattice::span_i64(c(3, 4), 2, &[vec![1, 2]]).is_pure());

    // span{(1,1)} ∩ span{(1,3)} over ℤ/2³ by scanning the 64 elements
    let b2 = Brute::new(2, 3, 2);
    let meet = Brute::and(&b2.span(&[vec![1, 1]]), &b2.span(&[vec![1, 3]]));
    let ctx = c(2, 3);
    let l = Lattice::span_i64(ctx, 2, &[vec![1, 1]])
        .intersect(&Lattice::span_i64(ctx, 2, &[vec![1, 3]]))
        .unwrap();
    assert!(b2.agrees(&l, &meet));
    assert_eq!(l, Lattice::span_i64(ctx, 2, &[vec![4, 4]]));

    // span{e₁}^⊥ under antidiag(1, −1) over ℤ/3³ is span{e₁}
    let ctx = c(3, 3);
    let gram = PadicMatrix::from_rows(ctx, &[vec![0, 1], vec![-1, 0]]);
    let e1 = Lattice::span_i64(ctx, 2, &[vec![1, 0]]);
    assert_eq!(e1.orthogonal(&Pairing::new(gram)).unwrap(), e1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_idempotent(
        ell in prop::sample::select(vec![2u64, 3, 5]),
        n in 1u32..=4,
        gens in prop::collection::vec(prop::collection::vec(-30i64..30, 3), 0..5),
    ) {
        let ctx = PadicContext::new(ell, n).unwrap();
        let l = Lattice::span_i64(ctx, 3, &gens);
        let again = Lattice::span(ctx, 3, l.generators());
        prop_assert_eq!(&again, &l);
        for g in &gens {
            let v: Vec<u64> = g.iter().map(|&x| ctx.reduce(x)).collect();
            prop_assert!(l.contains(&v));
        }
    }

    #[test]
    fn sum_and_intersection_orders(
        ell in prop::sample::select(vec![2u64, 3, 5]),
        n in 1u32..=3,
        xs in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 0..4),
        ys in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 0..4),
    ) {
        // |X + Y|·|X ∩ Y| = |X|·|Y|
        let ctx = PadicContext::new(ell, n).unwrap();
        let x = Lattice::span_i64(ctx, 3, &xs);
        let y = Lattice::span_i64(ctx, 3, &ys);
        let s = x.sum(&y).unwrap().lattice;
        let m = x.intersect(&y).unwrap();
        prop_assert_eq!(s.log_order() + m.log_order(), x.log_order() + y.log_order());
    }
}
