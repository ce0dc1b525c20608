//! Randomized algebraic properties of the relation calculus.

use gwb_core::rel::FiniteRelation;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn relation(src: usize, tgt: usize) -> impl Strategy<Value = FiniteRelation> {
    proptest::collection::btree_set((0..tgt, 0..src), 0..=src * tgt)
        .prop_map(move |pairs| FiniteRelation::new(src, tgt, pairs).expect("in bounds"))
}

fn sizes() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1..=6usize, 1..=6usize, 1..=6usize, 1..=6usize)
}

proptest! {
    #[test]
    fn composition_is_associative(
        (r, s, t) in sizes().prop_flat_map(|(a, b, c, d)| {
            (relation(b, a), relation(c, b), relation(d, c))
        })
    ) {
        let lhs = r.compose(&s).unwrap().compose(&t).unwrap();
        let rhs = r.compose(&s.compose(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_is_two_sided_neutral(
        r in (1..=6usize, 1..=6usize).prop_flat_map(|(a, b)| relation(b, a))
    ) {
        let left = FiniteRelation::identity(r.target_size()).compose(&r).unwrap();
        let right = r.compose(&FiniteRelation::identity(r.source_size())).unwrap();
        prop_assert_eq!(&left, &r);
        prop_assert_eq!(&right, &r);
    }

    #[test]
    fn transpose_reverses_composition(
        (r, s) in sizes().prop_flat_map(|(a, b, c, _)| (relation(b, a), relation(c, b)))
    ) {
        let lhs = r.compose(&s).unwrap().transpose();
        let rhs = s.transpose().compose(&r.transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_distributes_over_composition(
        (r, s, u, v) in (sizes(), sizes()).prop_flat_map(|((a, b, c, _), (d, e, f, _))| {
            (relation(b, a), relation(c, b), relation(e, d), relation(f, e))
        })
    ) {
        let lhs = r.compose(&s).unwrap().product(&u.compose(&v).unwrap());
        let rhs = r.product(&u).compose(&s.product(&v)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn image_respects_composition(
        (r, s, subset) in sizes().prop_flat_map(|(a, b, c, _)| {
            (
                relation(b, a),
                relation(c, b),
                proptest::collection::btree_set(0..c, 0..=c),
            )
        })
    ) {
        let direct: BTreeSet<usize> = r.compose(&s).unwrap().image(&subset);
        let staged: BTreeSet<usize> = r.image(&s.image(&subset));
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn transpose_is_involutive(
        r in (1..=6usize, 1..=6usize).prop_flat_map(|(a, b)| relation(b, a))
    ) {
        prop_assert_eq!(r.transpose().transpose(), r);
    }
}
