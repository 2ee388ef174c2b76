mod common;

use common::{bounded_pair, bounded_set, cone, point, random_set};
use condset::prob::{Partition, RandomScalar, RandomVector};
use condset::randset::{
    cond_core, cone_lift_commute, core_hull_duality_cone, epigraph_duality_check, scale_and_sum_laws,
    RandomPolyhedron,
};
use condset::rational::int;
use proptest::prelude::*;

fn measurable<T: Clone + std::fmt::Debug>(
    h: &Partition,
    values: impl Strategy<Value = T>,
) -> impl Strategy<Value = Vec<T>> {
    let h = h.clone();
    prop::collection::vec(values, h.atoms().len()).prop_map(move |v| h.broadcast(&v))
}

type LawCase = (
    RandomPolyhedron,
    RandomPolyhedron,
    Partition,
    Partition,
    RandomScalar,
    RandomVector,
);

fn law_case() -> impl Strategy<Value = LawCase> {
    (1usize..=2).prop_flat_map(|d| {
        bounded_pair(d).prop_flat_map(move |(x, y, h, c)| {
            let lambda = measurable(&h, -3i64..=3)
                .prop_map(|v| RandomScalar::finite(v.into_iter().map(int).collect()));
            let eta = measurable(&h, point(d)).prop_map(|v| RandomVector::new(v).unwrap());
            (Just(x), Just(y), Just(h), Just(c), lambda, eta)
        })
    })
}

fn nonempty_core(x: &RandomPolyhedron, h: &Partition) -> bool {
    cond_core(x, h).unwrap().sets().iter().all(|p| !p.is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scaling_translation_sums_and_towers((x, y, h, c, lambda, eta) in law_case()) {
        let r = scale_and_sum_laws(&x, &y, &lambda, &eta, &h, &c).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn cone_duality((k, h, _) in (2usize..=3).prop_flat_map(|d| random_set(2..=5, move || cone(d)))) {
        prop_assert!(core_hull_duality_cone(&k, &h).unwrap());
    }

    #[test]
    fn lifting_commutes((x, h, _) in (1usize..=3).prop_flat_map(bounded_set)) {
        prop_assume!(nonempty_core(&x, &h));
        prop_assert!(cone_lift_commute(&x, &h).unwrap());
    }

    #[test]
    fn epigraph_dualities((x, h, _) in (1usize..=2).prop_flat_map(bounded_set)) {
        let r = epigraph_duality_check(&x, &h).unwrap();
        prop_assert!(r.core_of_epigraphs);
        prop_assert_eq!(r.hull_of_epigraphs.is_some(), nonempty_core(&x, &h));
        prop_assert!(r.holds());
    }
}
