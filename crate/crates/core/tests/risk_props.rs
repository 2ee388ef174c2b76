mod common;

use common::{alpha, bounded_pair, bounded_set, partitions, space};
use condset::oracle::measure_sample_check;
use condset::prob::{cond_essinf, cond_esssup, Partition, RandomScalar};
use condset::randset::{cond_core, cond_expectation, cond_hull, core_hull_duality_cone, RandomPolyhedron};
use condset::rational::Rat;
use condset::risk::{
    avar_sub, avar_super, lifted_core_hull, price_cone, solvency_cone, spread_bounds, BidAsk,
};
use condset::{Error, FiniteSpace};
use proptest::prelude::*;

fn case() -> impl Strategy<Value = (RandomPolyhedron, Partition, Partition)> {
    (1usize..=2).prop_flat_map(bounded_set)
}

fn bid_ask() -> impl Strategy<Value = (FiniteSpace, Partition, Vec<(i64, i64)>)> {
    (1usize..=5).prop_flat_map(|n| {
        (
            space(n),
            partitions(n),
            prop::collection::vec((1i64..=6, 0i64..=4), n),
        )
            .prop_map(|(s, (h, _), quotes)| (s, h, quotes))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn monotone_in_alpha((x, h, _) in case(), a in alpha(), b in alpha()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(avar_sub(&x, &h, &hi).unwrap().contains(&avar_sub(&x, &h, &lo).unwrap()).unwrap());
        prop_assert!(avar_super(&x, &h, &lo).unwrap().contains(&avar_super(&x, &h, &hi).unwrap()).unwrap());
    }

    #[test]
    fn sandwich_chain((x, h, _) in case(), a in alpha()) {
        let core = cond_core(&x, &h).unwrap();
        let sub = avar_sub(&x, &h, &a).unwrap();
        let mean = cond_expectation(&x, &h).unwrap();
        let sup = avar_super(&x, &h, &a).unwrap();
        let hull = cond_hull(&x, &h).unwrap();
        prop_assert!(sub.contains(&core).unwrap());
        prop_assert!(mean.contains(&sub).unwrap());
        prop_assert!(sup.contains(&mean).unwrap());
        prop_assert!(hull.contains(&sup).unwrap());
    }

    #[test]
    fn sub_and_super_linearity((x, y, h, _) in (1usize..=2).prop_flat_map(bounded_pair), a in alpha()) {
        let sum = x.minkowski_sum(&y).unwrap();
        let parts = avar_sub(&x, &h, &a).unwrap().minkowski_sum(&avar_sub(&y, &h, &a).unwrap()).unwrap();
        prop_assert!(avar_sub(&sum, &h, &a).unwrap().contains(&parts).unwrap());
        let parts = avar_super(&x, &h, &a).unwrap().minkowski_sum(&avar_super(&y, &h, &a).unwrap()).unwrap();
        prop_assert!(parts.contains(&avar_super(&sum, &h, &a).unwrap()).unwrap());
    }

    #[test]
    fn bid_ask_cones((s, h, quotes) in bid_ask()) {
        let bid: Vec<Rat> = quotes.iter().map(|&(b, _)| Rat::from_integer(b.into())).collect();
        let ask: Vec<Rat> = quotes.iter().map(|&(b, w)| Rat::from_integer((b + w).into())).collect();
        let ba = BidAsk::new(s, &RandomScalar::finite(bid.clone()), &RandomScalar::finite(ask.clone())).unwrap();
        let bounds = lifted_core_hull(&ba, &h).unwrap();
        for i in 0..bid.len() {
            let (lo, hi) = &bounds.core_prices[i];
            prop_assert_eq!(&bounds.core.sets()[i], &price_cone(lo, hi));
            let (lo, hi) = &bounds.hull_prices[i];
            prop_assert_eq!(&bounds.hull.sets()[i], &price_cone(lo, hi));
        }
        let sup_bid = cond_esssup(&ba.bid(), &h).unwrap();
        let inf_ask = cond_essinf(&ba.ask(), &h).unwrap();
        let crossed = sup_bid.values().iter().zip(inf_ask.values()).any(|(b, a)| b > a);
        prop_assert_eq!(matches!(spread_bounds(&ba, &h), Err(Error::CrossedSpread { .. })), crossed);
        prop_assert!(core_hull_duality_cone(&ba.lifted(), &h).unwrap());
        let solvency = solvency_cone(&ba).unwrap();
        prop_assert_eq!(solvency.map(|k| k.dual_cone()).unwrap(), ba.lifted());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extreme_measures_suffice((x, h, _) in case(), a in alpha(), seed in any::<u64>()) {
        let report = measure_sample_check(&x, &h, &a, 100, seed).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }
}
