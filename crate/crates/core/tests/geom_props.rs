mod common;

use common::{cone, point, polyhedron, polytope};
use condset::oracle::reconvert;
use condset::rational::{int, scaled, unit, Rat};
use condset::{ExtRat, Halfspace, Polyhedron};
use proptest::prelude::*;

fn dim_and<S, F>(f: F) -> impl Strategy<Value = (usize, S::Value)>
where
    S: Strategy,
    F: Fn(usize) -> S,
{
    (1usize..=3).prop_flat_map(move |d| (Just(d), f(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn representations_round_trip((_, p) in dim_and(polyhedron)) {
        let from_h = Polyhedron::from_hrep(p.dim(), p.halfspaces()).unwrap();
        let from_v = Polyhedron::from_vrep(p.dim(), p.vertices().to_vec(), p.rays()).unwrap();
        prop_assert_eq!(&from_h, &from_v);
        prop_assert_eq!(&from_h, &p);
        let (h2, v2) = reconvert(&p).unwrap();
        prop_assert_eq!(&h2, &p);
        prop_assert_eq!(&v2, &p);
    }

    #[test]
    fn facet_offsets_are_support_values((_, p) in dim_and(polyhedron)) {
        let rebuilt: Vec<Halfspace> = p
            .halfspaces()
            .into_iter()
            .map(|h| {
                let b = p.support(&h.normal).unwrap().as_finite().cloned().unwrap();
                Halfspace::new(h.normal, b)
            })
            .collect();
        prop_assert_eq!(Polyhedron::from_hrep(p.dim(), rebuilt).unwrap(), p);
    }
}

fn pair_with_direction(
    values: fn(usize) -> BoxedStrategy<Polyhedron>,
) -> impl Strategy<Value = (Polyhedron, Polyhedron, Vec<Rat>)> {
    (1usize..=3).prop_flat_map(move |d| (values(d), values(d), point(d)))
}

fn boxed_polyhedron(d: usize) -> BoxedStrategy<Polyhedron> {
    polyhedron(d).boxed()
}

fn boxed_polytope(d: usize) -> BoxedStrategy<Polyhedron> {
    polytope(d).boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn support_of_sum_union_and_intersection((p, q, u) in pair_with_direction(boxed_polyhedron)) {
        let (hp, hq) = (p.support(&u).unwrap(), q.support(&u).unwrap());
        let sum = p.minkowski_sum(&q).unwrap().support(&u).unwrap();
        prop_assert_eq!(sum, hp.checked_add(&hq).unwrap());
        let union = p.convex_union(&q).unwrap().support(&u).unwrap();
        prop_assert_eq!(union, hp.clone().max(hq.clone()));
        let meet = p.intersect(&q).unwrap().support(&u).unwrap();
        prop_assert!(meet <= hp.min(hq));
    }

    #[test]
    fn support_of_scaled_set((p, _, u) in pair_with_direction(boxed_polyhedron), l in -3i64..=3) {
        let lambda = int(l);
        prop_assert_eq!(
            p.scale(&lambda).support(&u).unwrap(),
            p.support(&scaled(&u, &lambda)).unwrap()
        );
    }

    #[test]
    fn containment_dominates_support((p, q, u) in pair_with_direction(boxed_polytope)) {
        let both = p.convex_union(&q).unwrap();
        prop_assert!(both.contains(&p).unwrap());
        let meet = p.intersect(&q).unwrap();
        prop_assert!(p.contains(&meet).unwrap() && q.contains(&meet).unwrap());
        if p.contains(&q).unwrap() {
            prop_assert!(q.support(&u).unwrap() <= p.support(&u).unwrap());
        }
        prop_assert_eq!(p.equals(&q).unwrap(), p == q);
    }

    #[test]
    fn bipolar((_, p) in dim_and(polyhedron)) {
        let origin = vec![Rat::from_integer(0.into()); p.dim()];
        let p = p.convex_union(&Polyhedron::point(origin)).unwrap();
        prop_assert_eq!(p.polar().polar(), p);
    }

    #[test]
    fn dual_cone_involution((_, k) in dim_and(cone)) {
        let dual = k.dual_cone().unwrap();
        prop_assert_eq!(dual.dual_cone().unwrap(), k.clone());
        for r in k.rays() {
            for s in dual.rays() {
                prop_assert!(condset::rational::dot(&r, &s) >= Rat::from_integer(0.into()));
            }
        }
    }

    #[test]
    fn lift_then_slice((_, p) in dim_and(polytope)) {
        prop_assert_eq!(p.lift_cone().unwrap().slice_at_one(), p);
    }

    #[test]
    fn epigraph_is_upward_closed((_, p) in dim_and(polyhedron), t in 0i64..=3) {
        let d = p.dim();
        let epi = p.epigraph_cone();
        let up = Polyhedron::from_vrep(d + 1, vec![vec![int(0); d + 1]], vec![unit(d + 1, d)]).unwrap();
        prop_assert_eq!(epi.minkowski_sum(&up).unwrap(), epi.clone());
        for v in p.vertices() {
            let mut at = v.clone();
            let h = p.support(v).unwrap();
            if let ExtRat::Finite(h) = h {
                at.push(h.clone() + int(t));
                prop_assert!(epi.contains_point(&at));
                at[d] = h - int(1);
                prop_assert!(!epi.contains_point(&at));
            }
        }
    }

    #[test]
    fn empty_set_absorbs_sums((_, p) in dim_and(polyhedron)) {
        let empty = Polyhedron::empty(p.dim());
        prop_assert!(p.minkowski_sum(&empty).unwrap().is_empty());
        prop_assert_eq!(p.convex_union(&empty).unwrap(), p.clone());
        prop_assert!(p.contains(&empty).unwrap());
        prop_assert_eq!(empty.support(&vec![int(1); p.dim()]).unwrap(), ExtRat::NegInf);
    }
}
