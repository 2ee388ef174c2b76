#![allow(dead_code)]

use std::collections::BTreeMap;

use condset::prob::{FiniteSpace, Partition};
use condset::rational::{int, Rat, Vector};
use condset::{Polyhedron, RandomPolyhedron};
use proptest::prelude::*;

pub fn point(d: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-4i64..=4, d).prop_map(|v| v.into_iter().map(int).collect())
}

pub fn nonzero(d: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, d)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(|v| v.into_iter().map(int).collect())
}

pub fn polytope(d: usize) -> impl Strategy<Value = Polyhedron> {
    prop::collection::vec(point(d), 1..=4).prop_map(move |vs| Polyhedron::from_vrep(d, vs, vec![]).unwrap())
}

pub fn polyhedron(d: usize) -> impl Strategy<Value = Polyhedron> {
    (
        prop::collection::vec(point(d), 1..=4),
        prop::collection::vec(nonzero(d), 0..=4),
    )
        .prop_map(move |(vs, rs)| Polyhedron::from_vrep(d, vs, rs).unwrap())
}

pub fn cone(d: usize) -> impl Strategy<Value = Polyhedron> {
    prop::collection::vec(nonzero(d), 1..=4)
        .prop_map(move |rs| Polyhedron::from_vrep(d, vec![vec![int(0); d]], rs).unwrap())
}

pub fn space(n: usize) -> impl Strategy<Value = FiniteSpace> {
    prop::collection::vec(1i64..=6, n).prop_map(|w| {
        let total: i64 = w.iter().sum();
        FiniteSpace::new(w.into_iter().map(|x| Rat::new(x.into(), total.into())).collect()).unwrap()
    })
}

/// Partition grouping points by label.
pub fn from_labels(labels: &[usize]) -> Partition {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    Partition::new(labels.len(), groups.into_values().collect()).unwrap()
}

/// A partition and a coarser one, obtained by folding labels.
pub fn partitions(n: usize) -> impl Strategy<Value = (Partition, Partition)> {
    (prop::collection::vec(0..n, n), 1..=n).prop_map(|(labels, m)| {
        let coarse: Vec<usize> = labels.iter().map(|l| l % m).collect();
        (from_labels(&labels), from_labels(&coarse))
    })
}

/// Random set with values drawn from `values`, plus `h` and a coarser partition.
pub fn random_set<S>(
    n: std::ops::RangeInclusive<usize>,
    values: impl Fn() -> S + Clone,
) -> impl Strategy<Value = (RandomPolyhedron, Partition, Partition)>
where
    S: Strategy<Value = Polyhedron>,
{
    n.prop_flat_map(move |n| {
        (space(n), prop::collection::vec(values(), n), partitions(n))
            .prop_map(|(s, sets, (h, c))| (RandomPolyhedron::new(s, sets).unwrap(), h, c))
    })
}

pub fn bounded_set(d: usize) -> impl Strategy<Value = (RandomPolyhedron, Partition, Partition)> {
    random_set(2..=5, move || polytope(d))
}

/// Two bounded sets on the same space.
pub fn bounded_pair(
    d: usize,
) -> impl Strategy<Value = (RandomPolyhedron, RandomPolyhedron, Partition, Partition)> {
    (2usize..=4).prop_flat_map(move |n| {
        (
            space(n),
            prop::collection::vec(polytope(d), n),
            prop::collection::vec(polytope(d), n),
            partitions(n),
        )
            .prop_map(|(s, a, b, (h, c))| {
                (
                    RandomPolyhedron::new(s.clone(), a).unwrap(),
                    RandomPolyhedron::new(s, b).unwrap(),
                    h,
                    c,
                )
            })
    })
}

/// Rational in (0, 1] with a small denominator.
pub fn alpha() -> impl Strategy<Value = Rat> {
    (1i64..=6).prop_flat_map(|den| (1..=den).prop_map(move |num| Rat::new(num.into(), den.into())))
}

pub fn small_rational() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}
