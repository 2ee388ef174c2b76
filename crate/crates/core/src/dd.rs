//! Double description method for homogeneous polyhedral cones.
//!
//! Given constraints `<c, y> >= 0` (or `= 0`), computes a lineality basis and
//! the extreme rays of the pointed part. Constraints are inserted one at a
//! time starting from the whole space; adjacency of rays is decided by the
//! combinatorial zero-set test, which is exact as long as every stored ray is
//! extreme for the constraints inserted so far.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::reduce_gcd;

/// Order in which constraints are fed to the incremental conversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InsertionOrder {
    /// Equalities first, then lexicographic order of coefficient rows.
    #[default]
    Lexicographic,
    /// The caller's order, reversed.
    Reverse,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub row: Vec<BigInt>,
    pub equality: bool,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn first(n: usize, len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zero: Bits,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(s: &BigInt, a: &[BigInt], t: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    // s*a - t*b, reduced to a primitive vector
    let mut out: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| s * x - t * y).collect();
    reduce_gcd(&mut out);
    out
}

fn order_constraints(mut cs: Vec<Constraint>, order: InsertionOrder) -> Vec<Constraint> {
    for c in cs.iter_mut() {
        reduce_gcd(&mut c.row);
    }
    cs.retain(|c| c.row.iter().any(|x| !x.is_zero()));
    match order {
        InsertionOrder::Lexicographic => {
            cs.sort_by(|a, b| b.equality.cmp(&a.equality).then_with(|| a.row.cmp(&b.row)));
            cs.dedup_by(|a, b| a.row == b.row && a.equality == b.equality);
        }
        InsertionOrder::Reverse => cs.reverse(),
    }
    cs
}

/// Generators of `{y in R^dim : constraints}`.
pub(crate) fn cone_generators(
    dim: usize,
    constraints: Vec<Constraint>,
    order: InsertionOrder,
) -> ConeGenerators {
    let constraints = order_constraints(constraints, order);
    let m = constraints.len();
    let mut lines: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, c) in constraints.iter().enumerate() {
        if let Some(idx) = lines.iter().position(|l| !idot(&c.row, l).is_zero()) {
            let mut pivot = lines.swap_remove(idx);
            let mut s = idot(&c.row, &pivot);
            if s.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
                s = -s;
            }
            for l in lines.iter_mut() {
                let t = idot(&c.row, l);
                if !t.is_zero() {
                    *l = combine(&s, l, &t, &pivot);
                }
            }
            for r in rays.iter_mut() {
                let t = idot(&c.row, &r.v);
                if !t.is_zero() {
                    r.v = combine(&s, &r.v, &t, &pivot);
                }
                r.zero.set(k);
            }
            if !c.equality {
                rays.push(Ray {
                    v: pivot,
                    zero: Bits::first(k, m),
                });
            }
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| idot(&c.row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        // adjacent rays span a 2-face, which needs dim - 2 - #lines tight rows
        let needed = dim.saturating_sub(2 + lines.len());
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zero.and(&rays[n].zero);
                if common.count() < needed {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.is_subset(&r.zero));
                if adjacent {
                    // values[p] > 0 > values[n]: values[p]*n - values[n]*p lies on c = 0
                    let v = combine(&values[p], &rays[n].v, &values[n], &rays[p].v);
                    let mut zero = common;
                    zero.set(k);
                    fresh.push(Ray { v, zero });
                }
            }
        }

        let mut kept = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_zero() {
                r.zero.set(k);
                kept.push(r);
            } else if values[i].is_positive() && !c.equality {
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    ConeGenerators {
        lines,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn ineq(xs: &[i64]) -> Constraint {
        Constraint {
            row: row(xs),
            equality: false,
        }
    }

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    #[test]
    fn positive_orthant() {
        let g = cone_generators(
            3,
            vec![ineq(&[1, 0, 0]), ineq(&[0, 1, 0]), ineq(&[0, 0, 1])],
            InsertionOrder::Lexicographic,
        );
        assert!(g.lines.is_empty());
        assert_eq!(
            sorted(g.rays),
            vec![row(&[0, 0, 1]), row(&[0, 1, 0]), row(&[1, 0, 0])]
        );
    }

    #[test]
    fn square_pyramid_has_four_rays_in_any_order() {
        // cone over the square [-1,1]^2 at height y0
        let cs = vec![
            ineq(&[1, 1, 0]),
            ineq(&[1, -1, 0]),
            ineq(&[1, 0, 1]),
            ineq(&[1, 0, -1]),
        ];
        let a = cone_generators(3, cs.clone(), InsertionOrder::Lexicographic);
        let b = cone_generators(3, cs, InsertionOrder::Reverse);
        assert_eq!(a.rays.len(), 4);
        assert_eq!(sorted(a.rays), sorted(b.rays));
    }

    #[test]
    fn equality_keeps_lineality_in_hyperplane() {
        let g = cone_generators(
            2,
            vec![Constraint {
                row: row(&[1, -1]),
                equality: true,
            }],
            InsertionOrder::Lexicographic,
        );
        assert_eq!(g.lines.len(), 1);
        assert!(g.rays.is_empty());
        assert_eq!(idot(&row(&[1, -1]), &g.lines[0]), BigInt::zero());
    }
}
