//! Set-valued conditional Average Value-at-Risk and the bid-ask cone model.
//!
//! For `M = {Q : dQ/dP <= 1/α}`, the sublinear functional is the atom-wise
//! intersection of `E_Q(X|h)` over `Q ∈ M` and the superlinear one is the
//! closed convex hull of their union. Conditioning on an atom `A` only sees
//! the conditional law of `Q` on `A`, and the set of those laws is the convex
//! hull of the conditional laws of the extreme measures that charge `A`.
//! Support functions of `E_Q(X|h)` are linear in that law, so the extreme
//! measures generate both functionals exactly.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec;
use crate::geom::Polyhedron;
use crate::prob::{
    cond_essinf, cond_esssup, density_bounded_family, FiniteSpace, MeasureFamily, Partition, RandomScalar,
};
use crate::randset::{cond_core, cond_hull, mixture, RandomPolyhedron};
use crate::rational::{format_rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Combine {
    Intersection,
    Hull,
}

fn check_bounded_nonempty(x: &RandomPolyhedron) -> Result<()> {
    if let Some(index) = x.sets().iter().position(Polyhedron::is_empty) {
        return Err(Error::EmptyValue { index });
    }
    if !x.is_bounded() {
        return Err(Error::Unbounded);
    }
    Ok(())
}

fn avar(
    x: &RandomPolyhedron,
    h: &Partition,
    family: &MeasureFamily,
    how: Combine,
) -> Result<RandomPolyhedron> {
    check_bounded_nonempty(x)?;
    if h.size() != x.len() {
        return Err(Error::GroundSetMismatch {
            left: x.len(),
            right: h.size(),
        });
    }
    let dim = x.dim();
    let values = exec::try_map(h.atoms(), |atom| {
        let expectations = family
            .conditional_extremes(atom)
            .into_iter()
            .map(|law| mixture(dim, atom.iter().map(|&i| &x.sets()[i]).zip(law)))
            .collect::<Result<Vec<_>>>()?;
        match how {
            Combine::Intersection => Polyhedron::intersect_all(dim, &expectations),
            Combine::Hull => Polyhedron::convex_union_all(dim, &expectations),
        }
    })?;
    RandomPolyhedron::new(x.space().clone(), h.broadcast(&values))
}

/// Sublinear set-valued conditional AV@R at level `alpha`.
pub fn avar_sub(x: &RandomPolyhedron, h: &Partition, alpha: &Rat) -> Result<RandomPolyhedron> {
    let family = density_bounded_family(x.space(), alpha)?;
    avar(x, h, &family, Combine::Intersection)
}

/// Superlinear set-valued conditional AV@R at level `alpha`.
pub fn avar_super(x: &RandomPolyhedron, h: &Partition, alpha: &Rat) -> Result<RandomPolyhedron> {
    let family = density_bounded_family(x.space(), alpha)?;
    avar(x, h, &family, Combine::Hull)
}

pub fn avar_sub_with(
    x: &RandomPolyhedron,
    h: &Partition,
    family: &MeasureFamily,
) -> Result<RandomPolyhedron> {
    avar(x, h, family, Combine::Intersection)
}

pub fn avar_super_with(
    x: &RandomPolyhedron,
    h: &Partition,
    family: &MeasureFamily,
) -> Result<RandomPolyhedron> {
    avar(x, h, family, Combine::Hull)
}

/// Bid and ask prices of one asset in units of another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidAsk {
    space: FiniteSpace,
    bid: Vec<Rat>,
    ask: Vec<Rat>,
}

impl BidAsk {
    pub fn new(space: FiniteSpace, bid: &RandomScalar, ask: &RandomScalar) -> Result<Self> {
        let finite = |s: &RandomScalar, what| {
            s.values()
                .iter()
                .map(|v| v.as_finite().cloned().ok_or(Error::NotFinite(what)))
                .collect::<Result<Vec<Rat>>>()
        };
        let bid = finite(bid, "bid")?;
        let ask = finite(ask, "ask")?;
        for s in [&bid, &ask] {
            if s.len() != space.len() {
                return Err(Error::LengthMismatch {
                    expected: space.len(),
                    found: s.len(),
                });
            }
        }
        if let Some(index) = (0..bid.len()).find(|&i| !bid[i].is_positive() || bid[i] > ask[i]) {
            return Err(Error::InvalidSpread { index });
        }
        Ok(BidAsk { space, bid, ask })
    }

    pub fn bid(&self) -> RandomScalar {
        RandomScalar::finite(self.bid.clone())
    }

    pub fn ask(&self) -> RandomScalar {
        RandomScalar::finite(self.ask.clone())
    }

    /// The random segment `[bid, ask]`.
    pub fn spread(&self) -> RandomPolyhedron {
        let sets = self
            .bid
            .iter()
            .zip(&self.ask)
            .map(|(b, a)| {
                Polyhedron::from_vrep(1, vec![vec![b.clone()], vec![a.clone()]], vec![])
                    .expect("one-dimensional vertices")
            })
            .collect();
        RandomPolyhedron::new(self.space.clone(), sets).expect("one set per point")
    }

    /// `cone([bid, ask]) ⊂ R^2`.
    pub fn lifted(&self) -> RandomPolyhedron {
        self.spread()
            .map(Polyhedron::lift_cone)
            .expect("spreads are bounded and nonempty")
    }
}

/// Solvency cone: the positive dual of the lifted bid-ask segment.
pub fn solvency_cone(ba: &BidAsk) -> Result<RandomPolyhedron> {
    ba.lifted().map(Polyhedron::dual_cone)
}

/// Conditional core and hull of the lifted bid-ask cone with the price
/// intervals that generate them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadBounds {
    pub core: RandomPolyhedron,
    pub hull: RandomPolyhedron,
    /// `[esssup bid, essinf ask]` per sample point.
    pub core_prices: Vec<(Rat, Rat)>,
    /// `[essinf bid, esssup ask]` per sample point.
    pub hull_prices: Vec<(Rat, Rat)>,
}

fn finite_values(s: RandomScalar) -> Vec<Rat> {
    s.0.into_iter()
        .map(|v| v.as_finite().cloned().expect("prices are finite"))
        .collect()
}

/// Core and hull of `cone([bid, ask])` given `h`. Fails with `CrossedSpread`
/// on the first atom where `esssup bid > essinf ask`; the core there is
/// `{0}`, which [`lifted_core_hull`] still returns.
pub fn spread_bounds(ba: &BidAsk, h: &Partition) -> Result<SpreadBounds> {
    let bounds = lifted_core_hull(ba, h)?;
    for (k, atom) in h.atoms().iter().enumerate() {
        let (b, a) = &bounds.core_prices[atom[0]];
        if b > a {
            return Err(Error::CrossedSpread {
                atom: k,
                bid: format_rat(b),
                ask: format_rat(a),
            });
        }
    }
    Ok(bounds)
}

pub fn lifted_core_hull(ba: &BidAsk, h: &Partition) -> Result<SpreadBounds> {
    let lifted = ba.lifted();
    let bid = ba.bid();
    let ask = ba.ask();
    let zip = |a: Vec<Rat>, b: Vec<Rat>| a.into_iter().zip(b).collect::<Vec<_>>();
    Ok(SpreadBounds {
        core: cond_core(&lifted, h)?,
        hull: cond_hull(&lifted, h)?,
        core_prices: zip(
            finite_values(cond_esssup(&bid, h)?),
            finite_values(cond_essinf(&ask, h)?),
        ),
        hull_prices: zip(
            finite_values(cond_essinf(&bid, h)?),
            finite_values(cond_esssup(&ask, h)?),
        ),
    })
}

/// `cone([lo, hi])` as a polyhedron in `R^2`; `{0}` when `lo > hi`.
pub fn price_cone(lo: &Rat, hi: &Rat) -> Polyhedron {
    if lo > hi {
        return Polyhedron::point(vec![Rat::zero(), Rat::zero()]);
    }
    Polyhedron::from_vrep(1, vec![vec![lo.clone()], vec![hi.clone()]], vec![])
        .and_then(|p| p.lift_cone())
        .expect("bounded nonempty interval")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randset::cond_expectation;
    use crate::rational::{int, ivec, rat};

    fn iv(lo: Rat, hi: Rat) -> Polyhedron {
        Polyhedron::from_vrep(1, vec![vec![lo], vec![hi]], vec![]).unwrap()
    }

    fn worked() -> RandomPolyhedron {
        RandomPolyhedron::new(
            FiniteSpace::uniform(2),
            vec![iv(int(0), int(2)), iv(int(1), int(3))],
        )
        .unwrap()
    }

    #[test]
    fn worked_two_point_instance() {
        let t = Partition::trivial(2);
        let x = worked();
        // extremes (3/4,1/4), (1/4,3/4): E = [1/4, 9/4] and [3/4, 11/4]
        assert_eq!(
            avar_sub(&x, &t, &rat(2, 3)).unwrap().sets()[0],
            iv(rat(3, 4), rat(9, 4))
        );
        assert_eq!(
            avar_super(&x, &t, &rat(2, 3)).unwrap().sets()[0],
            iv(rat(1, 4), rat(11, 4))
        );
    }

    #[test]
    fn limits_in_alpha() {
        let t = Partition::trivial(2);
        let x = worked();
        let e = cond_expectation(&x, &t).unwrap();
        assert_eq!(avar_sub(&x, &t, &int(1)).unwrap(), e);
        assert_eq!(avar_super(&x, &t, &int(1)).unwrap(), e);
        assert_eq!(avar_sub(&x, &t, &rat(1, 2)).unwrap(), cond_core(&x, &t).unwrap());
        assert_eq!(
            avar_super(&x, &t, &rat(1, 3)).unwrap(),
            cond_hull(&x, &t).unwrap()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = Partition::trivial(2);
        assert!(matches!(
            avar_sub(&worked(), &t, &int(0)),
            Err(Error::InvalidAlpha(_))
        ));
        let unbounded = RandomPolyhedron::new(
            FiniteSpace::uniform(2),
            vec![
                Polyhedron::from_vrep(1, vec![ivec(&[0])], vec![ivec(&[1])]).unwrap(),
                iv(int(0), int(1)),
            ],
        )
        .unwrap();
        assert_eq!(avar_super(&unbounded, &t, &rat(1, 2)), Err(Error::Unbounded));
    }

    fn prices(xs: &[Rat]) -> RandomScalar {
        RandomScalar::finite(xs.to_vec())
    }

    #[test]
    fn bid_ask_bounds() {
        let space = FiniteSpace::uniform(2);
        let t = Partition::trivial(2);
        let ba = BidAsk::new(
            space.clone(),
            &prices(&[int(1), rat(3, 2)]),
            &prices(&[int(2), int(3)]),
        )
        .unwrap();
        let b = spread_bounds(&ba, &t).unwrap();
        assert_eq!(b.core.sets()[0].extreme_rays(), &[ivec(&[1, 2]), ivec(&[2, 3])]);
        assert_eq!(b.hull.sets()[0].extreme_rays(), &[ivec(&[1, 1]), ivec(&[1, 3])]);
        assert_eq!(b.core_prices[0], (rat(3, 2), int(2)));
        assert_eq!(b.hull_prices[1], (int(1), int(3)));

        let s = BidAsk::new(
            space.clone(),
            &prices(&[int(2), int(2)]),
            &prices(&[int(2), int(2)]),
        )
        .unwrap();
        let b = spread_bounds(&s, &t).unwrap();
        assert_eq!(b.core, b.hull);
        assert_eq!(b.core.sets()[0].extreme_rays(), &[ivec(&[1, 2])]);

        let crossed = BidAsk::new(
            space.clone(),
            &prices(&[int(1), int(2)]),
            &prices(&[rat(3, 2), rat(5, 2)]),
        )
        .unwrap();
        assert!(matches!(
            spread_bounds(&crossed, &t),
            Err(Error::CrossedSpread { atom: 0, .. })
        ));
        let b = lifted_core_hull(&crossed, &t).unwrap();
        assert_eq!(b.core.sets()[0], Polyhedron::point(ivec(&[0, 0])));

        assert_eq!(
            BidAsk::new(space, &prices(&[int(3), int(1)]), &prices(&[int(2), int(2)])),
            Err(Error::InvalidSpread { index: 0 })
        );
    }

    #[test]
    fn solvency_cone_is_dual_of_spread() {
        let space = FiniteSpace::uniform(1);
        let ba = BidAsk::new(space, &prices(&[int(1)]), &prices(&[int(2)])).unwrap();
        let k = solvency_cone(&ba).unwrap();
        // positions (x0, x1) with x0 + s x1 >= 0 for s in [1, 2]
        assert_eq!(k.sets()[0].extreme_rays(), &[ivec(&[-1, 1]), ivec(&[2, -1])]);
    }
}
