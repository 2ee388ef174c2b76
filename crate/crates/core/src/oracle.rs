//! Brute-force second paths to the primary operators, for differential
//! testing. None of these are meant to be fast.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dd::InsertionOrder;
use crate::error::{Error, Result};
use crate::exec;
use crate::geom::Polyhedron;
use crate::prob::{density_bounded_family, FiniteSpace, Partition};
use crate::randset::{cond_expectation_under, RandomPolyhedron};
use crate::rational::{int, ExtRat, Rat, Vector};
use crate::risk::{avar_sub_with, avar_super_with};

/// Support values of two sets along a list of directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportComparison {
    pub rows: Vec<SupportRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportRow {
    pub direction: Vector,
    pub left: ExtRat,
    pub right: ExtRat,
}

impl SupportRow {
    pub fn verdict(&self) -> Ordering {
        self.left.cmp(&self.right)
    }
}

impl SupportComparison {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.verdict() == Ordering::Equal)
    }

    /// `h_A <= h_B` in every direction.
    pub fn left_below(&self) -> bool {
        self.rows.iter().all(|r| r.verdict() != Ordering::Greater)
    }

    pub fn left_above(&self) -> bool {
        self.rows.iter().all(|r| r.verdict() != Ordering::Less)
    }

    pub fn strict_directions(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict() != Ordering::Equal)
            .count()
    }
}

pub fn support_grid_compare(
    a: &Polyhedron,
    b: &Polyhedron,
    directions: &[Vector],
) -> Result<SupportComparison> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let rows = directions
        .iter()
        .map(|u| {
            Ok(SupportRow {
                direction: u.clone(),
                left: a.support(u)?,
                right: b.support(u)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SupportComparison { rows })
}

/// Normals of both sets' facets and equations, in both orientations.
pub fn normal_fan(a: &Polyhedron, b: &Polyhedron) -> Vec<Vector> {
    let mut out: Vec<Vector> = a
        .halfspaces()
        .into_iter()
        .chain(b.halfspaces())
        .flat_map(|h| [crate::rational::neg(&h.normal), h.normal])
        .filter(|n| !crate::rational::is_zero(n))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Conditional core from the raw halfspace systems of each atom, collected
/// in reverse order and converted once with reversed insertion order.
pub fn core_by_accumulation(x: &RandomPolyhedron, h: &Partition) -> Result<RandomPolyhedron> {
    if h.size() != x.len() {
        return Err(Error::GroundSetMismatch {
            left: x.len(),
            right: h.size(),
        });
    }
    let dim = x.dim();
    let values = exec::try_map(h.atoms(), |atom| {
        let (mut ineqs, mut eqs) = (Vec::new(), Vec::new());
        for &i in atom.iter().rev() {
            let p = &x.sets()[i];
            ineqs.extend(p.inequalities().iter().cloned());
            eqs.extend(p.equalities().iter().cloned());
        }
        Polyhedron::from_constraints_ordered(dim, ineqs, eqs, InsertionOrder::Reverse)
    })?;
    RandomPolyhedron::new(x.space().clone(), h.broadcast(&values))
}

/// Round trip through the other representation with reversed insertion
/// order: H to V to H for `from_hrep`, V to H to V for `from_vrep`.
pub fn reconvert(p: &Polyhedron) -> Result<(Polyhedron, Polyhedron)> {
    let from_h =
        Polyhedron::from_constraints_ordered(p.dim(), p.halfspaces(), Vec::new(), InsertionOrder::Reverse)?;
    let from_v = Polyhedron::from_generators_ordered(
        p.dim(),
        p.vertices().to_vec(),
        p.rays(),
        Vec::new(),
        InsertionOrder::Reverse,
    )?;
    Ok((from_h, from_v))
}

/// Vertices of `{q : 0 <= q <= p/alpha, sum q = 1}` by enumeration: at a
/// vertex every coordinate but at most one sits at a bound.
pub fn density_vertices_by_enumeration(space: &FiniteSpace, alpha: &Rat) -> Vec<Vector> {
    let n = space.len();
    let upper: Vec<Rat> = space.probs().iter().map(|p| p / alpha).collect();
    let mut out = Vec::new();
    for free in 0..n {
        for mask in 0u32..(1 << n) {
            if mask & (1 << free) != 0 {
                continue;
            }
            let mut q: Vector = (0..n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        upper[i].clone()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            let rest = Rat::one() - q.iter().sum::<Rat>();
            if rest < Rat::zero() || rest > upper[free] {
                continue;
            }
            q[free] = rest;
            out.push(q);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSampleReport {
    pub samples: usize,
    /// Samples with `avar_sub ⊆ E_Q(X|h)`.
    pub sub_contained: usize,
    /// Samples with `E_Q(X|h) ⊆ avar_super`.
    pub super_contains: usize,
    /// Samples with `E_Q(X|h) = E(X|h)`.
    pub equal_to_base: usize,
}

impl MeasureSampleReport {
    pub fn passed(&self) -> bool {
        self.sub_contained == self.samples && self.super_contains == self.samples
    }
}

/// Random measures of the density family, as convex combinations of its
/// extreme points with positive integer weights. Each charges every point
/// that some extreme point charges.
pub fn sample_family_measures(space: &FiniteSpace, alpha: &Rat, n: usize, seed: u64) -> Result<Vec<Vector>> {
    let family = density_bounded_family(space, alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let weights: Vec<Rat> = family
                .extremes()
                .iter()
                .map(|_| int(rng.gen_range(1..=9)))
                .collect();
            let total: Rat = weights.iter().sum();
            let mut q = vec![Rat::zero(); space.len()];
            for (w, e) in weights.iter().zip(family.extremes()) {
                for (qi, ei) in q.iter_mut().zip(e) {
                    *qi += w * ei / &total;
                }
            }
            q
        })
        .collect())
}

pub fn measure_sample_check(
    x: &RandomPolyhedron,
    h: &Partition,
    alpha: &Rat,
    n: usize,
    seed: u64,
) -> Result<MeasureSampleReport> {
    let family = density_bounded_family(x.space(), alpha)?;
    let sub = avar_sub_with(x, h, &family)?;
    let sup = avar_super_with(x, h, &family)?;
    let base = cond_expectation_under(x, h, x.space().probs())?;
    let mut report = MeasureSampleReport {
        samples: n,
        sub_contained: 0,
        super_contains: 0,
        equal_to_base: 0,
    };
    for q in sample_family_measures(x.space(), alpha, n, seed)? {
        let e = cond_expectation_under(x, h, &q)?;
        report.sub_contained += e.contains(&sub)? as usize;
        report.super_contains += sup.contains(&e)? as usize;
        report.equal_to_base += (e == base) as usize;
    }
    Ok(report)
}
