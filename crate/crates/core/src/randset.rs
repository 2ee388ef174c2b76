//! Polyhedron-valued random sets over a finite space and their conditional
//! operators.
//!
//! With a partition standing in for the conditioning σ-algebra, every
//! operator acts atom by atom:
//!
//! * the conditional core `cm(X|h)` is the intersection of the values on the
//!   atom (the largest h-measurable random set inside `X`);
//! * the conditional convex hull `CM(X|h)` is the closed convex hull of their
//!   union (the smallest h-measurable random closed convex set containing
//!   `X`);
//! * the conditional expectation `E(X|h)` is their probability-weighted
//!   Minkowski combination.
//!
//! The `*_check` functions evaluate identities relating these operators and
//! return whether they hold, so they can be run over randomized corpora.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec;
use crate::geom::{Halfspace, Polyhedron};
use crate::prob::{cond_esssup, FiniteSpace, Partition, RandomScalar, RandomVector};
use crate::rational::{zeros, ExtRat, Rat, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomPolyhedron {
    space: FiniteSpace,
    dim: usize,
    sets: Vec<Polyhedron>,
}

impl RandomPolyhedron {
    pub fn new(space: FiniteSpace, sets: Vec<Polyhedron>) -> Result<Self> {
        if sets.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: sets.len(),
            });
        }
        let dim = sets[0].dim();
        if let Some(p) = sets.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(RandomPolyhedron { space, dim, sets })
    }

    pub fn deterministic(space: FiniteSpace, set: Polyhedron) -> Self {
        let sets = vec![set; space.len()];
        RandomPolyhedron::new(space, sets).expect("uniform dimension")
    }

    /// Random singleton `{v(ω)}`.
    pub fn singletons(space: FiniteSpace, v: &RandomVector) -> Result<Self> {
        let sets = v.values().iter().map(|x| Polyhedron::point(x.clone())).collect();
        RandomPolyhedron::new(space, sets)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sets(&self) -> &[Polyhedron] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.sets.iter().all(Polyhedron::is_bounded)
    }

    /// Equal canonical values on every atom of `h`.
    pub fn is_measurable(&self, h: &Partition) -> Result<bool> {
        check_partition(self, h)?;
        Ok(h.is_measurable(&self.sets))
    }

    /// Applies `f` at every sample point.
    pub fn map<F>(&self, f: F) -> Result<RandomPolyhedron>
    where
        F: Fn(&Polyhedron) -> Result<Polyhedron> + Sync + Send,
    {
        let sets = exec::try_map(&self.sets, f)?;
        RandomPolyhedron::new(self.space.clone(), sets)
    }

    /// Pointwise binary operation with another random set on the same space.
    pub fn zip_with<F>(&self, other: &RandomPolyhedron, f: F) -> Result<RandomPolyhedron>
    where
        F: Fn(&Polyhedron, &Polyhedron) -> Result<Polyhedron> + Sync + Send,
    {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let pairs: Vec<(&Polyhedron, &Polyhedron)> = self.sets.iter().zip(&other.sets).collect();
        let sets = exec::try_map(&pairs, |(a, b)| f(a, b))?;
        RandomPolyhedron::new(self.space.clone(), sets)
    }

    pub fn minkowski_sum(&self, other: &RandomPolyhedron) -> Result<RandomPolyhedron> {
        self.zip_with(other, |a, b| a.minkowski_sum(b))
    }

    /// `λ(ω)·X(ω)`. A zero multiplier gives `{0}` whatever the value, as for
    /// the graph of `λX`.
    pub fn scale_by(&self, lambda: &[Rat]) -> Result<RandomPolyhedron> {
        if lambda.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: lambda.len(),
            });
        }
        let sets = self
            .sets
            .iter()
            .zip(lambda)
            .map(|(p, l)| {
                if l.is_zero() {
                    Polyhedron::point(zeros(self.dim))
                } else {
                    p.scale(l)
                }
            })
            .collect();
        RandomPolyhedron::new(self.space.clone(), sets)
    }

    /// Pointwise `X ⊆ self`.
    pub fn contains(&self, other: &RandomPolyhedron) -> Result<bool> {
        for (a, b) in self.sets.iter().zip(&other.sets) {
            if !a.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_partition(x: &RandomPolyhedron, h: &Partition) -> Result<()> {
    if h.size() != x.len() {
        return Err(Error::GroundSetMismatch {
            left: x.len(),
            right: h.size(),
        });
    }
    Ok(())
}

/// Evaluates `f` on the members of each atom and broadcasts the results.
fn per_atom<F>(x: &RandomPolyhedron, h: &Partition, f: F) -> Result<RandomPolyhedron>
where
    F: Fn(&[usize]) -> Result<Polyhedron> + Sync + Send,
{
    check_partition(x, h)?;
    let values = exec::try_map(h.atoms(), |a| f(a))?;
    RandomPolyhedron::new(x.space.clone(), h.broadcast(&values))
}

/// `sum_i w_i P_i` over the members with nonzero weight.
pub fn mixture<'a>(
    dim: usize,
    members: impl IntoIterator<Item = (&'a Polyhedron, Rat)>,
) -> Result<Polyhedron> {
    // aP + bP = (a+b)P for convex P, so equal members are merged first
    let mut merged: Vec<(&Polyhedron, Rat)> = Vec::new();
    for (p, w) in members {
        if w.is_zero() {
            continue;
        }
        if p.is_empty() {
            return Ok(Polyhedron::empty(dim));
        }
        match merged.iter_mut().find(|(q, _)| *q == p) {
            Some((_, acc)) => *acc += w,
            None => merged.push((p, w)),
        }
    }
    let mut acc = Polyhedron::point(zeros(dim));
    for (p, w) in merged {
        acc = acc.minkowski_sum(&p.scale(&w))?;
    }
    Ok(acc)
}

/// Conditional core: atom-wise intersection.
pub fn cond_core(x: &RandomPolyhedron, h: &Partition) -> Result<RandomPolyhedron> {
    per_atom(x, h, |a| {
        let mut acc = x.sets[a[0]].clone();
        for &i in &a[1..] {
            acc = acc.intersect(&x.sets[i])?;
        }
        Ok(acc)
    })
}

/// Conditional convex hull: atom-wise closed convex hull of the union. Empty
/// members are ignored; an atom of empty values stays empty.
pub fn cond_hull(x: &RandomPolyhedron, h: &Partition) -> Result<RandomPolyhedron> {
    per_atom(x, h, |a| {
        Polyhedron::convex_union_all(x.dim, a.iter().map(|&i| &x.sets[i]))
    })
}

/// Conditional expectation: atom-wise `sum p_ω / P(A) · X(ω)`. Empty on any
/// atom holding an empty value.
pub fn cond_expectation(x: &RandomPolyhedron, h: &Partition) -> Result<RandomPolyhedron> {
    cond_expectation_under(x, h, x.space.probs())
}

/// Conditional expectation under another measure `q` on the same points.
///
/// Atoms of zero `q`-mass have no conditional law; they yield `None` from
/// [`cond_expectation_atoms`] and are rejected here.
pub fn cond_expectation_under(x: &RandomPolyhedron, h: &Partition, q: &[Rat]) -> Result<RandomPolyhedron> {
    let atoms = cond_expectation_atoms(x, h, q)?;
    let values = atoms
        .into_iter()
        .map(|v| v.ok_or(Error::NotMeasurable("measure with a null atom")))
        .collect::<Result<Vec<_>>>()?;
    RandomPolyhedron::new(x.space.clone(), h.broadcast(&values))
}

/// One conditional expectation per atom of `h` under `q`.
pub fn cond_expectation_atoms(
    x: &RandomPolyhedron,
    h: &Partition,
    q: &[Rat],
) -> Result<Vec<Option<Polyhedron>>> {
    check_partition(x, h)?;
    if q.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: q.len(),
        });
    }
    exec::try_map(h.atoms(), |a| {
        let mass: Rat = a.iter().map(|&i| &q[i]).sum();
        if mass.is_zero() {
            return Ok(None);
        }
        mixture(x.dim, a.iter().map(|&i| (&x.sets[i], &q[i] / &mass))).map(Some)
    })
}

/// `ω ↦ h_{X(ω)}(ζ(ω))`.
pub fn support_rv(x: &RandomPolyhedron, zeta: &RandomVector) -> Result<RandomScalar> {
    if zeta.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: zeta.len(),
        });
    }
    let values = x
        .sets
        .iter()
        .zip(zeta.values())
        .map(|(p, u)| p.support(u))
        .collect::<Result<_>>()?;
    Ok(RandomScalar(values))
}

/// Conditional core rebuilt from the conditional infima of support values:
/// `∩_u {x : <u, x> <= essinf h_X(u)}` on each atom.
pub fn core_via_halfspaces(
    x: &RandomPolyhedron,
    h: &Partition,
    directions: &[Vector],
) -> Result<RandomPolyhedron> {
    if !x.is_bounded() {
        return Err(Error::Unbounded);
    }
    for u in directions {
        if u.len() != x.dim {
            return Err(Error::DimensionMismatch {
                expected: x.dim,
                found: u.len(),
            });
        }
    }
    per_atom(x, h, |a| {
        let mut halfspaces = Vec::with_capacity(directions.len());
        for u in directions {
            let inf = a
                .iter()
                .map(|&i| x.sets[i].support(u))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .expect("atoms are nonempty");
            match inf {
                ExtRat::Finite(b) => halfspaces.push(Halfspace::new(u.clone(), b)),
                ExtRat::NegInf => return Ok(Polyhedron::empty(x.dim)),
                ExtRat::PosInf => unreachable!("bounded sets have finite support"),
            }
        }
        Polyhedron::from_hrep(x.dim, halfspaces)
    })
}

/// Union of the facet normals of all values (both orientations of every
/// equation included), sorted and deduplicated.
pub fn facet_normals(x: &RandomPolyhedron) -> Vec<Vector> {
    let mut out: Vec<Vector> = x
        .sets
        .iter()
        .flat_map(|p| p.halfspaces().into_iter().map(|h| h.normal))
        .filter(|n| !crate::rational::is_zero(n))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `cm(X|h) ⊆ E(X|h) ⊆ CM(X|h)`.
pub fn sandwich_check(x: &RandomPolyhedron, h: &Partition) -> Result<bool> {
    let core = cond_core(x, h)?;
    let mean = cond_expectation(x, h)?;
    let hull = cond_hull(x, h)?;
    Ok(mean.contains(&core)? && hull.contains(&mean)?)
}

/// `h_{CM(X|h)}(ζ) = esssup h_X(ζ)` for an h-measurable direction `ζ`.
pub fn hull_support_identity(x: &RandomPolyhedron, h: &Partition, zeta: &RandomVector) -> Result<bool> {
    if !h.is_measurable(zeta.values()) {
        return Err(Error::NotMeasurable("direction"));
    }
    let lhs = support_rv(&cond_hull(x, h)?, zeta)?;
    let rhs = cond_esssup(&support_rv(x, zeta)?, h)?;
    Ok(lhs == rhs)
}

/// Both `h_{cm(X|h)}(ζ)` and `essinf h_X(ζ)` for an h-measurable `ζ`; the
/// first never exceeds the second.
pub fn core_support_bounds(
    x: &RandomPolyhedron,
    h: &Partition,
    zeta: &RandomVector,
) -> Result<(RandomScalar, RandomScalar)> {
    if !h.is_measurable(zeta.values()) {
        return Err(Error::NotMeasurable("direction"));
    }
    let lhs = support_rv(&cond_core(x, h)?, zeta)?;
    let rhs = crate::prob::cond_essinf(&support_rv(x, zeta)?, h)?;
    Ok((lhs, rhs))
}

/// For a random cone `K`: `cm(K|h) = CM(K*|h)*` and `E(K|h) = CM(K|h)`.
pub fn core_hull_duality_cone(k: &RandomPolyhedron, h: &Partition) -> Result<bool> {
    if !k.sets.iter().all(Polyhedron::is_cone) {
        return Err(Error::NotACone);
    }
    let dual = k.map(Polyhedron::dual_cone)?;
    let core = cond_core(k, h)?;
    let dual_of_hull = cond_hull(&dual, h)?.map(Polyhedron::dual_cone)?;
    let mean = cond_expectation(k, h)?;
    let hull = cond_hull(k, h)?;
    Ok(core == dual_of_hull && mean == hull)
}

fn nonempty_core_atoms(core: &RandomPolyhedron, h: &Partition) -> Result<()> {
    for (k, a) in h.atoms().iter().enumerate() {
        if core.sets[a[0]].is_empty() {
            return Err(Error::EmptyCore { atom: k });
        }
    }
    Ok(())
}

/// `cm(cone X|h) = cone cm(X|h)` and `CM(cone X|h) = cone CM(X|h)`.
pub fn cone_lift_commute(x: &RandomPolyhedron, h: &Partition) -> Result<bool> {
    if !x.is_bounded() {
        return Err(Error::Unbounded);
    }
    let core = cond_core(x, h)?;
    nonempty_core_atoms(&core, h)?;
    let lifted = x.map(Polyhedron::lift_cone)?;
    let core_ok = cond_core(&lifted, h)? == core.map(Polyhedron::lift_cone)?;
    let hull_ok = cond_hull(&lifted, h)? == cond_hull(x, h)?.map(Polyhedron::lift_cone)?;
    Ok(core_ok && hull_ok)
}

/// Outcome of the epigraph dualities
/// `CM(epi h_X|h) = epi h_{cm(X|h)}` and `cm(epi h_X|h) = epi h_{CM(X|h)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpigraphDuality {
    /// `None` when the core is empty on some atom, where the right-hand side
    /// is the improper epigraph of `-inf`.
    pub hull_of_epigraphs: Option<bool>,
    pub core_of_epigraphs: bool,
}

impl EpigraphDuality {
    pub fn holds(&self) -> bool {
        self.core_of_epigraphs && self.hull_of_epigraphs.unwrap_or(true)
    }
}

pub fn epigraph_duality_check(x: &RandomPolyhedron, h: &Partition) -> Result<EpigraphDuality> {
    if let Some(index) = x.sets.iter().position(Polyhedron::is_empty) {
        return Err(Error::EmptyValue { index });
    }
    let epi = x.map(|p| Ok(p.epigraph_cone()))?;
    let core = cond_core(x, h)?;
    let hull_of_epigraphs = if core.sets.iter().any(Polyhedron::is_empty) {
        None
    } else {
        Some(cond_hull(&epi, h)? == core.map(|p| Ok(p.epigraph_cone()))?)
    };
    let core_of_epigraphs = cond_core(&epi, h)? == cond_hull(x, h)?.map(|p| Ok(p.epigraph_cone()))?;
    Ok(EpigraphDuality {
        hull_of_epigraphs,
        core_of_epigraphs,
    })
}

/// `X_s = CM(X_t | F_s)` for all `s <= t`.
pub fn maxingale_check(filtration: &[Partition], sequence: &[RandomPolyhedron]) -> Result<bool> {
    if filtration.len() != sequence.len() {
        return Err(Error::LengthMismatch {
            expected: filtration.len(),
            found: sequence.len(),
        });
    }
    for (t, pair) in filtration.windows(2).enumerate() {
        if !pair[1].refines(&pair[0])? {
            return Err(Error::NotAFiltration { step: t + 1 });
        }
    }
    for (t, (f, x)) in filtration.iter().zip(sequence).enumerate() {
        if !x.is_measurable(f)? {
            return Err(Error::NotAdapted { step: t });
        }
    }
    for s in 0..sequence.len() {
        for t in s..sequence.len() {
            if sequence[s] != cond_hull(&sequence[t], &filtration[s])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the scaling, translation, sum and tower laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    /// `cm(λX|h) = λ cm(X|h)`.
    pub scale: bool,
    /// `cm(X + {η}|h) = cm(X|h) + η`.
    pub translation: bool,
    /// `cm(X|h) + cm(Y|h) ⊆ cm(X+Y|h)`.
    pub core_superadditive: bool,
    /// The inclusion above is strict somewhere.
    pub core_superadditive_strict: bool,
    /// `CM(X+Y|h) ⊆ CM(X|h) + CM(Y|h)`.
    pub hull_subadditive: bool,
    pub tower_core: bool,
    pub tower_hull: bool,
    pub tower_expectation: bool,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.scale
            && self.translation
            && self.core_superadditive
            && self.hull_subadditive
            && self.tower_core
            && self.tower_hull
            && self.tower_expectation
    }
}

/// Checks the algebraic laws of the conditional operators. `lambda` and
/// `eta` must be h-measurable; `coarse` must be coarser than `h`.
pub fn scale_and_sum_laws(
    x: &RandomPolyhedron,
    y: &RandomPolyhedron,
    lambda: &RandomScalar,
    eta: &RandomVector,
    h: &Partition,
    coarse: &Partition,
) -> Result<LawReport> {
    check_partition(x, h)?;
    let lambda: Vec<Rat> = lambda
        .values()
        .iter()
        .map(|v| v.as_finite().cloned().ok_or(Error::NotFinite("lambda")))
        .collect::<Result<_>>()?;
    if !h.is_measurable(&lambda) {
        return Err(Error::NotMeasurable("lambda"));
    }
    if !h.is_measurable(eta.values()) {
        return Err(Error::NotMeasurable("eta"));
    }
    if !h.refines(coarse)? {
        return Err(Error::NotCoarser);
    }

    let core_x = cond_core(x, h)?;
    let scale = cond_core(&x.scale_by(&lambda)?, h)? == core_x.scale_by(&lambda)?;

    let shift = RandomPolyhedron::singletons(x.space.clone(), eta)?;
    let translation = cond_core(&x.minkowski_sum(&shift)?, h)? == core_x.minkowski_sum(&shift)?;

    let sum = x.minkowski_sum(y)?;
    let core_sum = cond_core(&sum, h)?;
    let sum_of_cores = core_x.minkowski_sum(&cond_core(y, h)?)?;
    let core_superadditive = core_sum.contains(&sum_of_cores)?;
    let core_superadditive_strict = core_superadditive && core_sum != sum_of_cores;

    let hull_subadditive = cond_hull(x, h)?
        .minkowski_sum(&cond_hull(y, h)?)?
        .contains(&cond_hull(&sum, h)?)?;

    let tower_core = cond_core(&core_x, coarse)? == cond_core(x, coarse)?;
    let tower_hull = cond_hull(&cond_hull(x, h)?, coarse)? == cond_hull(x, coarse)?;
    let tower_expectation =
        cond_expectation(&cond_expectation(x, h)?, coarse)? == cond_expectation(x, coarse)?;

    Ok(LawReport {
        scale,
        translation,
        core_superadditive,
        core_superadditive_strict,
        hull_subadditive,
        tower_core,
        tower_hull,
        tower_expectation,
    })
}

/// Restriction of every value to the box `[-n, n]^d`.
pub fn truncate(x: &RandomPolyhedron, n: &Rat) -> Result<RandomPolyhedron> {
    let d = x.dim;
    let mut cube = Vec::with_capacity(2 * d);
    for i in 0..d {
        let e = crate::rational::unit(d, i);
        cube.push(Halfspace::new(crate::rational::neg(&e), n.clone()));
        cube.push(Halfspace::new(e, n.clone()));
    }
    let cube = Polyhedron::from_hrep(d, cube)?;
    x.map(|p| p.intersect(&cube))
}

/// Largest absolute vertex coordinate over all values (one if all empty).
pub fn max_coordinate(x: &RandomPolyhedron) -> Rat {
    x.sets
        .iter()
        .flat_map(|p| p.vertices().iter().flatten())
        .map(|c| if c < &Rat::zero() { -c.clone() } else { c.clone() })
        .max()
        .unwrap_or_else(Rat::one)
}
