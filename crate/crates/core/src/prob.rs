//! Finite probability spaces, partitions standing in for sub-σ-algebras, and
//! conditional extrema and expectations of random variables.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::{Halfspace, Polyhedron};
use crate::rational::{format_rat, scaled, unit, zeros, ExtRat, Rat, Vector};

/// Sample space `{0, .., n-1}` with strictly positive rational masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    probs: Vec<Rat>,
}

impl FiniteSpace {
    pub fn new(probs: Vec<Rat>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some(index) = probs.iter().position(|p| !p.is_positive()) {
            return Err(Error::NonPositiveProbability { index });
        }
        let sum: Rat = probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotNormalized {
                sum: format_rat(&sum),
            });
        }
        Ok(FiniteSpace { probs })
    }

    pub fn uniform(n: usize) -> Self {
        let p = Rat::new(1.into(), (n as i64).into());
        FiniteSpace::new(vec![p; n]).expect("uniform masses are valid")
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> &Rat {
        &self.probs[i]
    }

    pub fn mass(&self, atom: &[usize]) -> Rat {
        atom.iter().map(|&i| &self.probs[i]).sum()
    }

    pub fn min_prob(&self) -> &Rat {
        self.probs.iter().min().expect("space is nonempty")
    }
}

/// Partition of the index set into atoms. Atoms are kept sorted, and ordered
/// by their smallest element, so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    atoms: Vec<Vec<usize>>,
    atom_of: Vec<usize>,
}

impl Partition {
    pub fn new(size: usize, atoms: Vec<Vec<usize>>) -> Result<Self> {
        let mut atom_of = vec![usize::MAX; size];
        let mut atoms: Vec<Vec<usize>> = atoms
            .into_iter()
            .map(|mut a| {
                a.sort_unstable();
                a
            })
            .collect();
        atoms.sort();
        for (k, atom) in atoms.iter().enumerate() {
            if atom.is_empty() {
                return Err(Error::NotAPartition("empty atom".into()));
            }
            for &i in atom {
                if i >= size {
                    return Err(Error::NotAPartition(format!("index {i} out of range")));
                }
                if atom_of[i] != usize::MAX {
                    return Err(Error::NotAPartition(format!("index {i} in two atoms")));
                }
                atom_of[i] = k;
            }
        }
        if let Some(i) = atom_of.iter().position(|&a| a == usize::MAX) {
            return Err(Error::NotAPartition(format!("index {i} not covered")));
        }
        Ok(Partition { atoms, atom_of })
    }

    pub fn trivial(size: usize) -> Self {
        Partition::new(size, vec![(0..size).collect()]).expect("valid")
    }

    pub fn discrete(size: usize) -> Self {
        Partition::new(size, (0..size).map(|i| vec![i]).collect()).expect("valid")
    }

    pub fn size(&self) -> usize {
        self.atom_of.len()
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn atom_of(&self, i: usize) -> usize {
        self.atom_of[i]
    }

    /// True iff every atom of `self` lies inside one atom of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> Result<bool> {
        if self.size() != coarse.size() {
            return Err(Error::GroundSetMismatch {
                left: self.size(),
                right: coarse.size(),
            });
        }
        Ok(self.atoms.iter().all(|a| {
            let k = coarse.atom_of(a[0]);
            a.iter().all(|&i| coarse.atom_of(i) == k)
        }))
    }

    /// Whether `values` is constant on every atom.
    pub fn is_measurable<T: PartialEq>(&self, values: &[T]) -> bool {
        self.atoms
            .iter()
            .all(|a| a.iter().all(|&i| values[i] == values[a[0]]))
    }

    /// Spreads one value per atom back onto the sample points.
    pub fn broadcast<T: Clone>(&self, per_atom: &[T]) -> Vec<T> {
        self.atom_of.iter().map(|&k| per_atom[k].clone()).collect()
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n != self.size() {
            return Err(Error::LengthMismatch {
                expected: self.size(),
                found: n,
            });
        }
        Ok(())
    }
}

/// Extended-real random variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomScalar(pub Vec<ExtRat>);

impl RandomScalar {
    pub fn finite(values: Vec<Rat>) -> Self {
        RandomScalar(values.into_iter().map(ExtRat::Finite).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.0
    }
}

/// Random vector in `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomVector {
    dim: usize,
    values: Vec<Vector>,
}

impl RandomVector {
    pub fn new(values: Vec<Vector>) -> Result<Self> {
        let dim = values.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(v) = values.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        Ok(RandomVector { dim, values })
    }

    pub fn constant(n: usize, v: Vector) -> Self {
        RandomVector::new(vec![v; n]).expect("nonempty constant vector")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }
}

fn atomwise<F>(x: &RandomScalar, h: &Partition, pick: F) -> Result<RandomScalar>
where
    F: Fn(&[usize]) -> ExtRat,
{
    h.check_size(x.len())?;
    let per_atom: Vec<ExtRat> = h.atoms().iter().map(|a| pick(a)).collect();
    Ok(RandomScalar(h.broadcast(&per_atom)))
}

/// Conditional essential supremum: the atom-wise maximum.
pub fn cond_esssup(x: &RandomScalar, h: &Partition) -> Result<RandomScalar> {
    atomwise(x, h, |a| {
        a.iter()
            .map(|&i| x.0[i].clone())
            .max()
            .expect("atoms are nonempty")
    })
}

/// Conditional essential infimum: the atom-wise minimum.
pub fn cond_essinf(x: &RandomScalar, h: &Partition) -> Result<RandomScalar> {
    atomwise(x, h, |a| {
        a.iter()
            .map(|&i| x.0[i].clone())
            .min()
            .expect("atoms are nonempty")
    })
}

/// Conditional expectation of a random vector.
///
/// On a finite space with positive masses the generalised conditional
/// expectation coincides with the ordinary one, so this serves for both.
pub fn cond_expect(x: &RandomVector, h: &Partition, space: &FiniteSpace) -> Result<RandomVector> {
    h.check_size(x.len())?;
    h.check_size(space.len())?;
    let per_atom: Vec<Vector> = h
        .atoms()
        .iter()
        .map(|a| {
            let mass = space.mass(a);
            let mut acc = zeros(x.dim());
            for &i in a {
                for (s, v) in acc.iter_mut().zip(&x.values[i]) {
                    *s += space.prob(i) * v;
                }
            }
            scaled(&acc, &mass.recip())
        })
        .collect();
    RandomVector::new(h.broadcast(&per_atom))
}

/// Generalised conditional expectation computed from its localised
/// definition `sum_i E(x 1_{A_i} | h) 1_{A_i}`.
pub fn cond_expect_generalised(x: &RandomVector, h: &Partition, space: &FiniteSpace) -> Result<RandomVector> {
    h.check_size(x.len())?;
    let n = x.len();
    let mut out = vec![zeros(x.dim()); n];
    for atom in h.atoms() {
        let truncated: Vec<Vector> = (0..n)
            .map(|i| {
                if atom.contains(&i) {
                    x.values[i].clone()
                } else {
                    zeros(x.dim())
                }
            })
            .collect();
        let e = cond_expect(&RandomVector::new(truncated)?, h, space)?;
        for &i in atom {
            out[i] = e.values[i].clone();
        }
    }
    RandomVector::new(out)
}

/// Conditional expectation of an extended scalar under the measure with
/// masses `q` (nonnegative, summing to one). Atoms of zero `q`-mass give
/// `None`; null points are skipped inside an atom.
pub fn cond_expect_under(q: &[Rat], x: &RandomScalar, h: &Partition) -> Result<Vec<Option<ExtRat>>> {
    h.check_size(x.len())?;
    h.check_size(q.len())?;
    let per_atom: Vec<Option<ExtRat>> = h
        .atoms()
        .iter()
        .map(|a| {
            let mass: Rat = a.iter().map(|&i| &q[i]).sum();
            if mass.is_zero() {
                return Ok(None);
            }
            let mut acc = ExtRat::Finite(Rat::zero());
            for &i in a.iter().filter(|&&i| !q[i].is_zero()) {
                acc = acc.checked_add(&x.0[i].scale_positive(&(&q[i] / &mass)))?;
            }
            Ok(Some(acc))
        })
        .collect::<Result<_>>()?;
    Ok(h.broadcast(&per_atom))
}

/// Conditional expectation of an extended scalar under the base measure.
pub fn cond_expect_scalar(x: &RandomScalar, h: &Partition, space: &FiniteSpace) -> Result<RandomScalar> {
    let v = cond_expect_under(space.probs(), x, h)?;
    Ok(RandomScalar(
        v.into_iter()
            .map(|e| e.expect("base measure charges every atom"))
            .collect(),
    ))
}

/// Probability measures `Q` with `dQ/dP <= 1/alpha`, described by the
/// vertices of the polytope `{q : 0 <= q <= p/alpha, sum q = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureFamily {
    base: FiniteSpace,
    bound: Rat,
    extremes: Vec<Vector>,
}

impl MeasureFamily {
    pub fn base(&self) -> &FiniteSpace {
        &self.base
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    pub fn extremes(&self) -> &[Vector] {
        &self.extremes
    }

    /// Extreme measures charging `atom`, restricted to it and renormalised.
    /// Their convex hull is exactly the set of conditional laws on `atom` of
    /// members of the family that charge it.
    pub fn conditional_extremes(&self, atom: &[usize]) -> Vec<Vector> {
        let mut out: Vec<Vector> = self
            .extremes
            .iter()
            .filter_map(|q| {
                let mass: Rat = atom.iter().map(|&i| &q[i]).sum();
                (!mass.is_zero()).then(|| atom.iter().map(|&i| &q[i] / &mass).collect())
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn density_bounded_family(space: &FiniteSpace, alpha: &Rat) -> Result<MeasureFamily> {
    if !alpha.is_positive() || *alpha > Rat::one() {
        return Err(Error::InvalidAlpha(format_rat(alpha)));
    }
    let n = space.len();
    let mut ineqs = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = unit(n, i);
        ineqs.push(Halfspace::new(scaled(&e, &-Rat::one()), Rat::zero()));
        ineqs.push(Halfspace::new(e, space.prob(i) / alpha));
    }
    let total = Halfspace::new(vec![Rat::one(); n], Rat::one());
    let polytope = Polyhedron::from_constraints(n, ineqs, vec![total])?;
    Ok(MeasureFamily {
        base: space.clone(),
        bound: alpha.clone(),
        extremes: polytope.vertices().to_vec(),
    })
}

/// Conditional supremum recomputed as the pointwise supremum of conditional
/// expectations under the measures that put all of each atom's mass on one
/// of its points.
pub fn esssup_via_measures(x: &RandomScalar, h: &Partition, space: &FiniteSpace) -> Result<RandomScalar> {
    h.check_size(x.len())?;
    h.check_size(space.len())?;
    let atoms = h.atoms();
    let mut choice = vec![0usize; atoms.len()];
    let mut best: Option<Vec<ExtRat>> = None;
    loop {
        let mut q = vec![Rat::zero(); space.len()];
        for (a, &c) in atoms.iter().zip(&choice) {
            q[a[c]] = space.mass(a);
        }
        let e: Vec<ExtRat> = cond_expect_under(&q, x, h)?
            .into_iter()
            .map(|v| v.expect("every atom is charged"))
            .collect();
        best = Some(match best {
            None => e,
            Some(b) => b.into_iter().zip(e).map(|(u, v)| u.max(v)).collect(),
        });
        // odometer over one point per atom
        let mut k = 0;
        loop {
            if k == atoms.len() {
                return Ok(RandomScalar(best.expect("at least one measure")));
            }
            choice[k] += 1;
            if choice[k] < atoms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, rat};

    fn scalars(xs: &[i64]) -> RandomScalar {
        RandomScalar::finite(xs.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn space_validation() {
        assert_eq!(FiniteSpace::new(vec![rat(1, 2), rat(1, 2)]).unwrap().len(), 2);
        assert_eq!(FiniteSpace::new(vec![rat(1, 3); 3]).unwrap().len(), 3);
        assert_eq!(
            FiniteSpace::new(vec![rat(1, 2), rat(1, 2), int(0)]),
            Err(Error::NonPositiveProbability { index: 2 })
        );
        assert!(matches!(
            FiniteSpace::new(vec![rat(1, 2), rat(2, 5)]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(FiniteSpace::new(vec![]), Err(Error::EmptySpace));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(4, vec![vec![0, 1], vec![2, 3]]).is_ok());
        assert_eq!(
            Partition::new(3, vec![vec![0], vec![1], vec![2]]).unwrap(),
            Partition::discrete(3)
        );
        assert!(matches!(
            Partition::new(3, vec![vec![0, 1], vec![1, 2]]),
            Err(Error::NotAPartition(_))
        ));
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn refinement() {
        assert!(Partition::discrete(4).refines(&Partition::trivial(4)).unwrap());
        let h = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(h.refines(&Partition::trivial(4)).unwrap());
        let g = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!g.refines(&h).unwrap());
        assert!(Partition::trivial(3).refines(&Partition::trivial(4)).is_err());
    }

    #[test]
    fn essential_extrema() {
        let x = scalars(&[1, 3, 2, 5]);
        let h = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(cond_esssup(&x, &h).unwrap(), scalars(&[3, 3, 5, 5]));
        assert_eq!(cond_essinf(&x, &h).unwrap(), scalars(&[1, 1, 2, 2]));
        assert_eq!(cond_esssup(&x, &Partition::discrete(4)).unwrap(), x);
        assert_eq!(cond_esssup(&x, &Partition::trivial(4)).unwrap(), scalars(&[5; 4]));
        let inf = RandomScalar(vec![ExtRat::PosInf, ExtRat::from(int(1))]);
        assert_eq!(
            cond_esssup(&inf, &Partition::trivial(2)).unwrap().0,
            vec![ExtRat::PosInf; 2]
        );
    }

    #[test]
    fn conditional_expectations() {
        let space = FiniteSpace::uniform(2);
        let x = RandomVector::new(vec![ivec(&[1]), ivec(&[3])]).unwrap();
        let e = cond_expect(&x, &Partition::trivial(2), &space).unwrap();
        assert_eq!(e.values(), &[ivec(&[2]), ivec(&[2])]);
        assert_eq!(cond_expect(&x, &Partition::discrete(2), &space).unwrap(), x);

        let space = FiniteSpace::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let x = RandomVector::new(vec![ivec(&[0, 0]), ivec(&[2, 0]), ivec(&[1, 3])]).unwrap();
        let e = cond_expect(&x, &Partition::trivial(3), &space).unwrap();
        // summation oracle, written out term by term
        let oracle = vec![
            rat(1, 2) * int(0) + rat(1, 4) * int(2) + rat(1, 4) * int(1),
            rat(1, 2) * int(0) + rat(1, 4) * int(0) + rat(1, 4) * int(3),
        ];
        assert_eq!(oracle, vec![rat(3, 4), rat(3, 4)]);
        assert!(e.values().iter().all(|v| *v == oracle));
    }

    #[test]
    fn extended_expectation_rejects_mixed_infinities() {
        let space = FiniteSpace::uniform(2);
        let x = RandomScalar(vec![ExtRat::PosInf, ExtRat::NegInf]);
        assert_eq!(
            cond_expect_scalar(&x, &Partition::trivial(2), &space),
            Err(Error::UndefinedExtendedSum)
        );
        let y = RandomScalar(vec![ExtRat::PosInf, ExtRat::from(int(4))]);
        assert_eq!(
            cond_expect_scalar(&y, &Partition::trivial(2), &space).unwrap().0,
            vec![ExtRat::PosInf; 2]
        );
    }

    #[test]
    fn density_families() {
        let space = FiniteSpace::uniform(2);
        let f = density_bounded_family(&space, &int(1)).unwrap();
        assert_eq!(f.extremes(), &[vec![rat(1, 2), rat(1, 2)]]);
        let f = density_bounded_family(&space, &rat(2, 3)).unwrap();
        assert_eq!(
            f.extremes(),
            &[vec![rat(1, 4), rat(3, 4)], vec![rat(3, 4), rat(1, 4)]]
        );
        let space = FiniteSpace::new(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let f = density_bounded_family(&space, &rat(1, 6)).unwrap();
        for i in 0..3 {
            assert!(f.extremes().contains(&unit(3, i)));
        }
        assert!(matches!(
            density_bounded_family(&space, &int(0)),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(density_bounded_family(&space, &rat(3, 2)).is_err());
    }

    #[test]
    fn esssup_by_measures() {
        let space = FiniteSpace::uniform(2);
        let x = scalars(&[1, 3]);
        assert_eq!(
            esssup_via_measures(&x, &Partition::trivial(2), &space).unwrap(),
            scalars(&[3, 3])
        );
        let c = scalars(&[4, 4]);
        assert_eq!(
            esssup_via_measures(&c, &Partition::trivial(2), &space).unwrap(),
            c
        );
        let space = FiniteSpace::uniform(4);
        let h = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let x = scalars(&[1, 3, 2, 5]);
        assert_eq!(
            esssup_via_measures(&x, &h, &space).unwrap(),
            scalars(&[3, 3, 5, 5])
        );
    }
}
