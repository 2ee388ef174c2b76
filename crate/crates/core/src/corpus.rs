//! Seeded generators of random spaces, partitions and polyhedral random sets
//! with small integer data, for randomized identity checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Polyhedron;
use crate::prob::{FiniteSpace, Partition, RandomVector};
use crate::randset::RandomPolyhedron;
use crate::rational::{int, Rat, Vector};

pub struct Generator {
    rng: ChaCha8Rng,
}

/// One randomized test case: a random set, a conditioning partition and a
/// coarser one.
#[derive(Clone, Debug)]
pub struct Instance {
    pub x: RandomPolyhedron,
    pub h: Partition,
    pub coarse: Partition,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn space(&mut self, n: usize) -> FiniteSpace {
        let w: Vec<i64> = (0..n).map(|_| self.int_in(1, 6)).collect();
        let total: i64 = w.iter().sum();
        FiniteSpace::new(w.iter().map(|&x| Rat::new(x.into(), total.into())).collect())
            .expect("positive weights normalised")
    }

    pub fn partition(&mut self, n: usize) -> Partition {
        let k = self.int_in(1, n as i64) as usize;
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut self.rng);
        let mut atoms: Vec<Vec<usize>> = idx[..k].iter().map(|&i| vec![i]).collect();
        for &i in &idx[k..] {
            let a = self.rng.gen_range(0..k);
            atoms[a].push(i);
        }
        Partition::new(n, atoms).expect("valid by construction")
    }

    /// Random partition coarser than `h`, built by merging its atoms.
    pub fn coarsening(&mut self, h: &Partition) -> Partition {
        let k = h.atoms().len();
        let groups = self.int_in(1, k as i64) as usize;
        let mut merged: Vec<Vec<usize>> = vec![Vec::new(); groups];
        for (j, atom) in h.atoms().iter().enumerate() {
            let g = if j < groups {
                j
            } else {
                self.rng.gen_range(0..groups)
            };
            merged[g].extend(atom);
        }
        Partition::new(h.size(), merged).expect("merged atoms partition the points")
    }

    pub fn point(&mut self, d: usize, r: i64) -> Vector {
        (0..d).map(|_| int(self.int_in(-r, r))).collect()
    }

    pub fn nonzero(&mut self, d: usize, r: i64) -> Vector {
        loop {
            let v = self.point(d, r);
            if v.iter().any(|x| x != &int(0)) {
                return v;
            }
        }
    }

    /// Convex hull of up to `max_points` random lattice points, optionally
    /// through a prescribed point.
    pub fn polytope(&mut self, d: usize, max_points: usize, through: Option<&Vector>) -> Polyhedron {
        let n = self.int_in(1, max_points as i64) as usize;
        let mut pts: Vec<Vector> = (0..n).map(|_| self.point(d, 4)).collect();
        if let Some(p) = through {
            pts.push(p.clone());
        }
        Polyhedron::from_vrep(d, pts, vec![]).expect("consistent dimensions")
    }

    /// Possibly unbounded polyhedron with at most `max_generators` generators.
    pub fn polyhedron(&mut self, d: usize, max_generators: usize) -> Polyhedron {
        let total = self.int_in(1, max_generators as i64) as usize;
        let nv = self.int_in(1, total as i64) as usize;
        let vertices = (0..nv).map(|_| self.point(d, 4)).collect();
        let rays = (nv..total).map(|_| self.nonzero(d, 2)).collect();
        Polyhedron::from_vrep(d, vertices, rays).expect("consistent dimensions")
    }

    /// Polyhedral cone on up to four random generators.
    pub fn cone(&mut self, d: usize) -> Polyhedron {
        let n = self.int_in(1, 4) as usize;
        let rays = (0..n).map(|_| self.nonzero(d, 3)).collect();
        Polyhedron::from_vrep(d, vec![vec![int(0); d]], rays).expect("consistent dimensions")
    }

    /// Bounded random set on a space of `2..=max_points` points in dimension
    /// `d`. With `common_point`, all values share one point, so every
    /// conditional core is nonempty.
    pub fn bounded_instance(&mut self, d: usize, max_points: usize, common_point: bool) -> Instance {
        let n = self.int_in(2, max_points as i64) as usize;
        let space = self.space(n);
        let shared = common_point.then(|| self.point(d, 2));
        let sets = (0..n).map(|_| self.polytope(d, 4, shared.as_ref())).collect();
        let x = RandomPolyhedron::new(space, sets).expect("uniform dimension");
        let h = self.partition(n);
        let coarse = self.coarsening(&h);
        Instance { x, h, coarse }
    }

    pub fn cone_instance(&mut self, d: usize, max_points: usize) -> Instance {
        let n = self.int_in(2, max_points as i64) as usize;
        let space = self.space(n);
        let sets = (0..n).map(|_| self.cone(d)).collect();
        let x = RandomPolyhedron::new(space, sets).expect("uniform dimension");
        let h = self.partition(n);
        let coarse = self.coarsening(&h);
        Instance { x, h, coarse }
    }

    /// h-measurable random direction with small integer coordinates.
    pub fn measurable_direction(&mut self, h: &Partition, d: usize) -> RandomVector {
        let per_atom: Vec<Vector> = h.atoms().iter().map(|_| self.point(d, 3)).collect();
        RandomVector::new(h.broadcast(&per_atom)).expect("nonempty")
    }

    /// h-measurable random scalar with nonzero small integer values.
    pub fn measurable_multiplier(&mut self, h: &Partition) -> Vec<Rat> {
        let per_atom: Vec<Rat> = h
            .atoms()
            .iter()
            .map(|_| {
                let v = self.int_in(-3, 3);
                int(if v == 0 { 2 } else { v })
            })
            .collect();
        h.broadcast(&per_atom)
    }

    /// Any rational in `(0, 1]` with a small denominator.
    pub fn alpha(&mut self) -> Rat {
        let den = self.int_in(1, 6);
        let num = self.int_in(1, den);
        Rat::new(num.into(), den.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = Generator::new(3).bounded_instance(2, 6, false);
        let b = Generator::new(3).bounded_instance(2, 6, false);
        assert_eq!(a.x, b.x);
        assert_eq!(a.h, b.h);
    }

    #[test]
    fn coarsening_is_coarser() {
        let mut g = Generator::new(11);
        for _ in 0..50 {
            let h = g.partition(6);
            let c = g.coarsening(&h);
            assert!(h.refines(&c).unwrap());
        }
    }

    #[test]
    fn common_point_gives_nonempty_core() {
        let mut g = Generator::new(5);
        for _ in 0..20 {
            let inst = g.bounded_instance(2, 5, true);
            let core = crate::randset::cond_core(&inst.x, &inst.h).unwrap();
            assert!(core.sets().iter().all(|p| !p.is_empty()));
        }
    }
}
