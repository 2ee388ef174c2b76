//! Exact rational polyhedra with both representations kept in canonical form.
//!
//! A nonempty polyhedron is stored as
//!
//! * `lines`: a basis of its lineality space, in reduced row echelon form,
//! * `vertices` and `rays`: vertices and extreme rays of its intersection with
//!   the orthogonal complement of the lineality space (unique for the set),
//! * `equalities`: its affine hull, as an echelon basis scaled to coprime
//!   integer normals,
//! * `inequalities`: one facet inequality per facet, with the normal reduced
//!   modulo the equalities and scaled to coprime integers.
//!
//! Every list is sorted, so two polyhedra are equal as sets exactly when they
//! are equal as values.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::dd::{cone_generators, Constraint, InsertionOrder};
use crate::error::{Error, Result};
use crate::linalg::{null_space, project_out, rank, rref};
use crate::rational::{
    add, dot, is_zero, neg, primitive, scaled, to_integer_row, unit, zeros, ExtRat, Rat, Vector,
};

/// The closed halfspace `{x : <normal, x> <= offset}` (or the hyperplane with
/// equality when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) <= self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
    lines: Vec<Vector>,
    equalities: Vec<Halfspace>,
    inequalities: Vec<Halfspace>,
}

fn check_dim(expected: usize, v: &[Rat]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

fn same_dim(p: &Polyhedron, q: &Polyhedron) -> Result<()> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: q.dim,
        });
    }
    Ok(())
}

fn homogenize(head: &Rat, tail: &[Rat]) -> Vec<num_bigint::BigInt> {
    let mut row = Vec::with_capacity(tail.len() + 1);
    row.push(head.clone());
    row.extend_from_slice(tail);
    to_integer_row(&row)
}

fn to_rats(v: &[num_bigint::BigInt]) -> Vector {
    v.iter().cloned().map(Rat::from_integer).collect()
}

impl Polyhedron {
    pub fn empty(dim: usize) -> Self {
        Polyhedron {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
            equalities: Vec::new(),
            inequalities: vec![Halfspace::new(zeros(dim), -Rat::one())],
        }
    }

    /// The whole space `R^dim`.
    pub fn full(dim: usize) -> Self {
        Polyhedron {
            dim,
            vertices: vec![zeros(dim)],
            rays: Vec::new(),
            lines: (0..dim).map(|i| unit(dim, i)).collect(),
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn point(v: Vector) -> Self {
        let dim = v.len();
        Polyhedron::from_generators(dim, vec![v], vec![], vec![]).expect("a single point is well formed")
    }

    /// Builds a polyhedron from vertices and rays. With no vertices the set is
    /// empty.
    pub fn from_vrep(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        Polyhedron::from_generators(dim, vertices, rays, Vec::new())
    }

    /// `conv(vertices) + cone(rays) + span(lines)`.
    pub fn from_generators(
        dim: usize,
        vertices: Vec<Vector>,
        rays: Vec<Vector>,
        lines: Vec<Vector>,
    ) -> Result<Self> {
        Polyhedron::from_generators_ordered(dim, vertices, rays, lines, InsertionOrder::default())
    }

    pub fn from_generators_ordered(
        dim: usize,
        vertices: Vec<Vector>,
        rays: Vec<Vector>,
        lines: Vec<Vector>,
        order: InsertionOrder,
    ) -> Result<Self> {
        for v in vertices.iter().chain(&rays).chain(&lines) {
            check_dim(dim, v)?;
        }
        if rays.iter().chain(&lines).any(|r| is_zero(r)) {
            return Err(Error::ZeroRay);
        }
        Ok(canonical_from_generators(dim, vertices, rays, lines, order))
    }

    /// Builds a polyhedron from halfspaces `<a, x> <= b`.
    pub fn from_hrep(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        Polyhedron::from_constraints(dim, halfspaces, Vec::new())
    }

    /// Builds a polyhedron from inequalities and equations.
    pub fn from_constraints(
        dim: usize,
        inequalities: Vec<Halfspace>,
        equalities: Vec<Halfspace>,
    ) -> Result<Self> {
        Polyhedron::from_constraints_ordered(dim, inequalities, equalities, InsertionOrder::default())
    }

    pub fn from_constraints_ordered(
        dim: usize,
        inequalities: Vec<Halfspace>,
        equalities: Vec<Halfspace>,
        order: InsertionOrder,
    ) -> Result<Self> {
        for h in inequalities.iter().chain(&equalities) {
            check_dim(dim, &h.normal)?;
        }
        // y = (y0, x): y0 >= 0 and b*y0 - <a, x> >= 0 (or = 0)
        let mut cons = vec![Constraint {
            row: homogenize(&Rat::one(), &zeros(dim)),
            equality: false,
        }];
        for (h, equality) in inequalities
            .iter()
            .map(|h| (h, false))
            .chain(equalities.iter().map(|h| (h, true)))
        {
            cons.push(Constraint {
                row: homogenize(&h.offset, &neg(&h.normal)),
                equality,
            });
        }
        let gens = cone_generators(dim + 1, cons, order);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for g in gens.rays {
            let g = to_rats(&g);
            if g[0].is_positive() {
                vertices.push(scaled(&g[1..], &g[0].recip()));
            } else {
                rays.push(g[1..].to_vec());
            }
        }
        let lines = gens.lines.iter().map(|l| to_rats(&l[1..])).collect();
        Ok(canonical_from_generators(dim, vertices, rays, lines, order))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn is_full(&self) -> bool {
        !self.is_empty() && self.lines.len() == self.dim
    }

    /// True for nonempty polyhedra with the origin as their only vertex.
    pub fn is_cone(&self) -> bool {
        self.vertices.len() == 1 && is_zero(&self.vertices[0])
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Extreme rays of the pointed part, without the lineality directions.
    pub fn extreme_rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vector] {
        &self.lines
    }

    /// All ray generators: extreme rays followed by `+l` and `-l` for each
    /// lineality basis vector.
    pub fn rays(&self) -> Vec<Vector> {
        let mut out = self.rays.clone();
        for l in &self.lines {
            out.push(l.clone());
            out.push(neg(l));
        }
        out
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    /// Irredundant halfspace description; every equation contributes two
    /// opposite halfspaces.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let mut out = self.inequalities.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(Halfspace::new(neg(&e.normal), -e.offset.clone()));
        }
        out
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        !self.is_empty()
            && self.inequalities.iter().all(|h| h.contains(x))
            && self.equalities.iter().all(|e| dot(&e.normal, x) == e.offset)
    }

    fn contains_direction(&self, r: &[Rat]) -> bool {
        self.inequalities.iter().all(|h| !dot(&h.normal, r).is_positive())
            && self.equalities.iter().all(|e| dot(&e.normal, r).is_zero())
    }

    /// `sup { <u, x> : x in self }`, `-inf` for the empty set.
    pub fn support(&self, u: &[Rat]) -> Result<ExtRat> {
        check_dim(self.dim, u)?;
        if self.is_empty() {
            return Ok(ExtRat::NegInf);
        }
        if self.lines.iter().any(|l| !dot(l, u).is_zero())
            || self.rays.iter().any(|r| dot(r, u).is_positive())
        {
            return Ok(ExtRat::PosInf);
        }
        let best = self
            .vertices
            .iter()
            .map(|v| dot(v, u))
            .max()
            .expect("nonempty polyhedron has a vertex");
        Ok(ExtRat::Finite(best))
    }

    /// Inclusion `other ⊆ self`.
    pub fn contains(&self, other: &Polyhedron) -> Result<bool> {
        same_dim(self, other)?;
        if other.is_empty() {
            return Ok(true);
        }
        if self.is_empty() {
            return Ok(false);
        }
        Ok(other.vertices.iter().all(|v| self.contains_point(v))
            && other.rays.iter().all(|r| self.contains_direction(r))
            && other
                .lines
                .iter()
                .all(|l| self.contains_direction(l) && self.contains_direction(&neg(l))))
    }

    pub fn equals(&self, other: &Polyhedron) -> Result<bool> {
        same_dim(self, other)?;
        Ok(self == other)
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        same_dim(self, other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let vertices = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| add(a, b)))
            .collect();
        let rays = self.rays.iter().chain(&other.rays).cloned().collect();
        let lines = self.lines.iter().chain(&other.lines).cloned().collect();
        Ok(canonical_from_generators(
            self.dim,
            vertices,
            rays,
            lines,
            InsertionOrder::default(),
        ))
    }

    /// `λ·P`; `0·P = {0}` for nonempty `P`.
    pub fn scale(&self, lambda: &Rat) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        if lambda.is_zero() {
            return Polyhedron::point(zeros(self.dim));
        }
        let vertices = self.vertices.iter().map(|v| scaled(v, lambda)).collect();
        let rays = if lambda.is_positive() {
            self.rays.clone()
        } else {
            self.rays.iter().map(|r| neg(r)).collect()
        };
        canonical_from_generators(
            self.dim,
            vertices,
            rays,
            self.lines.clone(),
            InsertionOrder::default(),
        )
    }

    pub fn translate(&self, v: &[Rat]) -> Result<Polyhedron> {
        check_dim(self.dim, v)?;
        self.minkowski_sum(&Polyhedron::point(v.to_vec()))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        same_dim(self, other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let ineqs = self
            .inequalities
            .iter()
            .chain(&other.inequalities)
            .cloned()
            .collect();
        let eqs = self.equalities.iter().chain(&other.equalities).cloned().collect();
        Polyhedron::from_constraints(self.dim, ineqs, eqs)
    }

    /// Closed convex hull of the union.
    pub fn convex_union(&self, other: &Polyhedron) -> Result<Polyhedron> {
        same_dim(self, other)?;
        Polyhedron::convex_union_all(self.dim, [self, other])
    }

    /// Closed convex hull of the union of any number of polyhedra.
    pub fn convex_union_all<'a>(
        dim: usize,
        sets: impl IntoIterator<Item = &'a Polyhedron>,
    ) -> Result<Polyhedron> {
        let (mut vertices, mut rays, mut lines) = (Vec::new(), Vec::new(), Vec::new());
        for p in sets {
            if p.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim,
                });
            }
            vertices.extend_from_slice(&p.vertices);
            rays.extend_from_slice(&p.rays);
            lines.extend_from_slice(&p.lines);
        }
        Ok(canonical_from_generators(
            dim,
            vertices,
            rays,
            lines,
            InsertionOrder::default(),
        ))
    }

    /// Intersection of any number of polyhedra, converted once.
    pub fn intersect_all<'a>(
        dim: usize,
        sets: impl IntoIterator<Item = &'a Polyhedron>,
    ) -> Result<Polyhedron> {
        let (mut ineqs, mut eqs) = (Vec::new(), Vec::new());
        for p in sets {
            if p.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim,
                });
            }
            if p.is_empty() {
                return Ok(Polyhedron::empty(dim));
            }
            ineqs.extend_from_slice(&p.inequalities);
            eqs.extend_from_slice(&p.equalities);
        }
        Polyhedron::from_constraints(dim, ineqs, eqs)
    }

    /// `{u : h_P(u) <= 1}`.
    pub fn polar(&self) -> Polyhedron {
        let mut ineqs: Vec<Halfspace> = self
            .vertices
            .iter()
            .map(|v| Halfspace::new(v.clone(), Rat::one()))
            .collect();
        ineqs.extend(self.rays.iter().map(|r| Halfspace::new(r.clone(), Rat::zero())));
        let eqs = self
            .lines
            .iter()
            .map(|l| Halfspace::new(l.clone(), Rat::zero()))
            .collect();
        Polyhedron::from_constraints(self.dim, ineqs, eqs).expect("dimensions agree")
    }

    /// Positive dual cone `{u : <u, x> >= 0 for all x in K}`.
    pub fn dual_cone(&self) -> Result<Polyhedron> {
        if !self.is_cone() {
            return Err(Error::NotACone);
        }
        let ineqs = self
            .rays
            .iter()
            .map(|g| Halfspace::new(neg(g), Rat::zero()))
            .collect();
        let eqs = self
            .lines
            .iter()
            .map(|l| Halfspace::new(l.clone(), Rat::zero()))
            .collect();
        Polyhedron::from_constraints(self.dim, ineqs, eqs)
    }

    /// `{(t, t·x) : t >= 0, x in P}` in dimension `dim + 1`.
    pub fn lift_cone(&self) -> Result<Polyhedron> {
        if self.is_empty() {
            return Err(Error::Empty);
        }
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let rays = self
            .vertices
            .iter()
            .map(|v| {
                let mut r = vec![Rat::one()];
                r.extend_from_slice(v);
                r
            })
            .collect();
        Polyhedron::from_generators(self.dim + 1, vec![zeros(self.dim + 1)], rays, vec![])
    }

    /// Cross-section `{x : (1, x) in self}` of a cone in dimension `dim`.
    pub fn slice_at_one(&self) -> Polyhedron {
        let d = self.dim - 1;
        let mut eqs: Vec<Halfspace> = Vec::new();
        let mut ineqs: Vec<Halfspace> = Vec::new();
        for h in &self.inequalities {
            ineqs.push(Halfspace::new(h.normal[1..].to_vec(), &h.offset - &h.normal[0]));
        }
        for e in &self.equalities {
            eqs.push(Halfspace::new(e.normal[1..].to_vec(), &e.offset - &e.normal[0]));
        }
        if self.is_empty() {
            return Polyhedron::empty(d);
        }
        // Equations with zero normal either hold trivially or make the slice empty.
        if ineqs.iter().any(|h| is_zero(&h.normal) && h.offset.is_negative())
            || eqs.iter().any(|e| is_zero(&e.normal) && !e.offset.is_zero())
        {
            return Polyhedron::empty(d);
        }
        ineqs.retain(|h| !is_zero(&h.normal));
        eqs.retain(|e| !is_zero(&e.normal));
        Polyhedron::from_constraints(d, ineqs, eqs).expect("dimensions agree")
    }

    /// Epigraph of the support function, `{(u, t) : h_P(u) <= t}` in
    /// dimension `dim + 1`. For the empty set this is the whole space.
    pub fn epigraph_cone(&self) -> Polyhedron {
        let d = self.dim;
        if self.is_empty() {
            return Polyhedron::full(d + 1);
        }
        let with_t = |a: &[Rat], t: Rat| {
            let mut v = a.to_vec();
            v.push(t);
            v
        };
        let mut ineqs: Vec<Halfspace> = self
            .vertices
            .iter()
            .map(|v| Halfspace::new(with_t(v, -Rat::one()), Rat::zero()))
            .collect();
        ineqs.extend(
            self.rays
                .iter()
                .map(|r| Halfspace::new(with_t(r, Rat::zero()), Rat::zero())),
        );
        let eqs = self
            .lines
            .iter()
            .map(|l| Halfspace::new(with_t(l, Rat::zero()), Rat::zero()))
            .collect();
        Polyhedron::from_constraints(d + 1, ineqs, eqs).expect("dimensions agree")
    }
}

fn cmp_vec(a: &Vector, b: &Vector) -> Ordering {
    a.cmp(b)
}

/// Canonical form from any generating system. Runs one dual conversion for
/// the facets, then keeps only the generators that are extreme.
fn canonical_from_generators(
    dim: usize,
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
    lines: Vec<Vector>,
    order: InsertionOrder,
) -> Polyhedron {
    if vertices.is_empty() {
        return Polyhedron::empty(dim);
    }
    // (beta, alpha) with beta*t + <alpha, x> >= 0 on the homogenized cone.
    let mut cons = Vec::new();
    for v in &vertices {
        cons.push(Constraint {
            row: homogenize(&Rat::one(), v),
            equality: false,
        });
    }
    for r in &rays {
        cons.push(Constraint {
            row: homogenize(&Rat::zero(), r),
            equality: false,
        });
    }
    for l in &lines {
        cons.push(Constraint {
            row: homogenize(&Rat::zero(), l),
            equality: true,
        });
    }
    let dual = cone_generators(dim + 1, cons, order);
    // -<alpha, x> <= beta
    let as_halfspace = |g: &[num_bigint::BigInt]| {
        let g = to_rats(g);
        Halfspace::new(neg(&g[1..]), g[0].clone())
    };
    let equalities: Vec<Halfspace> = dual.lines.iter().map(|g| as_halfspace(g)).collect();
    let inequalities: Vec<Halfspace> = dual.rays.iter().map(|g| as_halfspace(g)).collect();
    finalize(dim, equalities, inequalities, vertices, rays)
}

fn finalize(
    dim: usize,
    equalities: Vec<Halfspace>,
    inequalities: Vec<Halfspace>,
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
) -> Polyhedron {
    // Affine hull: echelon form of [a | b], then primitive integer rows.
    let aug: Vec<Vector> = equalities
        .iter()
        .map(|e| {
            let mut row = e.normal.clone();
            row.push(e.offset.clone());
            row
        })
        .collect();
    let equalities: Vec<Halfspace> = rref(&aug)
        .into_iter()
        .map(|row| {
            let row = primitive(&row);
            Halfspace::new(row[..dim].to_vec(), row[dim].clone())
        })
        .collect();
    let eq_pivots: Vec<usize> = equalities
        .iter()
        .map(|e| {
            e.normal
                .iter()
                .position(|x| !x.is_zero())
                .expect("consistent affine hull")
        })
        .collect();

    let mut facets: Vec<Halfspace> = Vec::new();
    for h in inequalities {
        let mut row = h.normal.clone();
        row.push(h.offset.clone());
        for (e, &p) in equalities.iter().zip(&eq_pivots) {
            if !row[p].is_zero() {
                let f = &row[p] / &e.normal[p];
                for (i, x) in row.iter_mut().enumerate().take(dim) {
                    *x -= &f * &e.normal[i];
                }
                row[dim] -= &f * &e.offset;
            }
        }
        if is_zero(&row[..dim]) {
            continue;
        }
        let row = primitive(&row);
        facets.push(Halfspace::new(row[..dim].to_vec(), row[dim].clone()));
    }
    facets.sort();
    facets.dedup();

    let normals: Vec<Vector> = equalities
        .iter()
        .chain(&facets)
        .map(|h| h.normal.clone())
        .collect();
    let lines = null_space(&normals, dim);
    let eq_normals: Vec<Vector> = equalities.iter().map(|e| e.normal.clone()).collect();

    let mut verts: Vec<Vector> = vertices.iter().map(|v| project_out(v, &lines)).collect();
    verts.sort_by(cmp_vec);
    verts.dedup();
    verts.retain(|v| {
        let mut active = eq_normals.clone();
        active.extend(lines.iter().cloned());
        active.extend(
            facets
                .iter()
                .filter(|h| dot(&h.normal, v) == h.offset)
                .map(|h| h.normal.clone()),
        );
        rank(&active) == dim
    });

    let mut extreme: Vec<Vector> = rays
        .iter()
        .map(|r| project_out(r, &lines))
        .filter(|r| !is_zero(r))
        .map(|r| primitive(&r))
        .collect();
    extreme.sort_by(cmp_vec);
    extreme.dedup();
    extreme.retain(|r| {
        let mut active = eq_normals.clone();
        active.extend(lines.iter().cloned());
        active.extend(
            facets
                .iter()
                .filter(|h| dot(&h.normal, r).is_zero())
                .map(|h| h.normal.clone()),
        );
        rank(&active) + 1 == dim
    });

    Polyhedron {
        dim,
        vertices: verts,
        rays: extreme,
        lines,
        equalities,
        inequalities: facets,
    }
}
