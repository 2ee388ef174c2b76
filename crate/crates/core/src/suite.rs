//! The identity suite: every relation between the conditional operators,
//! checked exactly on a single random set or across a seeded corpus.

use std::collections::BTreeMap;

use rand::Rng;

use crate::corpus::{Generator, Instance};
use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::oracle::core_by_accumulation;
use crate::prob::{Partition, RandomScalar, RandomVector};
use crate::randset::{
    cond_core, cond_expectation, cond_hull, cone_lift_commute, core_hull_duality_cone, core_support_bounds,
    core_via_halfspaces, epigraph_duality_check, facet_normals, hull_support_identity, max_coordinate,
    maxingale_check, sandwich_check, scale_and_sum_laws, truncate, RandomPolyhedron,
};
use crate::rational::Rat;
use crate::risk::{avar_sub, avar_super};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// A precondition of the identity does not hold for this input.
    Skip(String),
}

impl Outcome {
    fn from_bool(ok: bool, what: &str) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(what.to_string())
        }
    }

    fn from_result(r: Result<Outcome>) -> Self {
        match r {
            Ok(o) => o,
            Err(e @ (Error::EmptyCore { .. } | Error::Unbounded | Error::EmptyValue { .. })) => {
                Outcome::Skip(e.to_string())
            }
            Err(e) => Outcome::Fail(e.to_string()),
        }
    }
}

/// Counts for one named identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub tallies: BTreeMap<&'static str, Tally>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.tallies.values().all(|t| t.failed == 0)
    }

    pub fn record(&mut self, name: &'static str, outcome: Outcome, context: &str) {
        let t = self.tallies.entry(name).or_default();
        match outcome {
            Outcome::Pass => t.passed += 1,
            Outcome::Skip(_) => t.skipped += 1,
            Outcome::Fail(why) => {
                t.failed += 1;
                t.first_failure.get_or_insert_with(|| format!("{context}: {why}"));
            }
        }
    }

    pub fn merge(&mut self, checks: Vec<(&'static str, Outcome)>, context: &str) {
        for (name, outcome) in checks {
            self.record(name, outcome, context);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Bounded instances; half as many cone instances are added.
    pub instances: usize,
    /// Random h-measurable directions per instance, on top of facet normals.
    pub directions: usize,
    pub max_points: usize,
    pub max_dim: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            instances: 60,
            directions: 10,
            max_points: 6,
            max_dim: 3,
        }
    }
}

fn directions_for(x: &RandomPolyhedron, h: &Partition, g: &mut Generator, n: usize) -> Vec<RandomVector> {
    let mut out: Vec<RandomVector> = facet_normals(x)
        .into_iter()
        .map(|u| RandomVector::constant(x.len(), u))
        .collect();
    out.extend((0..n).map(|_| g.measurable_direction(h, x.dim())));
    out
}

fn support_le(lhs: &RandomScalar, rhs: &RandomScalar) -> bool {
    lhs.values().iter().zip(rhs.values()).all(|(a, b)| a <= b)
}

/// Every identity that applies to the random set `x` given `h` and a
/// coarser partition `coarse`. `y` is a second set on the same space for
/// the sum laws. Randomness (directions, multipliers, the AV@R level) is
/// drawn from `g`.
pub fn check_set(
    x: &RandomPolyhedron,
    y: &RandomPolyhedron,
    h: &Partition,
    coarse: &Partition,
    g: &mut Generator,
    directions: usize,
) -> Vec<(&'static str, Outcome)> {
    let mut out = Vec::new();
    let dirs = directions_for(x, h, g, directions);
    let lambda = RandomScalar::finite(g.measurable_multiplier(h));
    let eta = g.measurable_direction(h, x.dim());
    let alpha = g.alpha();
    let run = |f: &dyn Fn() -> Result<Outcome>| Outcome::from_result(f());

    out.push((
        "sandwich",
        run(&|| Ok(Outcome::from_bool(sandwich_check(x, h)?, "core ⊆ E ⊆ hull fails"))),
    ));
    out.push((
        "hull-support",
        run(&|| {
            for z in &dirs {
                if !hull_support_identity(x, h, z)? {
                    return Ok(Outcome::Fail(format!("direction {:?}", z.values()[0])));
                }
            }
            Ok(Outcome::Pass)
        }),
    ));
    out.push((
        "core-support",
        run(&|| {
            for z in &dirs {
                let (lhs, rhs) = core_support_bounds(x, h, z)?;
                if !support_le(&lhs, &rhs) {
                    return Ok(Outcome::Fail(format!("direction {:?}", z.values()[0])));
                }
            }
            Ok(Outcome::Pass)
        }),
    ));
    out.push((
        "core-reconstruction",
        run(&|| {
            let rebuilt = core_via_halfspaces(x, h, &facet_normals(x))?;
            Ok(Outcome::from_bool(
                rebuilt == cond_core(x, h)?,
                "halfspace core differs",
            ))
        }),
    ));
    out.push((
        "core-oracle",
        run(&|| {
            Ok(Outcome::from_bool(
                core_by_accumulation(x, h)? == cond_core(x, h)?,
                "accumulated core differs",
            ))
        }),
    ));
    match scale_and_sum_laws(x, y, &lambda, &eta, h, coarse) {
        Ok(r) => {
            out.push(("scale", Outcome::from_bool(r.scale, "cm(λX) ≠ λ cm(X)")));
            out.push((
                "translation",
                Outcome::from_bool(r.translation, "cm(X+η) ≠ cm(X)+η"),
            ));
            out.push((
                "core-sum",
                Outcome::from_bool(r.core_superadditive, "cm(X)+cm(Y) ⊄ cm(X+Y)"),
            ));
            out.push((
                "hull-sum",
                Outcome::from_bool(r.hull_subadditive, "CM(X+Y) ⊄ CM(X)+CM(Y)"),
            ));
            let tower = r.tower_core && r.tower_hull && r.tower_expectation;
            out.push(("tower", Outcome::from_bool(tower, "tower property fails")));
        }
        Err(e) => out.push(("laws", Outcome::Fail(e.to_string()))),
    }
    out.push((
        "epigraph",
        run(&|| {
            let r = epigraph_duality_check(x, h)?;
            Ok(Outcome::from_bool(r.holds(), "epigraph duality fails"))
        }),
    ));
    out.push((
        "cone-lift",
        run(&|| {
            Ok(Outcome::from_bool(
                cone_lift_commute(x, h)?,
                "lifting does not commute",
            ))
        }),
    ));
    out.push((
        "maxingale",
        run(&|| {
            let filtration = vec![coarse.clone(), h.clone(), Partition::discrete(x.len())];
            let sequence = filtration
                .iter()
                .map(|f| cond_hull(x, f))
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::from_bool(
                maxingale_check(&filtration, &sequence)?,
                "hull sequence is not a maxingale",
            ))
        }),
    ));
    out.push((
        "avar-chain",
        run(&|| {
            let core = cond_core(x, h)?;
            let sub = avar_sub(x, h, &alpha)?;
            let mean = cond_expectation(x, h)?;
            let sup = avar_super(x, h, &alpha)?;
            let hull = cond_hull(x, h)?;
            let ok = sub.contains(&core)?
                && mean.contains(&sub)?
                && sup.contains(&mean)?
                && hull.contains(&sup)?;
            Ok(Outcome::from_bool(ok, &format!("chain fails at alpha {alpha}")))
        }),
    ));
    out.push((
        "truncation",
        run(&|| {
            if !x.is_bounded() {
                return Err(Error::Unbounded);
            }
            let n = max_coordinate(x) + Rat::from_integer(1.into());
            Ok(Outcome::from_bool(
                cond_hull(&truncate(x, &n)?, h)? == cond_hull(x, h)?,
                "truncated hull differs",
            ))
        }),
    ));
    out
}

/// Identities specific to random cones.
pub fn check_cone(k: &RandomPolyhedron, h: &Partition) -> Vec<(&'static str, Outcome)> {
    let r = core_hull_duality_cone(k, h).map(|ok| Outcome::from_bool(ok, "cone duality fails"));
    vec![("cone-duality", Outcome::from_result(r))]
}

/// A second random set on the same space and in the same dimension.
pub fn companion(x: &RandomPolyhedron, g: &mut Generator) -> RandomPolyhedron {
    let sets = (0..x.len()).map(|_| g.polytope(x.dim(), 3, None)).collect();
    RandomPolyhedron::new(x.space().clone(), sets).expect("uniform dimension")
}

enum Case {
    Bounded(Instance, u64),
    Cone(Instance),
}

/// Runs the suite over a corpus drawn from `seed`.
pub fn run_suite(seed: u64, mode: Mode, config: &SuiteConfig) -> SuiteReport {
    let mut g = Generator::new(seed);
    let mut cases = Vec::new();
    for i in 0..config.instances {
        let d = g.int_in(1, config.max_dim as i64) as usize;
        let inst = g.bounded_instance(d, config.max_points, i % 2 == 0);
        cases.push(Case::Bounded(inst, g.rng().gen()));
    }
    for _ in 0..config.instances / 2 {
        let d = g.int_in(2, config.max_dim.max(2) as i64) as usize;
        cases.push(Case::Cone(g.cone_instance(d, config.max_points)));
    }
    let results = exec::map_with(mode, &cases, |c| match c {
        Case::Bounded(inst, s) => {
            let mut g = Generator::new(*s);
            let y = companion(&inst.x, &mut g);
            check_set(&inst.x, &y, &inst.h, &inst.coarse, &mut g, config.directions)
        }
        Case::Cone(inst) => check_cone(&inst.x, &inst.h),
    });
    let mut report = SuiteReport::default();
    for (i, checks) in results.into_iter().enumerate() {
        report.merge(checks, &format!("instance {i} (seed {seed})"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_in_both_modes() {
        let config = SuiteConfig {
            instances: 6,
            directions: 3,
            max_points: 4,
            max_dim: 2,
        };
        let a = run_suite(7, Mode::Sequential, &config);
        let b = run_suite(7, Mode::Parallel, &config);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a, b);
        assert!(a.tallies["sandwich"].passed == 6);
    }

    #[test]
    fn failures_are_recorded() {
        let mut r = SuiteReport::default();
        r.record("x", Outcome::Pass, "a");
        r.record("x", Outcome::Fail("bad".into()), "b");
        r.record("x", Outcome::Fail("worse".into()), "c");
        assert!(!r.passed());
        assert_eq!(r.tallies["x"].first_failure.as_deref(), Some("b: bad"));
    }
}
