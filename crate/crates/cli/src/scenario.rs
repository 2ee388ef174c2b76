//! Scenario files: a finite space with named partitions, random sets,
//! random vectors and random scalars.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "probabilities": ["1/2", "1/2"],
//!   "partitions": {"H": [[0, 1]]},
//!   "sets": {"X": [{"vertices": [[0], [2]]}, {"halfspaces": [{"a": [1], "b": 3}, {"a": [-1], "b": -1}]}]},
//!   "scalars": {"bid": [1, "3/2"]},
//!   "vectors": {"zeta": [[1], [-1]]},
//!   "filtration": ["trivial", "H"]
//! }
//! ```
//!
//! The partition names `trivial` and `discrete` are always available unless
//! a scenario defines its own partition under that name.

use std::collections::BTreeMap;

use condset::{FiniteSpace, Halfspace, Partition, Polyhedron, RandomPolyhedron, RandomScalar, RandomVector};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::json;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub dimension: usize,
    pub space: FiniteSpace,
    pub partitions: BTreeMap<String, Partition>,
    pub sets: BTreeMap<String, RandomPolyhedron>,
    pub vectors: BTreeMap<String, RandomVector>,
    pub scalars: BTreeMap<String, RandomScalar>,
    pub filtration: Vec<String>,
}

const TOP_KEYS: [&str; 7] = [
    "dimension",
    "filtration",
    "partitions",
    "probabilities",
    "scalars",
    "sets",
    "vectors",
];

fn reject_unknown(map: &serde_json::Map<String, Value>, allowed: &[&str], ctx: &str) -> CliResult<()> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::parse(ctx, format!("unknown key {k:?}"))),
        None => Ok(()),
    }
}

fn named<'a>(top: &'a serde_json::Map<String, Value>, key: &str) -> CliResult<Vec<(&'a String, &'a Value)>> {
    match top.get(key) {
        None => Ok(Vec::new()),
        Some(v) => Ok(json::object(v, key)?.iter().collect()),
    }
}

fn parse_set(v: &Value, dim: usize, ctx: &str) -> CliResult<Polyhedron> {
    let map = json::object(v, ctx)?;
    reject_unknown(map, &["vertices", "rays", "lines", "halfspaces"], ctx)?;
    let field = |k: &str| map.get(k).map(|x| (x, format!("{ctx}.{k}")));
    let has_v = map.contains_key("vertices") || map.contains_key("rays") || map.contains_key("lines");
    let from_v = if has_v {
        let vertices = match field("vertices") {
            Some((x, c)) => json::vectors_from(x, &c)?,
            None => Vec::new(),
        };
        let mut rays = match field("rays") {
            Some((x, c)) => json::vectors_from(x, &c)?,
            None => Vec::new(),
        };
        if let Some((x, c)) = field("lines") {
            for l in json::vectors_from(x, &c)? {
                rays.push(condset::rational::neg(&l));
                rays.push(l);
            }
        }
        Some(Polyhedron::from_vrep(dim, vertices, rays).map_err(|e| CliError::invalid(ctx, e))?)
    } else {
        None
    };
    let from_h = match field("halfspaces") {
        Some((x, c)) => {
            let hs = json::array(x, &c)?
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    let hc = format!("{c}[{i}]");
                    let m = json::object(h, &hc)?;
                    reject_unknown(m, &["a", "b"], &hc)?;
                    let a = m
                        .get("a")
                        .ok_or_else(|| CliError::parse(&hc, "missing key \"a\""))?;
                    let b = m
                        .get("b")
                        .ok_or_else(|| CliError::parse(&hc, "missing key \"b\""))?;
                    Ok(Halfspace::new(
                        json::vector_from(a, &format!("{hc}.a"))?,
                        json::rat_from(b, &format!("{hc}.b"))?,
                    ))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Some(Polyhedron::from_hrep(dim, hs).map_err(|e| CliError::invalid(ctx, e))?)
        }
        None => None,
    };
    match (from_v, from_h) {
        (Some(a), Some(b)) if a != b => Err(CliError::parse(
            ctx,
            "vertex and halfspace representations describe different sets",
        )),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(CliError::parse(ctx, "needs \"vertices\" or \"halfspaces\"")),
    }
}

fn check_length(len: usize, n: usize, ctx: &str) -> CliResult<()> {
    if len == n {
        Ok(())
    } else {
        Err(CliError::invalid(
            ctx,
            condset::Error::LengthMismatch {
                expected: n,
                found: len,
            },
        ))
    }
}

impl Scenario {
    pub fn parse(text: &str) -> CliResult<Scenario> {
        let root: Value = serde_json::from_str(text).map_err(|e| {
            CliError::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        let top = json::object(&root, "top level")?;
        reject_unknown(top, &TOP_KEYS, "top level")?;

        let dimension = match top.get("dimension") {
            Some(v) => json::index(v, "dimension")?,
            None => return Err(CliError::parse("top level", "missing key \"dimension\"")),
        };
        if dimension == 0 {
            return Err(CliError::parse("dimension", "must be at least 1"));
        }
        let probs = top
            .get("probabilities")
            .ok_or_else(|| CliError::parse("top level", "missing key \"probabilities\""))?;
        let probs = json::array(probs, "probabilities")?
            .iter()
            .enumerate()
            .map(|(i, p)| json::rat_from(p, &format!("probabilities[{i}]")))
            .collect::<CliResult<Vec<_>>>()?;
        let space = FiniteSpace::new(probs).map_err(|e| CliError::invalid("probabilities", e))?;
        let n = space.len();

        let mut partitions = BTreeMap::new();
        for (name, v) in named(top, "partitions")? {
            let ctx = format!("partitions.{name}");
            let atoms = json::array(v, &ctx)?
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let ac = format!("{ctx}[{i}]");
                    json::array(a, &ac)?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| json::index(x, &format!("{ac}[{j}]")))
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()?;
            let p = Partition::new(n, atoms).map_err(|e| CliError::invalid(&ctx, e))?;
            partitions.insert(name.clone(), p);
        }

        let mut sets = BTreeMap::new();
        for (name, v) in named(top, "sets")? {
            let ctx = format!("sets.{name}");
            let values = json::array(v, &ctx)?;
            check_length(values.len(), n, &ctx)?;
            let values = values
                .iter()
                .enumerate()
                .map(|(i, s)| parse_set(s, dimension, &format!("{ctx}[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            let x = RandomPolyhedron::new(space.clone(), values).map_err(|e| CliError::invalid(&ctx, e))?;
            sets.insert(name.clone(), x);
        }

        let mut vectors = BTreeMap::new();
        for (name, v) in named(top, "vectors")? {
            let ctx = format!("vectors.{name}");
            let values = json::vectors_from(v, &ctx)?;
            check_length(values.len(), n, &ctx)?;
            if let Some((i, u)) = values.iter().enumerate().find(|(_, u)| u.len() != dimension) {
                return Err(CliError::invalid(
                    format!("{ctx}[{i}]"),
                    condset::Error::DimensionMismatch {
                        expected: dimension,
                        found: u.len(),
                    },
                ));
            }
            vectors.insert(
                name.clone(),
                RandomVector::new(values).map_err(|e| CliError::invalid(&ctx, e))?,
            );
        }

        let mut scalars = BTreeMap::new();
        for (name, v) in named(top, "scalars")? {
            let ctx = format!("scalars.{name}");
            let values = json::array(v, &ctx)?
                .iter()
                .enumerate()
                .map(|(i, x)| json::ext_from(x, &format!("{ctx}[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            check_length(values.len(), n, &ctx)?;
            scalars.insert(name.clone(), RandomScalar(values));
        }

        let filtration = match top.get("filtration") {
            None => Vec::new(),
            Some(v) => json::array(v, "filtration")?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    x.as_str().map(str::to_string).ok_or_else(|| {
                        CliError::parse(format!("filtration[{i}]"), "expected a partition name")
                    })
                })
                .collect::<CliResult<Vec<_>>>()?,
        };
        let scenario = Scenario {
            dimension,
            space,
            partitions,
            sets,
            vectors,
            scalars,
            filtration,
        };
        for name in &scenario.filtration {
            scenario.partition(name)?;
        }
        Ok(scenario)
    }

    pub fn partition(&self, name: &str) -> CliResult<Partition> {
        if let Some(p) = self.partitions.get(name) {
            return Ok(p.clone());
        }
        match name {
            "trivial" => Ok(Partition::trivial(self.space.len())),
            "discrete" => Ok(Partition::discrete(self.space.len())),
            _ => Err(CliError::UnknownName {
                kind: "partition",
                name: name.to_string(),
            }),
        }
    }

    pub fn set(&self, name: &str) -> CliResult<&RandomPolyhedron> {
        self.sets.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "set",
            name: name.to_string(),
        })
    }

    pub fn scalar(&self, name: &str) -> CliResult<&RandomScalar> {
        self.scalars.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "scalar",
            name: name.to_string(),
        })
    }

    pub fn filtration(&self) -> CliResult<Vec<Partition>> {
        self.filtration.iter().map(|n| self.partition(n)).collect()
    }

    pub fn to_json(&self) -> Value {
        let set = |p: &Polyhedron| {
            json::obj([
                ("vertices", json::vectors(p.vertices())),
                ("rays", json::vectors(p.extreme_rays())),
                ("lines", json::vectors(p.lines())),
            ])
        };
        let index_list = |a: &[usize]| Value::Array(a.iter().map(|&i| Value::from(i)).collect());
        json::obj([
            ("dimension", Value::from(self.dimension)),
            ("probabilities", json::vector(self.space.probs())),
            (
                "partitions",
                json::obj(self.partitions.iter().map(|(k, p)| {
                    (
                        k.clone(),
                        Value::Array(p.atoms().iter().map(|a| index_list(a)).collect()),
                    )
                })),
            ),
            (
                "sets",
                json::obj(
                    self.sets
                        .iter()
                        .map(|(k, x)| (k.clone(), Value::Array(x.sets().iter().map(set).collect()))),
                ),
            ),
            (
                "vectors",
                json::obj(
                    self.vectors
                        .iter()
                        .map(|(k, v)| (k.clone(), json::vectors(v.values()))),
                ),
            ),
            (
                "scalars",
                json::obj(self.scalars.iter().map(|(k, s)| {
                    (
                        k.clone(),
                        Value::Array(s.values().iter().map(json::ext).collect()),
                    )
                })),
            ),
            (
                "filtration",
                Value::Array(self.filtration.iter().map(|s| Value::String(s.clone())).collect()),
            ),
        ])
    }
}
