//! Exact JSON encoding: rationals are strings `"p/q"` or bare integers,
//! never floats. Object keys are always emitted in sorted order.

use condset::rational::{format_rat, parse_rat};
use condset::{ExtRat, Halfspace, Polyhedron, Rat, Vector};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Object with keys inserted in sorted order.
pub fn obj<K: Into<String>>(pairs: impl IntoIterator<Item = (K, Value)>) -> Value {
    let mut pairs: Vec<(String, Value)> = pairs.into_iter().map(|(k, v)| (k.into(), v)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k, v);
    }
    Value::Object(map)
}

pub fn rat(r: &Rat) -> Value {
    let s = format_rat(r);
    match s.parse::<i64>() {
        Ok(i) => Value::from(i),
        Err(_) => Value::String(s),
    }
}

pub fn ext(e: &ExtRat) -> Value {
    match e {
        ExtRat::Finite(r) => rat(r),
        other => Value::String(other.to_string()),
    }
}

pub fn vector(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn vectors(vs: &[Vector]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

fn halfspaces(hs: &[Halfspace]) -> Value {
    Value::Array(
        hs.iter()
            .map(|h| obj([("a", vector(&h.normal)), ("b", rat(&h.offset))]))
            .collect(),
    )
}

/// Both canonical representations of a polyhedron.
pub fn polyhedron(p: &Polyhedron) -> Value {
    obj([
        ("dimension", Value::from(p.dim())),
        ("empty", Value::Bool(p.is_empty())),
        ("vertices", vectors(p.vertices())),
        ("rays", vectors(p.extreme_rays())),
        ("lines", vectors(p.lines())),
        ("equalities", halfspaces(p.equalities())),
        ("inequalities", halfspaces(p.inequalities())),
    ])
}

pub fn rat_from(v: &Value, ctx: &str) -> CliResult<Rat> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rat(&n.to_string()).map_err(|e| CliError::parse(ctx, e.to_string()))
        }
        Value::Number(n) => Err(CliError::parse(
            ctx,
            format!("{n} is not exact; write rationals as \"p/q\" strings"),
        )),
        Value::String(s) => parse_rat(s).map_err(|e| CliError::parse(ctx, e.to_string())),
        other => Err(CliError::parse(
            ctx,
            format!("expected a rational, found {other}"),
        )),
    }
}

pub fn ext_from(v: &Value, ctx: &str) -> CliResult<ExtRat> {
    match v {
        Value::String(s) => ExtRat::parse(s).map_err(|e| CliError::parse(ctx, e.to_string())),
        other => rat_from(other, ctx).map(ExtRat::Finite),
    }
}

pub fn array<'a>(v: &'a Value, ctx: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| CliError::parse(ctx, format!("expected an array, found {v}")))
}

pub fn object<'a>(v: &'a Value, ctx: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| CliError::parse(ctx, format!("expected an object, found {v}")))
}

pub fn index(v: &Value, ctx: &str) -> CliResult<usize> {
    v.as_u64()
        .map(|i| i as usize)
        .ok_or_else(|| CliError::parse(ctx, format!("expected an index, found {v}")))
}

pub fn vector_from(v: &Value, ctx: &str) -> CliResult<Vector> {
    array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, x)| rat_from(x, &format!("{ctx}[{i}]")))
        .collect()
}

pub fn vectors_from(v: &Value, ctx: &str) -> CliResult<Vec<Vector>> {
    array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, x)| vector_from(x, &format!("{ctx}[{i}]")))
        .collect()
}
