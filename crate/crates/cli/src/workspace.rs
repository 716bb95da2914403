//! JSON workspace: a graph plus named points, divisors, and point sets.
//! Parsing validates everything against the graph. Serialization is
//! canonical (sorted names, lowest-term rationals, offsets from the low
//! end, endpoints in vertex form), so serialize then parse reproduces the
//! workspace byte for byte.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{Map, Value};

use tdl::divisor::Divisor;
use tdl::error::{Error, Result};
use tdl::graph::{validate_graph, MetricGraph, PointRef, RawEdge, RawGraph};
use tdl::rat::{fmt_rat, parse_rat, rint, Rat};

#[derive(Debug)]
pub struct Workspace {
    pub graph: MetricGraph,
    pub points: BTreeMap<String, PointRef>,
    pub divisors: BTreeMap<String, Divisor>,
    pub sets: BTreeMap<String, BTreeSet<PointRef>>,
}

fn bad(path: &str, msg: impl AsRef<str>) -> Error {
    Error::InvalidParameter {
        detail: format!("{path}: {}", msg.as_ref()),
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn as_string(v: &Value, path: &str) -> Result<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| bad(path, "expected a string"))
}

fn known_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(bad(path, format!("unknown field {k:?}")));
        }
    }
    Ok(())
}

/// An exact rational: a JSON integer or a string "p" / "p/q". Floats are
/// rejected outright.
fn parse_rational(v: &Value, path: &str) -> Result<Rat> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rint(i)),
            None => Err(bad(path, "must be an exact integer or a \"p/q\" string")),
        },
        Value::String(s) => {
            parse_rat(s).ok_or_else(|| bad(path, format!("not a rational: {s:?}")))
        }
        _ => Err(bad(path, "expected an integer or a \"p/q\" string")),
    }
}

/// Offsets in the file are measured from the first listed end of the edge.
/// Resolution flips them when the graph stores the other end first, then
/// normalizes endpoint offsets to the vertex form.
fn resolve_point(
    obj: &Map<String, Value>,
    path: &str,
    g: &MetricGraph,
    first_end: &BTreeMap<String, String>,
    extra: &[&str],
) -> Result<PointRef> {
    if obj.contains_key("vertex") {
        known_keys(obj, path, &[&["vertex"], extra].concat())?;
        let id = as_string(&obj["vertex"], &format!("{path}.vertex"))?;
        let v = g.vertex_by_id(&id).ok_or(Error::UnknownVertex { id })?;
        return Ok(PointRef::Vertex(v));
    }
    known_keys(obj, path, &[&["edge", "offset"], extra].concat())?;
    let id = as_string(
        obj.get("edge").ok_or_else(|| bad(path, "needs \"vertex\" or \"edge\"+\"offset\""))?,
        &format!("{path}.edge"),
    )?;
    let off_v = obj
        .get("offset")
        .ok_or_else(|| bad(path, "edge point needs an \"offset\""))?;
    let off = parse_rational(off_v, &format!("{path}.offset"))?;
    let e = g
        .edge_by_id(&id)
        .ok_or_else(|| Error::UnknownEdge { id: id.clone() })?;
    let edge = g.edge(e);
    if off < rint(0) || off > edge.length {
        return Err(bad(
            &format!("{path}.offset"),
            format!("{} lies outside edge {id} of length {}", fmt_rat(&off), fmt_rat(&edge.length)),
        ));
    }
    let from_lo = if first_end.get(&id).map(String::as_str) == Some(g.vertex_id(edge.lo)) {
        off
    } else {
        edge.length.clone() - off
    };
    g.point_on_edge(e, from_lo)
}

pub fn parse_workspace(text: &str, subdivide_loops: bool) -> Result<Workspace> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| bad("document", format!("invalid JSON: {e}")))?;
    let root = as_object(&root, "document")?;
    known_keys(root, "document", &["graph", "points", "divisors", "sets"])?;

    let gv = root.get("graph").ok_or_else(|| bad("graph", "missing"))?;
    let gobj = as_object(gv, "graph")?;
    known_keys(gobj, "graph", &["vertices", "edges"])?;
    let vertices = as_array(
        gobj.get("vertices").ok_or_else(|| bad("graph.vertices", "missing"))?,
        "graph.vertices",
    )?
    .iter()
    .enumerate()
    .map(|(i, v)| as_string(v, &format!("graph.vertices[{i}]")))
    .collect::<Result<Vec<_>>>()?;

    let mut edges = Vec::new();
    let mut first_end: BTreeMap<String, String> = BTreeMap::new();
    for (i, ev) in as_array(
        gobj.get("edges").ok_or_else(|| bad("graph.edges", "missing"))?,
        "graph.edges",
    )?
    .iter()
    .enumerate()
    {
        let path = format!("graph.edges[{i}]");
        let eobj = as_object(ev, &path)?;
        known_keys(eobj, &path, &["id", "ends", "length"])?;
        let id = as_string(
            eobj.get("id").ok_or_else(|| bad(&path, "missing \"id\""))?,
            &format!("{path}.id"),
        )?;
        let ends = as_array(
            eobj.get("ends").ok_or_else(|| bad(&path, "missing \"ends\""))?,
            &format!("{path}.ends"),
        )?;
        if ends.len() != 2 {
            return Err(bad(&format!("{path}.ends"), "expected exactly two vertex ids"));
        }
        let a = as_string(&ends[0], &format!("{path}.ends[0]"))?;
        let b = as_string(&ends[1], &format!("{path}.ends[1]"))?;
        let length = parse_rational(
            eobj.get("length").ok_or_else(|| bad(&path, "missing \"length\""))?,
            &format!("{path}.length"),
        )?;
        first_end.insert(id.clone(), a.clone());
        edges.push(RawEdge { id, ends: (a, b), length });
    }
    let graph = validate_graph(&RawGraph { vertices, edges }, subdivide_loops)?;

    let mut points = BTreeMap::new();
    if let Some(pv) = root.get("points") {
        for (name, value) in as_object(pv, "points")? {
            let path = format!("points.{name}");
            if name.is_empty() {
                return Err(bad("points", "empty name"));
            }
            let p = resolve_point(as_object(value, &path)?, &path, &graph, &first_end, &[])?;
            points.insert(name.clone(), p);
        }
    }

    let mut divisors = BTreeMap::new();
    if let Some(dv) = root.get("divisors") {
        for (name, list) in as_object(dv, "divisors")? {
            let path = format!("divisors.{name}");
            if name.is_empty() {
                return Err(bad("divisors", "empty name"));
            }
            let mut seen: BTreeSet<PointRef> = BTreeSet::new();
            let mut entries = Vec::new();
            for (i, ev) in as_array(list, &path)?.iter().enumerate() {
                let epath = format!("{path}[{i}]");
                let eobj = as_object(ev, &epath)?;
                let p = resolve_point(eobj, &epath, &graph, &first_end, &["coeff"])?;
                let c = eobj
                    .get("coeff")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| bad(&epath, "needs an integer \"coeff\""))?;
                if c == 0 {
                    return Err(bad(&epath, "zero coefficient"));
                }
                if !seen.insert(p.clone()) {
                    return Err(bad(&epath, "duplicate point in divisor"));
                }
                entries.push((p, c));
            }
            divisors.insert(name.clone(), Divisor::from_entries(entries));
        }
    }

    let mut sets = BTreeMap::new();
    if let Some(sv) = root.get("sets") {
        for (name, list) in as_object(sv, "sets")? {
            let path = format!("sets.{name}");
            if name.is_empty() {
                return Err(bad("sets", "empty name"));
            }
            let mut set: BTreeSet<PointRef> = BTreeSet::new();
            for (i, ev) in as_array(list, &path)?.iter().enumerate() {
                let epath = format!("{path}[{i}]");
                let p = resolve_point(as_object(ev, &epath)?, &epath, &graph, &first_end, &[])?;
                if !set.insert(p) {
                    return Err(bad(&epath, "duplicate point in set"));
                }
            }
            sets.insert(name.clone(), set);
        }
    }

    Ok(Workspace { graph, points, divisors, sets })
}

/// Builds a workspace from resolved values, checking the references.
pub fn from_parts(
    graph: MetricGraph,
    points: BTreeMap<String, PointRef>,
    divisors: BTreeMap<String, Divisor>,
    sets: BTreeMap<String, BTreeSet<PointRef>>,
) -> Result<Workspace> {
    let check = |p: &PointRef, path: &str| -> Result<()> {
        if let PointRef::Interior(e, off) = p {
            if e.0 >= graph.edge_count() {
                return Err(bad(path, "edge index out of range"));
            }
            let len = &graph.edge(*e).length;
            if *off <= rint(0) || *off >= *len {
                return Err(bad(path, "offset not interior"));
            }
        } else if let PointRef::Vertex(v) = p {
            if v.0 >= graph.vertex_count() {
                return Err(bad(path, "vertex index out of range"));
            }
        }
        Ok(())
    };
    for (name, p) in &points {
        check(p, &format!("points.{name}"))?;
    }
    for (name, d) in &divisors {
        for p in d.support() {
            check(p, &format!("divisors.{name}"))?;
        }
    }
    for (name, s) in &sets {
        for p in s {
            check(p, &format!("sets.{name}"))?;
        }
    }
    Ok(Workspace { graph, points, divisors, sets })
}

/// The canonical JSON value for one point.
pub fn point_value(g: &MetricGraph, p: &PointRef) -> Value {
    match p {
        PointRef::Vertex(v) => {
            let mut m = Map::new();
            m.insert("vertex".into(), Value::String(g.vertex_id(*v).to_string()));
            Value::Object(m)
        }
        PointRef::Interior(e, off) => {
            let mut m = Map::new();
            m.insert("edge".into(), Value::String(g.edge(*e).id.clone()));
            m.insert("offset".into(), Value::String(fmt_rat(off)));
            Value::Object(m)
        }
    }
}

/// The canonical JSON value for one divisor: its entries in point order.
pub fn divisor_value(g: &MetricGraph, d: &Divisor) -> Value {
    Value::Array(
        d.iter()
            .map(|(p, c)| {
                let Value::Object(mut m) = point_value(g, p) else { unreachable!() };
                m.insert("coeff".into(), Value::from(c));
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn serialize_workspace(ws: &Workspace) -> String {
    let g = &ws.graph;
    let mut root = Map::new();

    let mut gobj = Map::new();
    gobj.insert(
        "vertices".into(),
        Value::Array(
            g.vertex_indices()
                .map(|v| Value::String(g.vertex_id(v).to_string()))
                .collect(),
        ),
    );
    gobj.insert(
        "edges".into(),
        Value::Array(
            g.edge_indices()
                .map(|e| {
                    let ed = g.edge(e);
                    let mut m = Map::new();
                    m.insert("id".into(), Value::String(ed.id.clone()));
                    m.insert(
                        "ends".into(),
                        Value::Array(vec![
                            Value::String(g.vertex_id(ed.lo).to_string()),
                            Value::String(g.vertex_id(ed.hi).to_string()),
                        ]),
                    );
                    m.insert("length".into(), Value::String(fmt_rat(&ed.length)));
                    Value::Object(m)
                })
                .collect(),
        ),
    );
    root.insert("graph".into(), Value::Object(gobj));

    if !ws.points.is_empty() {
        let m: Map<String, Value> = ws
            .points
            .iter()
            .map(|(name, p)| (name.clone(), point_value(g, p)))
            .collect();
        root.insert("points".into(), Value::Object(m));
    }
    if !ws.divisors.is_empty() {
        let m: Map<String, Value> = ws
            .divisors
            .iter()
            .map(|(name, d)| (name.clone(), divisor_value(g, d)))
            .collect();
        root.insert("divisors".into(), Value::Object(m));
    }
    if !ws.sets.is_empty() {
        let m: Map<String, Value> = ws
            .sets
            .iter()
            .map(|(name, s)| {
                (
                    name.clone(),
                    Value::Array(s.iter().map(|p| point_value(g, p)).collect()),
                )
            })
            .collect();
        root.insert("sets".into(), Value::Object(m));
    }

    let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("valid JSON tree");
    out.push('\n');
    out
}
