//! Metric graphs: finite connected loopless multigraphs with positive
//! rational edge lengths and a distinguished vertex set.
//!
//! Vertices and edges are indexed in lexicographic id order, so the derived
//! `Ord` on [`VertexIx`], [`EdgeIx`] and [`PointRef`] is the canonical point
//! ordering used for tie-breaking throughout the crate: vertices first (by
//! id), then interior points by (edge id, offset).

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num::Zero;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};
use crate::refine::{refine, RefinedModel};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexIx(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeIx(pub usize);

/// An exact point of the graph: a vertex, or an interior point of an edge at
/// a positive offset from the edge's canonically smaller end.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PointRef {
    Vertex(VertexIx),
    Interior(EdgeIx, Rat),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: String,
    /// End with the lexicographically smaller vertex id; offsets count from here.
    pub lo: VertexIx,
    pub hi: VertexIx,
    pub length: Rat,
}

impl Edge {
    pub fn other_end(&self, v: VertexIx) -> VertexIx {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn is_end(&self, v: VertexIx) -> bool {
        v == self.lo || v == self.hi
    }
}

/// Unvalidated graph description.
#[derive(Clone, Debug, Default)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
}

#[derive(Clone, Debug)]
pub struct RawEdge {
    pub id: String,
    pub ends: (String, String),
    pub length: Rat,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetricGraph {
    vertex_ids: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeIx>>,
    vertex_lookup: BTreeMap<String, VertexIx>,
    edge_lookup: BTreeMap<String, EdgeIx>,
}

/// Checks a raw description and produces a canonical [`MetricGraph`].
///
/// With `subdivide_loops` set, a loop edge `e` at `v` becomes a fresh vertex
/// `e.mid` joined to `v` by two half-length edges `e.1`, `e.2`; otherwise
/// loops are rejected.
pub fn validate_graph(raw: &RawGraph, subdivide_loops: bool) -> Result<MetricGraph> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for id in &raw.vertices {
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId { id: id.clone() });
        }
    }

    let mut edges: Vec<(String, String, String, Rat)> = Vec::new();
    for e in &raw.edges {
        if e.length <= Rat::zero() {
            return Err(Error::NonpositiveLength { edge: e.id.clone() });
        }
        if e.ends.0 == e.ends.1 {
            if !subdivide_loops {
                return Err(Error::LoopEdge { edge: e.id.clone(), vertex: e.ends.0.clone() });
            }
            let mid = format!("{}.mid", e.id);
            if !seen.insert(mid.clone()) {
                return Err(Error::DuplicateId { id: mid });
            }
            let half = e.length.clone() / crate::rat::rint(2);
            edges.push((format!("{}.1", e.id), e.ends.0.clone(), mid.clone(), half.clone()));
            edges.push((format!("{}.2", e.id), e.ends.0.clone(), mid, half));
        } else {
            edges.push((e.id.clone(), e.ends.0.clone(), e.ends.1.clone(), e.length.clone()));
        }
    }

    // index order is lexicographic id order
    let sorted_vertices: Vec<String> = seen.into_iter().collect();
    let vertex_lookup: BTreeMap<String, VertexIx> = sorted_vertices
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), VertexIx(i)))
        .collect();

    edges.sort_by(|a, b| a.0.cmp(&b.0));
    let mut edge_lookup = BTreeMap::new();
    let mut built = Vec::with_capacity(edges.len());
    for (id, a, b, length) in edges {
        let &a = vertex_lookup
            .get(&a)
            .ok_or(Error::UnknownVertex { id: a.clone() })?;
        let &b = vertex_lookup
            .get(&b)
            .ok_or(Error::UnknownVertex { id: b.clone() })?;
        if edge_lookup.insert(id.clone(), EdgeIx(built.len())).is_some() {
            return Err(Error::DuplicateId { id });
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        built.push(Edge { id, lo, hi, length });
    }
    if built.is_empty() {
        return Err(Error::NoEdges);
    }

    let mut adjacency = vec![Vec::new(); sorted_vertices.len()];
    for (i, e) in built.iter().enumerate() {
        adjacency[e.lo.0].push(EdgeIx(i));
        adjacency[e.hi.0].push(EdgeIx(i));
    }

    let g = MetricGraph {
        vertex_ids: sorted_vertices,
        edges: built,
        adjacency,
        vertex_lookup,
        edge_lookup,
    };
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g)
}

impl MetricGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn genus(&self) -> usize {
        // connected, so E >= V - 1 and this cannot underflow
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn vertex_indices(&self) -> impl Iterator<Item = VertexIx> {
        (0..self.vertex_count()).map(VertexIx)
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = EdgeIx> {
        (0..self.edge_count()).map(EdgeIx)
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertex_ids[v.0]
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<VertexIx> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<EdgeIx> {
        self.edge_lookup.get(id).copied()
    }

    /// Edges at `v`, with multiplicity, in index order.
    pub fn edges_at(&self, v: VertexIx) -> &[EdgeIx] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: VertexIx) -> usize {
        self.adjacency[v.0].len()
    }

    fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![VertexIx(0)];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in self.edges_at(v) {
                let u = self.edge(e).other_end(v);
                if !seen[u.0] {
                    seen[u.0] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Interior point of `e` at `offset` from the lo end; offsets equal to 0
    /// or the length normalize to the corresponding vertex.
    pub fn point_on_edge(&self, e: EdgeIx, offset: Rat) -> Result<PointRef> {
        let edge = self.edge(e);
        if offset < Rat::zero() || offset > edge.length {
            return Err(Error::OffsetOutOfRange {
                edge: edge.id.clone(),
                offset: fmt_rat(&offset),
            });
        }
        if offset.is_zero() {
            Ok(PointRef::Vertex(edge.lo))
        } else if offset == edge.length {
            Ok(PointRef::Vertex(edge.hi))
        } else {
            Ok(PointRef::Interior(e, offset))
        }
    }

    pub fn point_name(&self, p: &PointRef) -> String {
        match p {
            PointRef::Vertex(v) => self.vertex_id(*v).to_string(),
            PointRef::Interior(e, off) => format!("{}@{}", self.edge(*e).id, fmt_rat(off)),
        }
    }

    /// Shortest-path distances from `v` to every vertex.
    pub fn vertex_distances(&self, v: VertexIx) -> Vec<Rat> {
        let mut dist: Vec<Option<Rat>> = vec![None; self.vertex_count()];
        let mut heap: BinaryHeap<std::cmp::Reverse<(Rat, VertexIx)>> = BinaryHeap::new();
        dist[v.0] = Some(Rat::zero());
        heap.push(std::cmp::Reverse((Rat::zero(), v)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if dist[u.0].as_ref() != Some(&d) {
                continue;
            }
            for &e in self.edges_at(u) {
                let edge = self.edge(e);
                let w = edge.other_end(u);
                let nd = d.clone() + edge.length.clone();
                if dist[w.0].as_ref().map_or(true, |cur| nd < *cur) {
                    dist[w.0] = Some(nd.clone());
                    heap.push(std::cmp::Reverse((nd, w)));
                }
            }
        }
        dist.into_iter().map(|d| d.expect("connected graph")).collect()
    }

    /// Exact shortest-path distance between two points.
    pub fn distance(&self, p: &PointRef, q: &PointRef) -> Rat {
        // describe each point as (candidate vertex anchors with offsets)
        let anchors = |p: &PointRef| -> Vec<(VertexIx, Rat)> {
            match p {
                PointRef::Vertex(v) => vec![(*v, Rat::zero())],
                PointRef::Interior(e, off) => {
                    let edge = self.edge(*e);
                    vec![
                        (edge.lo, off.clone()),
                        (edge.hi, edge.length.clone() - off.clone()),
                    ]
                }
            }
        };
        let mut best: Option<Rat> = None;
        // direct same-edge route, without passing a vertex
        if let (PointRef::Interior(e1, o1), PointRef::Interior(e2, o2)) = (p, q) {
            if e1 == e2 {
                let d = if o1 > o2 {
                    o1.clone() - o2.clone()
                } else {
                    o2.clone() - o1.clone()
                };
                best = Some(d);
            }
        }
        if p == q {
            return Rat::zero();
        }
        for (av, ad) in anchors(p) {
            let table = self.vertex_distances(av);
            for (bv, bd) in anchors(q) {
                let d = ad.clone() + table[bv.0].clone() + bd;
                if best.as_ref().map_or(true, |cur| d < *cur) {
                    best = Some(d);
                }
            }
        }
        best.expect("nonempty anchor sets")
    }

    pub fn transform(&self, t: &Transform) -> Result<TransformOutcome> {
        match t {
            Transform::RescaleAll(f) => {
                let factors: BTreeMap<String, Rat> = self
                    .edges
                    .iter()
                    .map(|e| (e.id.clone(), f.clone()))
                    .collect();
                self.rescale(&factors)
            }
            Transform::Rescale(factors) => self.rescale(factors),
            Transform::Subdivide(points) => {
                let model = refine(self, points);
                Ok(TransformOutcome {
                    graph: model.model().clone(),
                    kind: MapKind::Subdivide(model),
                })
            }
        }
    }

    fn rescale(&self, factors: &BTreeMap<String, Rat>) -> Result<TransformOutcome> {
        for (id, f) in factors {
            if self.edge_by_id(id).is_none() {
                return Err(Error::UnknownEdge { id: id.clone() });
            }
            if *f <= Rat::zero() {
                return Err(Error::NonpositiveFactor { edge: id.clone() });
            }
        }
        let mut per_edge = vec![crate::rat::rint(1); self.edge_count()];
        for (id, f) in factors {
            per_edge[self.edge_by_id(id).unwrap().0] = f.clone();
        }
        let mut graph = self.clone();
        for (i, e) in graph.edges.iter_mut().enumerate() {
            e.length *= per_edge[i].clone();
        }
        Ok(TransformOutcome { graph, kind: MapKind::Rescale(per_edge) })
    }
}

/// A graph-to-graph operation that maps points along.
#[derive(Clone, Debug)]
pub enum Transform {
    /// Multiply every edge length by one positive factor.
    RescaleAll(Rat),
    /// Multiply selected edges (by id) by positive factors; others keep length.
    Rescale(BTreeMap<String, Rat>),
    /// Insert the given interior points as vertices.
    Subdivide(BTreeSet<PointRef>),
}

#[derive(Clone, Debug)]
pub struct TransformOutcome {
    pub graph: MetricGraph,
    kind: MapKind,
}

#[derive(Clone, Debug)]
enum MapKind {
    Rescale(Vec<Rat>),
    Subdivide(RefinedModel),
}

impl TransformOutcome {
    /// Image of a point of the original graph.
    pub fn map_point(&self, p: &PointRef) -> PointRef {
        match &self.kind {
            MapKind::Rescale(factors) => match p {
                PointRef::Vertex(v) => PointRef::Vertex(*v),
                PointRef::Interior(e, off) => {
                    PointRef::Interior(*e, off.clone() * factors[e.0].clone())
                }
            },
            MapKind::Subdivide(model) => model.to_model_point(p),
        }
    }
}
