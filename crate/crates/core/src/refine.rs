//! Refined models: the combinatorial graph obtained by promoting a finite
//! set of interior points to vertices, with exact point mappings in both
//! directions.
//!
//! Model vertices are the base vertices plus the marks; model edges are the
//! maximal mark-free subsegments of base edges. Refinement preserves genus.

use std::collections::BTreeSet;

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeIx, MetricGraph, PointRef, RawEdge, RawGraph, VertexIx};
use crate::rat::Rat;

#[derive(Clone, Debug)]
pub struct RefinedModel {
    base: MetricGraph,
    model: MetricGraph,
    base_to_model_vertex: Vec<VertexIx>,
    /// model vertex -> base vertex, None for marks
    model_to_base_vertex: Vec<Option<VertexIx>>,
    /// model vertex -> base edge location, Some for marks
    mark_location: Vec<Option<(EdgeIx, Rat)>>,
    /// base edge -> cut offsets (sorted, strictly interior) with mark vertices
    cuts: Vec<Vec<(Rat, VertexIx)>>,
    /// base edge -> model edges of its segments in offset order
    segments: Vec<Vec<EdgeIx>>,
    /// model edge -> (base edge, base offset at model lo end, at model hi end)
    origin: Vec<(EdgeIx, Rat, Rat)>,
}

/// Builds the refined model of `base` with the given marks. Vertex points
/// are absorbed; interior points become model vertices named after the
/// point, e.g. `e1@1/2`.
pub fn refine(base: &MetricGraph, marks: &BTreeSet<PointRef>) -> RefinedModel {
    let mut cut_offsets: Vec<Vec<Rat>> = vec![Vec::new(); base.edge_count()];
    for p in marks {
        if let PointRef::Interior(e, off) = p {
            cut_offsets[e.0].push(off.clone());
        }
    }
    for offs in &mut cut_offsets {
        offs.sort();
        offs.dedup();
    }

    let mut vertex_names: BTreeSet<String> = base
        .vertex_indices()
        .map(|v| base.vertex_id(v).to_string())
        .collect();
    let mut edge_names: BTreeSet<String> =
        base.edge_indices().map(|e| base.edge(e).id.clone()).collect();
    fn fresh(taken: &mut BTreeSet<String>, want: String) -> String {
        let mut name = want;
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        name
    }

    // per base edge: vertex names and offsets of the cut sequence (ends
    // included), and the id given to each segment
    struct Plan {
        names: Vec<String>,
        offs: Vec<Rat>,
        segment_ids: Vec<String>,
    }
    let mut mark_names: Vec<(String, EdgeIx, Rat)> = Vec::new();
    let mut plans: Vec<Plan> = Vec::new();
    for e in base.edge_indices() {
        let edge = base.edge(e);
        let mut names = vec![base.vertex_id(edge.lo).to_string()];
        let mut offs = vec![Rat::zero()];
        for off in &cut_offsets[e.0] {
            let want = base.point_name(&PointRef::Interior(e, off.clone()));
            let name = fresh(&mut vertex_names, want);
            mark_names.push((name.clone(), e, off.clone()));
            names.push(name);
            offs.push(off.clone());
        }
        names.push(base.vertex_id(edge.hi).to_string());
        offs.push(edge.length.clone());

        let pieces = names.len() - 1;
        let segment_ids = if pieces == 1 {
            vec![edge.id.clone()]
        } else {
            (0..pieces)
                .map(|k| fresh(&mut edge_names, format!("{}.{}", edge.id, k)))
                .collect()
        };
        plans.push(Plan { names, offs, segment_ids });
    }

    let mut raw = RawGraph {
        vertices: vertex_names.iter().cloned().collect(),
        edges: Vec::new(),
    };
    for plan in &plans {
        for k in 0..plan.segment_ids.len() {
            raw.edges.push(RawEdge {
                id: plan.segment_ids[k].clone(),
                ends: (plan.names[k].clone(), plan.names[k + 1].clone()),
                length: plan.offs[k + 1].clone() - plan.offs[k].clone(),
            });
        }
    }
    let model = crate::graph::validate_graph(&raw, false)
        .expect("refinement of a valid graph is valid");

    let base_to_model_vertex: Vec<VertexIx> = base
        .vertex_indices()
        .map(|v| model.vertex_by_id(base.vertex_id(v)).expect("kept vertex"))
        .collect();
    let mut model_to_base_vertex = vec![None; model.vertex_count()];
    for v in base.vertex_indices() {
        model_to_base_vertex[base_to_model_vertex[v.0].0] = Some(v);
    }
    let mut mark_location = vec![None; model.vertex_count()];
    let mut cuts: Vec<Vec<(Rat, VertexIx)>> = vec![Vec::new(); base.edge_count()];
    for (name, e, off) in &mark_names {
        let mv = model.vertex_by_id(name).expect("mark vertex");
        mark_location[mv.0] = Some((*e, off.clone()));
        cuts[e.0].push((off.clone(), mv));
    }

    let mut segments: Vec<Vec<EdgeIx>> = vec![Vec::new(); base.edge_count()];
    let mut origin = vec![(EdgeIx(0), Rat::zero(), Rat::zero()); model.edge_count()];
    for e in base.edge_indices() {
        let plan = &plans[e.0];
        for k in 0..plan.segment_ids.len() {
            let me = model.edge_by_id(&plan.segment_ids[k]).expect("segment edge");
            segments[e.0].push(me);
            let med = model.edge(me);
            let (lo_off, hi_off) = if model.vertex_id(med.lo) == plan.names[k] {
                (plan.offs[k].clone(), plan.offs[k + 1].clone())
            } else {
                (plan.offs[k + 1].clone(), plan.offs[k].clone())
            };
            origin[me.0] = (e, lo_off, hi_off);
        }
    }

    RefinedModel {
        base: base.clone(),
        model,
        base_to_model_vertex,
        model_to_base_vertex,
        mark_location,
        cuts,
        segments,
        origin,
    }
}

impl RefinedModel {
    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn model(&self) -> &MetricGraph {
        &self.model
    }

    pub fn model_vertex_of_base(&self, v: VertexIx) -> VertexIx {
        self.base_to_model_vertex[v.0]
    }

    pub fn base_vertex_of_model(&self, v: VertexIx) -> Option<VertexIx> {
        self.model_to_base_vertex[v.0]
    }

    pub fn is_mark(&self, v: VertexIx) -> bool {
        self.mark_location[v.0].is_some()
    }

    /// Model edges covering a base edge, in offset order.
    pub fn segments_of(&self, e: EdgeIx) -> &[EdgeIx] {
        &self.segments[e.0]
    }

    /// Maps a base point onto the model.
    pub fn to_model_point(&self, p: &PointRef) -> PointRef {
        match p {
            PointRef::Vertex(v) => PointRef::Vertex(self.base_to_model_vertex[v.0]),
            PointRef::Interior(e, off) => {
                for (cut, mv) in &self.cuts[e.0] {
                    if cut == off {
                        return PointRef::Vertex(*mv);
                    }
                }
                for &me in &self.segments[e.0] {
                    let (_, lo_off, hi_off) = &self.origin[me.0];
                    let (a, b) = if lo_off < hi_off {
                        (lo_off, hi_off)
                    } else {
                        (hi_off, lo_off)
                    };
                    if off > a && off < b {
                        let model_off = if lo_off < hi_off {
                            off.clone() - lo_off.clone()
                        } else {
                            lo_off.clone() - off.clone()
                        };
                        return PointRef::Interior(me, model_off);
                    }
                }
                unreachable!("offset inside some segment of a valid point")
            }
        }
    }

    /// Maps a model point back onto the base graph.
    pub fn to_base_point(&self, p: &PointRef) -> PointRef {
        match p {
            PointRef::Vertex(v) => match self.model_to_base_vertex[v.0] {
                Some(b) => PointRef::Vertex(b),
                None => {
                    let (e, off) = self.mark_location[v.0].clone().expect("mark");
                    PointRef::Interior(e, off)
                }
            },
            PointRef::Interior(me, moff) => {
                let (e, lo_off, hi_off) = &self.origin[me.0];
                let off = if lo_off < hi_off {
                    lo_off.clone() + moff.clone()
                } else {
                    lo_off.clone() - moff.clone()
                };
                PointRef::Interior(*e, off)
            }
        }
    }

    /// The model vertex at a base point, if the point is one.
    pub fn model_vertex_of_point(&self, p: &PointRef) -> Option<VertexIx> {
        match self.to_model_point(p) {
            PointRef::Vertex(v) => Some(v),
            PointRef::Interior(..) => None,
        }
    }
}

/// An open subset of the model: interior vertices, fully covered open edges,
/// and stubs — edges whose interior belongs to the region while exactly one
/// end does (the recorded one). `boundary` is the derived set of vertices
/// facing the region from outside.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct OpenRegion {
    pub interior_vertices: BTreeSet<VertexIx>,
    pub full_edges: BTreeSet<EdgeIx>,
    pub stubs: BTreeSet<(EdgeIx, VertexIx)>,
    pub boundary: BTreeSet<VertexIx>,
}

impl OpenRegion {
    pub fn is_whole(&self, g: &MetricGraph) -> bool {
        self.interior_vertices.len() == g.vertex_count() && self.stubs.is_empty()
    }

    /// True if the edge's open interior lies in the region.
    pub fn covers_edge_interior(&self, e: EdgeIx) -> bool {
        self.full_edges.contains(&e) || self.stubs.iter().any(|(se, _)| *se == e)
    }

    /// True if the model point lies in the open region.
    pub fn contains_point(&self, p: &PointRef) -> bool {
        match p {
            PointRef::Vertex(v) => self.interior_vertices.contains(v),
            PointRef::Interior(e, _) => self.covers_edge_interior(*e),
        }
    }
}

/// A closed subset of the model made of vertices and whole closed edges.
/// Every included edge must have both of its ends included.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ClosedLocus {
    pub vertices: BTreeSet<VertexIx>,
    pub closed_edges: BTreeSet<EdgeIx>,
}

impl ClosedLocus {
    pub fn new(
        g: &MetricGraph,
        vertices: BTreeSet<VertexIx>,
        closed_edges: BTreeSet<EdgeIx>,
    ) -> Result<Self> {
        for &e in &closed_edges {
            let edge = g.edge(e);
            if !vertices.contains(&edge.lo) || !vertices.contains(&edge.hi) {
                return Err(Error::InvalidParameter {
                    detail: format!("edge {} lacks an endpoint in the locus", edge.id),
                });
            }
        }
        Ok(ClosedLocus { vertices, closed_edges })
    }

    pub fn whole(g: &MetricGraph) -> Self {
        ClosedLocus {
            vertices: g.vertex_indices().collect(),
            closed_edges: g.edge_indices().collect(),
        }
    }

    pub fn is_whole(&self, g: &MetricGraph) -> bool {
        self.vertices.len() == g.vertex_count() && self.closed_edges.len() == g.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True if the model point lies in the closed set.
    pub fn contains_point(&self, p: &PointRef) -> bool {
        match p {
            PointRef::Vertex(v) => self.vertices.contains(v),
            PointRef::Interior(e, _) => self.closed_edges.contains(e),
        }
    }

    /// Connectivity of the locus as a subgraph.
    pub fn is_connected(&self, g: &MetricGraph) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return false;
        };
        let mut seen: BTreeSet<VertexIx> = [start].into();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &e in g.edges_at(v) {
                if !self.closed_edges.contains(&e) {
                    continue;
                }
                let u = g.edge(e).other_end(v);
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

/// The connected component of `Γ ∖ blocked` containing `seed`, as an open
/// region of the model. Stubs toward blocked vertices are included; edges
/// with both ends blocked are excluded entirely.
pub fn component_region(
    g: &MetricGraph,
    blocked: &BTreeSet<VertexIx>,
    seed: VertexIx,
) -> Result<OpenRegion> {
    if blocked.contains(&seed) {
        return Err(Error::InvalidParameter {
            detail: format!("seed vertex {} is blocked", g.vertex_id(seed)),
        });
    }
    let mut interior: BTreeSet<VertexIx> = [seed].into();
    let mut stack = vec![seed];
    while let Some(v) = stack.pop() {
        for &e in g.edges_at(v) {
            let u = g.edge(e).other_end(v);
            if !blocked.contains(&u) && interior.insert(u) {
                stack.push(u);
            }
        }
    }
    let mut region = OpenRegion {
        interior_vertices: interior,
        ..OpenRegion::default()
    };
    for e in g.edge_indices() {
        let edge = g.edge(e);
        let lo_in = region.interior_vertices.contains(&edge.lo);
        let hi_in = region.interior_vertices.contains(&edge.hi);
        match (lo_in, hi_in) {
            (true, true) => {
                region.full_edges.insert(e);
            }
            (true, false) => {
                region.stubs.insert((e, edge.lo));
                region.boundary.insert(edge.hi);
            }
            (false, true) => {
                region.stubs.insert((e, edge.hi));
                region.boundary.insert(edge.lo);
            }
            (false, false) => {}
        }
    }
    Ok(region)
}
