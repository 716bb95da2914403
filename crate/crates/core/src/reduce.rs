//! Reduced divisors: Dhar burning, the distance-parametrized chip move, the
//! reduction loop, emptiness certificates for arbitrary divisor classes, and
//! the support locus of a linear system.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{EdgeIx, MetricGraph, PointRef, VertexIx};
use crate::rat::Rat;
use crate::refine::{component_region, refine, ClosedLocus, OpenRegion, RefinedModel};

/// Resource guards for the iterative algorithms.
#[derive(Clone, Debug)]
pub struct Caps {
    /// maximum move rounds in one reduction
    pub iterations: usize,
    /// maximum free model vertices in a region search
    pub free_vertices: usize,
    /// maximum candidate sets examined in one search
    pub subsets: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            iterations: 1_000_000,
            free_vertices: 20,
            subsets: 50_000,
        }
    }
}

/// One Dhar run: the stalled saturated set (empty exactly when the divisor
/// is reduced), the burn layers in order, and the final free region.
#[derive(Clone, Debug)]
pub struct DharOutcome {
    pub model: RefinedModel,
    pub s: BTreeSet<PointRef>,
    pub burn_layers: Vec<BTreeSet<PointRef>>,
    pub final_region: OpenRegion,
}

/// Chip counts of `d` on the vertices of the refining model.
fn model_coeffs(model: &RefinedModel, d: &Divisor) -> BTreeMap<VertexIx, i64> {
    let mut out = BTreeMap::new();
    for (p, c) in d.iter() {
        let v = model
            .model_vertex_of_point(p)
            .expect("model refines the divisor support");
        *out.entry(v).or_insert(0) += c;
    }
    out
}

/// One burning round: grows the free region of `v0m` against `blocked` and
/// lists the blocked boundary vertices whose chips fall short of their
/// out-degree, together with that out-degree.
fn burn_round(
    g: &MetricGraph,
    coeffs: &BTreeMap<VertexIx, i64>,
    blocked: &BTreeSet<VertexIx>,
    v0m: VertexIx,
) -> Result<(OpenRegion, Vec<(VertexIx, usize)>)> {
    let region = component_region(g, blocked, v0m)?;
    let mut outdeg: BTreeMap<VertexIx, usize> = BTreeMap::new();
    for &(e, interior_end) in &region.stubs {
        let v = g.edge(e).other_end(interior_end);
        *outdeg.entry(v).or_insert(0) += 1;
    }
    let nonsaturated = outdeg
        .into_iter()
        .filter(|&(v, n)| coeffs.get(&v).copied().unwrap_or(0) < n as i64)
        .collect();
    Ok((region, nonsaturated))
}

fn check_effective_off_base(g: &MetricGraph, d: &Divisor, v0: &PointRef) -> Result<()> {
    for (p, c) in d.iter() {
        if c < 0 && p != v0 {
            return Err(Error::NotEffective {
                point: g.point_name(p),
            });
        }
    }
    Ok(())
}

/// Dhar's burning algorithm seeded at `v0`. The divisor must be effective
/// away from `v0`.
pub fn dhar(g: &MetricGraph, d: &Divisor, v0: &PointRef) -> Result<DharOutcome> {
    check_effective_off_base(g, d, v0)?;
    let mut marks: BTreeSet<PointRef> = d.support().cloned().collect();
    marks.insert(v0.clone());
    let model = refine(g, &marks);
    let v0m = model.model_vertex_of_point(v0).expect("base point is marked");
    let coeffs = model_coeffs(&model, d);

    let mut s: BTreeSet<VertexIx> = coeffs.keys().copied().filter(|&v| v != v0m).collect();
    let mut burn_layers = Vec::new();
    loop {
        let (region, nonsaturated) = burn_round(model.model(), &coeffs, &s, v0m)?;
        if nonsaturated.is_empty() {
            let to_base = |v: &VertexIx| model.to_base_point(&PointRef::Vertex(*v));
            return Ok(DharOutcome {
                s: s.iter().map(to_base).collect(),
                burn_layers,
                final_region: region,
                model,
            });
        }
        let layer: BTreeSet<VertexIx> = nonsaturated.into_iter().map(|(v, _)| v).collect();
        for v in &layer {
            s.remove(v);
        }
        burn_layers.push(
            layer
                .iter()
                .map(|&v| model.to_base_point(&PointRef::Vertex(v)))
                .collect(),
        );
    }
}

/// True when burning against the blocked set `s` exposes a boundary point
/// whose chips fall short of its out-degree.
pub fn has_nonsaturated_boundary(
    g: &MetricGraph,
    d: &Divisor,
    s: &BTreeSet<PointRef>,
    v0: &PointRef,
) -> Result<bool> {
    let mut marks: BTreeSet<PointRef> = d.support().cloned().collect();
    marks.extend(s.iter().cloned());
    marks.insert(v0.clone());
    let model = refine(g, &marks);
    let v0m = model.model_vertex_of_point(v0).expect("base point is marked");
    let blocked: BTreeSet<VertexIx> = s
        .iter()
        .map(|p| model.model_vertex_of_point(p).expect("blocked point is marked"))
        .collect();
    let coeffs = model_coeffs(&model, d);
    let (_, nonsaturated) = burn_round(model.model(), &coeffs, &blocked, v0m)?;
    Ok(!nonsaturated.is_empty())
}

/// True when `d` is `v0`-reduced: effective away from `v0` and burnt away
/// completely by Dhar's algorithm.
pub fn is_reduced(g: &MetricGraph, d: &Divisor, v0: &PointRef) -> bool {
    match dhar(g, d, v0) {
        Ok(out) => out.s.is_empty(),
        Err(_) => false,
    }
}

/// Out-degree of a boundary vertex of the closed locus `x`: the number of
/// model edges at `v` leaving the locus, with multiplicity.
pub fn outdeg(model: &RefinedModel, x: &ClosedLocus, v: VertexIx) -> Result<usize> {
    let g = model.model();
    if !x.vertices.contains(&v) {
        return Err(Error::NotBoundary {
            vertex: g.vertex_id(v).to_string(),
        });
    }
    let n = g
        .edges_at(v)
        .iter()
        .filter(|e| !x.closed_edges.contains(e))
        .count();
    if n == 0 {
        return Err(Error::NotBoundary {
            vertex: g.vertex_id(v).to_string(),
        });
    }
    Ok(n)
}

/// A maximal interval swept by one outgoing direction, as offsets on a
/// model edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweptSeg {
    pub edge: EdgeIx,
    pub from: Rat,
    pub to: Rat,
}

/// The action of the move on one component of the blocked complement.
#[derive(Clone, Debug)]
pub struct MoveComponent {
    pub x: ClosedLocus,
    /// distance traveled by every outgoing direction of this component
    pub d: Rat,
    pub debits: Vec<(PointRef, i64)>,
    pub landings: Vec<(PointRef, i64)>,
    pub swept: Vec<SweptSeg>,
}

#[derive(Clone, Debug)]
pub struct MoveOutcome {
    pub model: RefinedModel,
    pub components: Vec<MoveComponent>,
    pub result: Divisor,
}

/// One corridor from a component boundary vertex into the free region:
/// the model edges traversed (with their entry vertices) up to the first
/// stopping vertex, and the total length.
struct Corridor {
    path: Vec<(EdgeIx, VertexIx)>,
    length: Rat,
}

fn trace_corridor(
    g: &MetricGraph,
    region: &OpenRegion,
    targets: &BTreeSet<VertexIx>,
    start: VertexIx,
    first_edge: EdgeIx,
) -> Result<Corridor> {
    let mut path = Vec::new();
    let mut length = Rat::zero();
    let mut from = start;
    let mut edge = first_edge;
    loop {
        path.push((edge, from));
        length += g.edge(edge).length.clone();
        let reached = g.edge(edge).other_end(from);
        if targets.contains(&reached) {
            return Ok(Corridor { path, length });
        }
        if !region.interior_vertices.contains(&reached) || g.degree(reached) != 2 {
            return Err(Error::InternalGeometry {
                detail: format!(
                    "corridor from {} stalled at {}",
                    g.vertex_id(start),
                    g.vertex_id(reached)
                ),
            });
        }
        let next = g
            .edges_at(reached)
            .iter()
            .copied()
            .find(|&e| e != edge)
            .expect("degree-2 vertex has a second edge");
        from = reached;
        edge = next;
    }
}

/// Walks `dist` along a corridor; returns the landing point and the swept
/// intervals.
fn walk_corridor(
    g: &MetricGraph,
    corridor: &Corridor,
    dist: &Rat,
) -> (PointRef, Vec<SweptSeg>) {
    let mut remaining = dist.clone();
    let mut swept = Vec::new();
    for &(e, from) in &corridor.path {
        let edge = g.edge(e);
        let len = edge.length.clone();
        if remaining <= len {
            let (seg_from, seg_to, off) = if from == edge.lo {
                (Rat::zero(), remaining.clone(), remaining.clone())
            } else {
                (len.clone() - remaining.clone(), len.clone(), len.clone() - remaining.clone())
            };
            swept.push(SweptSeg { edge: e, from: seg_from, to: seg_to });
            let landing = g.point_on_edge(e, off).expect("offset within the edge");
            return (landing, swept);
        }
        swept.push(SweptSeg { edge: e, from: Rat::zero(), to: len.clone() });
        remaining -= len;
    }
    unreachable!("walk distance never exceeds the corridor length")
}

/// The move determined by a saturated blocked set `s`: every component of
/// the complement of the free region expands rigidly toward the region,
/// debiting its boundary out-degrees and landing one chip per outgoing
/// direction. With `t = None` the move runs to its full distance (the
/// nearest stopping vertex); `Some(t)` with `0 < t <= 1` scales it.
pub fn move_step(
    g: &MetricGraph,
    d: &Divisor,
    s: &BTreeSet<PointRef>,
    v0: &PointRef,
    t: Option<&Rat>,
) -> Result<MoveOutcome> {
    let one = Rat::one();
    let t = t.cloned().unwrap_or_else(Rat::one);
    if t <= Rat::zero() || t > one {
        return Err(Error::InvalidParameter {
            detail: format!("move parameter {} is outside (0, 1]", crate::rat::fmt_rat(&t)),
        });
    }
    if s.is_empty() {
        return Err(Error::InvalidParameter {
            detail: "blocked set is empty".to_string(),
        });
    }
    if s.contains(v0) {
        return Err(Error::InvalidParameter {
            detail: format!("blocked set contains the base point {}", g.point_name(v0)),
        });
    }
    check_effective_off_base(g, d, v0)?;

    let mut marks: BTreeSet<PointRef> = d.support().cloned().collect();
    marks.extend(s.iter().cloned());
    marks.insert(v0.clone());
    let model = refine(g, &marks);
    let mg = model.model();
    let v0m = model.model_vertex_of_point(v0).expect("base point is marked");
    let blocked: BTreeSet<VertexIx> = s
        .iter()
        .map(|p| model.model_vertex_of_point(p).expect("blocked point is marked"))
        .collect();
    let coeffs = model_coeffs(&model, d);

    let (region, nonsaturated) = burn_round(mg, &coeffs, &blocked, v0m)?;
    if let Some(&(v, _)) = nonsaturated.first() {
        return Err(Error::NotSaturated {
            point: g.point_name(&model.to_base_point(&PointRef::Vertex(v))),
        });
    }

    // components of the complement of the free region
    let outside: BTreeSet<VertexIx> = mg
        .vertex_indices()
        .filter(|v| !region.interior_vertices.contains(v))
        .collect();
    let mut component_of: BTreeMap<VertexIx, usize> = BTreeMap::new();
    let mut comps: Vec<(BTreeSet<VertexIx>, BTreeSet<EdgeIx>)> = Vec::new();
    for &seed in &outside {
        if component_of.contains_key(&seed) {
            continue;
        }
        let ix = comps.len();
        let mut vs: BTreeSet<VertexIx> = [seed].into();
        let mut es: BTreeSet<EdgeIx> = BTreeSet::new();
        let mut stack = vec![seed];
        component_of.insert(seed, ix);
        while let Some(v) = stack.pop() {
            for &e in mg.edges_at(v) {
                if region.covers_edge_interior(e) {
                    continue;
                }
                es.insert(e);
                let u = mg.edge(e).other_end(v);
                if vs.insert(u) {
                    component_of.insert(u, ix);
                    stack.push(u);
                }
            }
        }
        comps.push((vs, es));
    }

    // stopping vertices: base-backed interior vertices and the base point
    let mut targets: BTreeSet<VertexIx> = region
        .interior_vertices
        .iter()
        .copied()
        .filter(|&v| model.base_vertex_of_model(v).is_some())
        .collect();
    targets.insert(v0m);

    // germs per component, in canonical stub order
    let mut germs: Vec<Vec<(VertexIx, EdgeIx)>> = vec![Vec::new(); comps.len()];
    for &(e, interior_end) in &region.stubs {
        let v = mg.edge(e).other_end(interior_end);
        let ix = component_of[&v];
        germs[ix].push((v, e));
    }
    for g_list in &mut germs {
        g_list.sort();
    }

    let mut result = d.clone();
    let mut components = Vec::new();
    for (ix, (vs, es)) in comps.iter().enumerate() {
        let corridors: Vec<(VertexIx, Corridor)> = germs[ix]
            .iter()
            .map(|&(v, e)| trace_corridor(mg, &region, &targets, v, e).map(|c| (v, c)))
            .collect::<Result<_>>()?;
        let full = corridors
            .iter()
            .map(|(_, c)| c.length.clone())
            .min()
            .expect("every complement component touches the free region");
        let dist = t.clone() * full;

        let mut debit_map: BTreeMap<PointRef, i64> = BTreeMap::new();
        let mut landing_map: BTreeMap<PointRef, i64> = BTreeMap::new();
        let mut swept = Vec::new();
        for (v, corridor) in &corridors {
            *debit_map
                .entry(model.to_base_point(&PointRef::Vertex(*v)))
                .or_insert(0) += 1;
            let (landing, segs) = walk_corridor(mg, corridor, &dist);
            *landing_map.entry(model.to_base_point(&landing)).or_insert(0) += 1;
            swept.extend(segs);
        }
        for (p, c) in &debit_map {
            result.add_to(p.clone(), -c);
        }
        for (p, c) in &landing_map {
            result.add_to(p.clone(), *c);
        }
        components.push(MoveComponent {
            x: ClosedLocus {
                vertices: vs.clone(),
                closed_edges: es.clone(),
            },
            d: dist,
            debits: debit_map.into_iter().collect(),
            landings: landing_map.into_iter().collect(),
            swept,
        });
    }

    Ok(MoveOutcome { model, components, result })
}

/// The full iterate record of a reduction.
#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub divisors: Vec<Divisor>,
    pub steps: Vec<(DharOutcome, MoveOutcome)>,
}

/// Reduces a divisor that is effective away from `v0` to its `v0`-reduced
/// form by alternating Dhar runs and full moves.
pub fn reduce_effective(
    g: &MetricGraph,
    d: &Divisor,
    v0: &PointRef,
    caps: &Caps,
) -> Result<(Divisor, ReductionTrace)> {
    let mut trace = ReductionTrace {
        divisors: vec![d.clone()],
        steps: Vec::new(),
    };
    let mut cur = d.clone();
    loop {
        let burn = dhar(g, &cur, v0)?;
        if burn.s.is_empty() {
            return Ok((cur, trace));
        }
        if trace.steps.len() >= caps.iterations {
            return Err(Error::IterationCapExceeded { cap: caps.iterations });
        }
        let mv = move_step(g, &cur, &burn.s, v0, None)?;
        cur = mv.result.clone();
        trace.divisors.push(cur.clone());
        trace.steps.push((burn, mv));
    }
}

/// Proof that a divisor class has no effective representative: at `failed_at`
/// the best representative holds `available` chips but `required` are needed.
#[derive(Clone, Debug)]
pub struct EmptyCertificate {
    pub failed_at: PointRef,
    pub required: i64,
    pub available: i64,
    /// index of the demand point in canonical order
    pub stage: usize,
}

#[derive(Clone, Debug)]
pub enum ReduceOutcome {
    Reduced(Divisor),
    CertifiedEmpty(EmptyCertificate),
}

/// Reduces an arbitrary divisor or certifies that its class holds no
/// effective representative. The negative part is discharged greedily in
/// canonical point order: each demand point gets the reduced form of the
/// remaining effective part, which concentrates the maximum available chips
/// there.
pub fn reduce_or_empty(
    g: &MetricGraph,
    d: &Divisor,
    v0: &PointRef,
    caps: &Caps,
) -> Result<ReduceOutcome> {
    let mut r = d.positive_part();
    let neg = d.negative_part();
    for (stage, (q, need)) in neg.iter().enumerate() {
        let (rq, _) = reduce_effective(g, &r, q, caps)?;
        let have = rq.coeff(q);
        if have < need {
            return Ok(ReduceOutcome::CertifiedEmpty(EmptyCertificate {
                failed_at: q.clone(),
                required: need,
                available: have,
                stage,
            }));
        }
        r = rq.sub(&Divisor::from_entries([(q.clone(), need)]));
    }
    let (rf, _) = reduce_effective(g, &r, v0, caps)?;
    Ok(ReduceOutcome::Reduced(rf))
}

/// The closed support of a nonempty linear system together with the open
/// components of its complement.
#[derive(Clone, Debug)]
pub struct SupportLocus {
    pub model: RefinedModel,
    pub locus: ClosedLocus,
    pub regions: Vec<OpenRegion>,
}

/// Computes the support locus of `|d|` by chaining reduced representatives
/// through every vertex: a vertex is outside the locus exactly when its
/// reduced representative has no chip there, and its free component is then
/// a whole complement component of the locus.
pub fn support_locus(g: &MetricGraph, d: &Divisor, caps: &Caps) -> Result<SupportLocus> {
    let mut reps: Vec<(VertexIx, Divisor)> = Vec::new();
    let mut cur: Option<Divisor> = None;
    for w in g.vertex_indices() {
        let base = PointRef::Vertex(w);
        let rep = match cur {
            None => match reduce_or_empty(g, d, &base, caps)? {
                ReduceOutcome::Reduced(r) => r,
                ReduceOutcome::CertifiedEmpty(_) => return Err(Error::EmptySystem),
            },
            Some(prev) => reduce_effective(g, &prev, &base, caps)?.0,
        };
        cur = Some(rep.clone());
        reps.push((w, rep));
    }

    let mut marks: BTreeSet<PointRef> = BTreeSet::new();
    for (_, rep) in &reps {
        marks.extend(rep.support().cloned());
    }
    let model = refine(g, &marks);

    let mut regions: BTreeSet<OpenRegion> = BTreeSet::new();
    for (w, rep) in &reps {
        if rep.coeff(&PointRef::Vertex(*w)) != 0 {
            continue;
        }
        let blocked: BTreeSet<VertexIx> = rep
            .support()
            .map(|p| model.model_vertex_of_point(p).expect("support is marked"))
            .collect();
        let seed = model.model_vertex_of_base(*w);
        regions.insert(component_region(model.model(), &blocked, seed)?);
    }
    let regions: Vec<OpenRegion> = regions.into_iter().collect();

    let mg = model.model();
    let vertices: BTreeSet<VertexIx> = mg
        .vertex_indices()
        .filter(|v| regions.iter().all(|r| !r.interior_vertices.contains(v)))
        .collect();
    let closed_edges: BTreeSet<EdgeIx> = mg
        .edge_indices()
        .filter(|&e| regions.iter().all(|r| !r.covers_edge_interior(e)))
        .collect();
    Ok(SupportLocus {
        locus: ClosedLocus { vertices, closed_edges },
        regions,
        model,
    })
}
