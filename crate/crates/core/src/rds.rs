//! Rank-determining sets: special open regions, the search for a special
//! region avoiding a point set, verdicts with separating witness divisors,
//! the locus closure, minimality, and constructions.

use std::collections::{BTreeMap, BTreeSet};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{EdgeIx, MetricGraph, PointRef, VertexIx};
use crate::rat::rint;
use crate::reduce::{is_reduced, Caps};
use crate::refine::{refine, OpenRegion, RefinedModel};

/// True when the nonempty open region is special: every component of its
/// complement has a vertex with at least two edges into the region. The
/// whole graph is trivially special. Cross-checked by burning the boundary
/// divisor from inside the region.
pub fn is_special_region(model: &RefinedModel, region: &OpenRegion) -> Result<bool> {
    let g = model.model();
    if region.interior_vertices.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let rebuilt = region_of(g, &region.interior_vertices);
    if rebuilt != *region {
        return Err(Error::InvalidParameter {
            detail: "region fields do not match its interior vertices".to_string(),
        });
    }
    if region.is_whole(g) {
        return Ok(true);
    }
    if !connected_through(g, &region.interior_vertices, &region.full_edges) {
        return Err(Error::NotConnected);
    }

    let special = complement_components(g, &region.interior_vertices)
        .iter()
        .all(|(vs, _)| vs.iter().any(|&v| edges_into(g, &region.interior_vertices, v) >= 2));

    // burning the boundary divisor from inside must consume everything
    // exactly when the region is special
    let boundary_divisor = Divisor::from_entries(
        region.boundary.iter().map(|&v| (PointRef::Vertex(v), 1)),
    );
    let seed = PointRef::Vertex(*region.interior_vertices.iter().next().expect("nonempty"));
    let burned_out = is_reduced(g, &boundary_divisor, &seed);
    if special != burned_out {
        return Err(Error::InternalCheck {
            detail: "boundary burning disagrees with the out-degree criterion".to_string(),
        });
    }
    Ok(special)
}

/// The open region with the given interior vertices: induced full edges
/// plus every outgoing stub.
fn region_of(g: &MetricGraph, interior: &BTreeSet<VertexIx>) -> OpenRegion {
    let mut region = OpenRegion {
        interior_vertices: interior.clone(),
        ..OpenRegion::default()
    };
    for e in g.edge_indices() {
        let edge = g.edge(e);
        match (interior.contains(&edge.lo), interior.contains(&edge.hi)) {
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
    region
}

fn connected_through(
    g: &MetricGraph,
    vertices: &BTreeSet<VertexIx>,
    edges: &BTreeSet<EdgeIx>,
) -> bool {
    let Some(&start) = vertices.iter().next() else {
        return false;
    };
    let mut seen: BTreeSet<VertexIx> = [start].into();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &e in g.edges_at(v) {
            if !edges.contains(&e) {
                continue;
            }
            let u = g.edge(e).other_end(v);
            if vertices.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == vertices.len()
}

/// Connected components of the closed complement of a region interior:
/// vertices outside it and edges with no end inside it.
fn complement_components(
    g: &MetricGraph,
    interior: &BTreeSet<VertexIx>,
) -> Vec<(BTreeSet<VertexIx>, BTreeSet<EdgeIx>)> {
    let mut comps = Vec::new();
    let mut seen: BTreeSet<VertexIx> = BTreeSet::new();
    for seed in g.vertex_indices() {
        if interior.contains(&seed) || seen.contains(&seed) {
            continue;
        }
        let mut vs: BTreeSet<VertexIx> = [seed].into();
        let mut es: BTreeSet<EdgeIx> = BTreeSet::new();
        let mut stack = vec![seed];
        seen.insert(seed);
        while let Some(v) = stack.pop() {
            for &e in g.edges_at(v) {
                let u = g.edge(e).other_end(v);
                if interior.contains(&u) {
                    continue;
                }
                es.insert(e);
                if vs.insert(u) {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        comps.push((vs, es));
    }
    comps
}

/// Number of edges at `v` whose other end lies in `interior`, with
/// multiplicity.
fn edges_into(g: &MetricGraph, interior: &BTreeSet<VertexIx>, v: VertexIx) -> usize {
    g.edges_at(v)
        .iter()
        .filter(|&&e| interior.contains(&g.edge(e).other_end(v)))
        .count()
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// restrict the search to regions containing this point
    pub containing: Option<PointRef>,
    /// collect every witness instead of stopping at the first
    pub enumerate_all: bool,
}

/// Certificate that one complement component satisfies the out-degree
/// criterion.
#[derive(Clone, Debug)]
pub struct ComplementCert {
    pub component: BTreeSet<VertexIx>,
    pub vertex: VertexIx,
    pub edges_into_w: usize,
}

/// A special open region avoiding the tested point set, described by its
/// interior model vertices `w`.
#[derive(Clone, Debug)]
pub struct SpecialWitness {
    pub model: RefinedModel,
    pub w: BTreeSet<VertexIx>,
    pub region: OpenRegion,
    pub complement_report: Vec<ComplementCert>,
}

/// Finds special open regions that avoid every point of `a`. Any such
/// region is a union of model vertices, their induced edges, and all
/// outgoing stubs, so enumerating connected vertex sets is exhaustive.
pub fn special_avoiding(
    g: &MetricGraph,
    a: &BTreeSet<PointRef>,
    opts: &SearchOptions,
    caps: &Caps,
) -> Result<Vec<SpecialWitness>> {
    let mut marks = a.clone();
    if let Some(p) = &opts.containing {
        marks.insert(p.clone());
    }
    let model = refine(g, &marks);
    let mg = model.model();
    let avoid: BTreeSet<VertexIx> = a
        .iter()
        .map(|p| model.model_vertex_of_point(p).expect("tested point is marked"))
        .collect();
    let containing = opts
        .containing
        .as_ref()
        .map(|p| model.model_vertex_of_point(p).expect("anchor point is marked"));
    if let Some(c) = containing {
        if avoid.contains(&c) {
            return Ok(Vec::new());
        }
    }

    let allowed: Vec<VertexIx> = mg.vertex_indices().filter(|v| !avoid.contains(v)).collect();
    if allowed.len() > caps.free_vertices {
        return Err(Error::SearchCapExceeded { cap: caps.free_vertices });
    }

    let mut found = Vec::new();
    let mut used = 0usize;
    let seeds: Vec<VertexIx> = match containing {
        Some(c) => vec![c],
        None => allowed.clone(),
    };
    let mut banned: BTreeSet<VertexIx> = avoid.clone();
    for &seed in &seeds {
        let mut w: BTreeSet<VertexIx> = [seed].into();
        grow_regions(
            mg,
            &model,
            &banned,
            &mut w,
            &mut used,
            caps,
            opts.enumerate_all,
            &mut found,
        )?;
        if !found.is_empty() && !opts.enumerate_all {
            return Ok(found);
        }
        banned.insert(seed);
    }
    Ok(found)
}

/// Enumerates every connected superset of `w` inside the complement of
/// `banned` exactly once, checking each for specialness.
#[allow(clippy::too_many_arguments)]
fn grow_regions(
    mg: &MetricGraph,
    model: &RefinedModel,
    banned: &BTreeSet<VertexIx>,
    w: &mut BTreeSet<VertexIx>,
    used: &mut usize,
    caps: &Caps,
    enumerate_all: bool,
    found: &mut Vec<SpecialWitness>,
) -> Result<()> {
    *used += 1;
    if *used > caps.subsets {
        return Err(Error::SearchCapExceeded { cap: caps.subsets });
    }

    if w.len() < mg.vertex_count() {
        if let Some(witness) = check_candidate(mg, model, w)? {
            found.push(witness);
            if !enumerate_all {
                return Ok(());
            }
        }
    }

    let mut frontier: Vec<VertexIx> = Vec::new();
    let mut seen: BTreeSet<VertexIx> = BTreeSet::new();
    for &v in w.iter() {
        for &e in mg.edges_at(v) {
            let u = mg.edge(e).other_end(v);
            if !w.contains(&u) && !banned.contains(&u) && seen.insert(u) {
                frontier.push(u);
            }
        }
    }
    frontier.sort();
    let mut local_banned = banned.clone();
    for v in frontier {
        if local_banned.contains(&v) {
            continue;
        }
        w.insert(v);
        grow_regions(mg, model, &local_banned, w, used, caps, enumerate_all, found)?;
        w.remove(&v);
        if !found.is_empty() && !enumerate_all {
            return Ok(());
        }
        local_banned.insert(v);
    }
    Ok(())
}

/// Tests one connected vertex set: its region is special exactly when every
/// complement component has a vertex with two edges into the set.
fn check_candidate(
    mg: &MetricGraph,
    model: &RefinedModel,
    w: &BTreeSet<VertexIx>,
) -> Result<Option<SpecialWitness>> {
    let comps = complement_components(mg, w);
    let mut report = Vec::new();
    for (vs, _) in &comps {
        let cert = vs.iter().find_map(|&v| {
            let n = edges_into(mg, w, v);
            (n >= 2).then_some(ComplementCert {
                component: vs.clone(),
                vertex: v,
                edges_into_w: n,
            })
        });
        match cert {
            Some(c) => report.push(c),
            None => return Ok(None),
        }
    }
    let region = region_of(mg, w);
    if !is_special_region(model, &region)? {
        return Err(Error::InternalCheck {
            detail: "candidate region failed the special test".to_string(),
        });
    }
    Ok(Some(SpecialWitness {
        model: model.clone(),
        w: w.clone(),
        region,
        complement_report: report,
    }))
}

/// Verdict on whether `a` determines the rank of every divisor.
#[derive(Clone, Debug)]
pub struct RdsVerdict {
    pub is_rds: bool,
    pub witness: Option<SpecialWitness>,
    pub witness_divisor: Option<Divisor>,
}

/// A nonempty point set is rank-determining exactly when no proper special
/// open region avoids it.
pub fn is_rank_determining(
    g: &MetricGraph,
    a: &BTreeSet<PointRef>,
    caps: &Caps,
) -> Result<RdsVerdict> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let found = special_avoiding(g, a, &SearchOptions::default(), caps)?;
    match found.into_iter().next() {
        None => Ok(RdsVerdict {
            is_rds: true,
            witness: None,
            witness_divisor: None,
        }),
        Some(w) => {
            let d = witness_divisor(&w)?;
            Ok(RdsVerdict {
                is_rds: false,
                witness: Some(w),
                witness_divisor: Some(d),
            })
        }
    }
}

/// The divisor separating restricted from true rank for a special region:
/// one chip on every boundary vertex plus one chip in the middle of each
/// non-tree edge of every complement component. The result is reduced at
/// the region's interior points, so none of them lies in its system's
/// support.
pub fn witness_divisor(witness: &SpecialWitness) -> Result<Divisor> {
    let mg = witness.model.model();
    let mut chips: Vec<(PointRef, i64)> = witness
        .region
        .boundary
        .iter()
        .map(|&v| (PointRef::Vertex(v), 1))
        .collect();
    for (vs, es) in complement_components(mg, &witness.region.interior_vertices) {
        for e in non_tree_edges(mg, &vs, &es) {
            let half = mg.edge(e).length.clone() / rint(2);
            chips.push((PointRef::Interior(e, half), 1));
        }
    }
    let on_model = Divisor::from_entries(chips.iter().cloned());
    let seed = PointRef::Vertex(
        *witness
            .region
            .interior_vertices
            .iter()
            .next()
            .expect("witness region has interior"),
    );
    if !is_reduced(mg, &on_model, &seed) {
        return Err(Error::InvalidWitness {
            detail: "constructed divisor is not reduced inside the region".to_string(),
        });
    }
    Ok(Divisor::from_entries(
        chips
            .into_iter()
            .map(|(p, c)| (witness.model.to_base_point(&p), c)),
    ))
}

/// Edges of a connected component outside a breadth-first spanning tree.
fn non_tree_edges(
    g: &MetricGraph,
    vs: &BTreeSet<VertexIx>,
    es: &BTreeSet<EdgeIx>,
) -> Vec<EdgeIx> {
    let mut tree: BTreeSet<EdgeIx> = BTreeSet::new();
    let mut seen: BTreeSet<VertexIx> = BTreeSet::new();
    let start = *vs.iter().next().expect("component is nonempty");
    seen.insert(start);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &e in g.edges_at(v) {
            if !es.contains(&e) {
                continue;
            }
            let u = g.edge(e).other_end(v);
            if seen.insert(u) {
                tree.insert(e);
                queue.push_back(u);
            }
        }
    }
    es.iter().copied().filter(|e| !tree.contains(e)).collect()
}

/// The intersection of the closed complements of every special region
/// avoiding `a`, as a locus on the refined model.
pub fn l_closure(
    g: &MetricGraph,
    a: &BTreeSet<PointRef>,
    caps: &Caps,
) -> Result<(RefinedModel, crate::refine::ClosedLocus)> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let found = special_avoiding(
        g,
        a,
        &SearchOptions {
            containing: None,
            enumerate_all: true,
        },
        caps,
    )?;
    let model = match found.first() {
        Some(w) => w.model.clone(),
        None => refine(g, a),
    };
    let mg = model.model();
    let vertices: BTreeSet<VertexIx> = mg
        .vertex_indices()
        .filter(|v| found.iter().all(|w| !w.region.interior_vertices.contains(v)))
        .collect();
    let closed_edges: BTreeSet<EdgeIx> = mg
        .edge_indices()
        .filter(|&e| found.iter().all(|w| !w.region.covers_edge_interior(e)))
        .collect();
    Ok((
        model,
        crate::refine::ClosedLocus { vertices, closed_edges },
    ))
}

/// Minimality verdict for a rank-determining set: which points can be
/// dropped, and for each indispensable point a special region meeting the
/// set only there.
#[derive(Clone, Debug)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    pub removable: Vec<PointRef>,
    pub isolating: BTreeMap<PointRef, SpecialWitness>,
}

/// A rank-determining set is minimal exactly when every point is isolated
/// by some special region. A point that no region isolates is removable.
pub fn is_minimal_rds(
    g: &MetricGraph,
    a: &BTreeSet<PointRef>,
    caps: &Caps,
) -> Result<MinimalityVerdict> {
    if !is_rank_determining(g, a, caps)?.is_rds {
        return Err(Error::NotRds);
    }
    let mut isolating = BTreeMap::new();
    let mut removable = Vec::new();
    if a.len() == 1 {
        // the whole graph is a special region meeting a singleton only there
        let p = a.iter().next().expect("nonempty").clone();
        let model = refine(g, a);
        let w: BTreeSet<VertexIx> = model.model().vertex_indices().collect();
        let region = region_of(model.model(), &w);
        isolating.insert(
            p,
            SpecialWitness {
                model,
                w,
                region,
                complement_report: Vec::new(),
            },
        );
        return Ok(MinimalityVerdict {
            minimal: true,
            removable,
            isolating,
        });
    }
    for p in a {
        let mut rest = a.clone();
        rest.remove(p);
        let found = special_avoiding(
            g,
            &rest,
            &SearchOptions {
                containing: Some(p.clone()),
                enumerate_all: false,
            },
            caps,
        )?;
        match found.into_iter().next() {
            Some(w) => {
                isolating.insert(p.clone(), w);
            }
            None => removable.push(p.clone()),
        }
    }
    Ok(MinimalityVerdict {
        minimal: removable.is_empty(),
        removable,
        isolating,
    })
}

/// Options for the spanning-tree construction. Defaults: breadth-first tree
/// from the first vertex preferring small edge ids, that vertex as the base
/// point, and the midpoint of every non-tree edge.
#[derive(Clone, Debug, Default)]
pub struct SpanningOptions {
    pub tree: Option<BTreeSet<String>>,
    pub base: Option<PointRef>,
    pub cycle_points: Option<Vec<PointRef>>,
}

/// Builds a rank-determining set of size `genus + 1`: one base point on a
/// spanning tree plus one interior point of each remaining edge.
pub fn construct_rds_spanning(
    g: &MetricGraph,
    opts: &SpanningOptions,
) -> Result<BTreeSet<PointRef>> {
    let tree: BTreeSet<EdgeIx> = match &opts.tree {
        Some(ids) => {
            let mut set = BTreeSet::new();
            for id in ids {
                set.insert(g.edge_by_id(id).ok_or_else(|| Error::UnknownEdge {
                    id: id.clone(),
                })?);
            }
            set
        }
        None => {
            let root = g.vertex_indices().next().expect("graph has vertices");
            let mut seen: BTreeSet<VertexIx> = [root].into();
            let mut tree = BTreeSet::new();
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &e in g.edges_at(v) {
                    let u = g.edge(e).other_end(v);
                    if seen.insert(u) {
                        tree.insert(e);
                        queue.push_back(u);
                    }
                }
            }
            tree
        }
    };
    if tree.len() != g.vertex_count() - 1 {
        return Err(Error::NotSpanningTree {
            detail: format!(
                "{} edges given, a spanning tree has {}",
                tree.len(),
                g.vertex_count() - 1
            ),
        });
    }
    if !connected_through(g, &g.vertex_indices().collect(), &tree) {
        return Err(Error::NotSpanningTree {
            detail: "tree edges do not connect every vertex".to_string(),
        });
    }

    let base = match &opts.base {
        None => PointRef::Vertex(g.vertex_indices().next().expect("graph has vertices")),
        Some(p) => {
            let p = match p {
                PointRef::Vertex(_) => p.clone(),
                PointRef::Interior(e, off) => g.point_on_edge(*e, off.clone())?,
            };
            if let PointRef::Interior(e, _) = &p {
                if !tree.contains(e) {
                    return Err(Error::InvalidParameter {
                        detail: format!("base point lies on non-tree edge {}", g.edge(*e).id),
                    });
                }
            }
            p
        }
    };

    let non_tree: Vec<EdgeIx> = g.edge_indices().filter(|e| !tree.contains(e)).collect();
    let cycle_points: Vec<PointRef> = match &opts.cycle_points {
        None => non_tree
            .iter()
            .map(|&e| PointRef::Interior(e, g.edge(e).length.clone() / rint(2)))
            .collect(),
        Some(points) => {
            if points.len() != non_tree.len() {
                return Err(Error::InvalidParameter {
                    detail: format!(
                        "{} cycle points given for {} non-tree edges",
                        points.len(),
                        non_tree.len()
                    ),
                });
            }
            let mut used: BTreeSet<EdgeIx> = BTreeSet::new();
            for p in points {
                let normalized = match p {
                    PointRef::Interior(e, off) => g.point_on_edge(*e, off.clone())?,
                    PointRef::Vertex(_) => p.clone(),
                };
                let PointRef::Interior(e, _) = normalized else {
                    return Err(Error::InvalidParameter {
                        detail: "cycle points must be interior to non-tree edges".to_string(),
                    });
                };
                if tree.contains(&e) || !used.insert(e) {
                    return Err(Error::InvalidParameter {
                        detail: format!(
                            "cycle point on edge {} is not on a distinct non-tree edge",
                            g.edge(e).id
                        ),
                    });
                }
            }
            points.clone()
        }
    };

    let mut set: BTreeSet<PointRef> = cycle_points.into_iter().collect();
    set.insert(base);
    Ok(set)
}

/// Every minimal rank-determining subset of `pool` with at most `max_size`
/// points, found by ascending exhaustive search with memoized verdicts.
pub fn minimal_rds_search(
    g: &MetricGraph,
    pool: &BTreeSet<PointRef>,
    max_size: usize,
    caps: &Caps,
) -> Result<Vec<BTreeSet<PointRef>>> {
    let points: Vec<PointRef> = pool.iter().cloned().collect();
    let mut memo: BTreeMap<BTreeSet<PointRef>, bool> = BTreeMap::new();
    let mut results = Vec::new();
    let mut budget = caps.subsets;
    for k in 1..=max_size.min(points.len()) {
        let mut picks = vec![0usize; k];
        for i in 0..k {
            picks[i] = i;
        }
        loop {
            if budget == 0 {
                return Err(Error::SearchCapExceeded { cap: caps.subsets });
            }
            budget -= 1;
            let set: BTreeSet<PointRef> = picks.iter().map(|&i| points[i].clone()).collect();
            let rds = is_rank_determining(g, &set, caps)?.is_rds;
            memo.insert(set.clone(), rds);
            if rds {
                let minimal = set.iter().all(|p| {
                    let mut smaller = set.clone();
                    smaller.remove(p);
                    smaller.is_empty() || !memo.get(&smaller).copied().unwrap_or(false)
                });
                if minimal {
                    results.push(set);
                }
            }

            if !next_combination(&mut picks, points.len()) {
                break;
            }
        }
    }
    Ok(results)
}

/// Advances `picks` to the next ascending index combination; false when
/// exhausted.
fn next_combination(picks: &mut [usize], n: usize) -> bool {
    let k = picks.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if picks[i] + 1 <= n - (k - i) {
            picks[i] += 1;
            for j in i + 1..k {
                picks[j] = picks[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
