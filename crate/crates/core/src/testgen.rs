//! Pinned example graphs and seeded random generators for tests and
//! benchmarks. Only available with the `testgen` feature.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;

use crate::divisor::Divisor;
use crate::graph::{validate_graph, MetricGraph, PointRef, RawEdge, RawGraph};
use crate::rat::{parse_rat, rat, rint, Rat};

pub type TestRng = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> MetricGraph {
    let raw = RawGraph {
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        edges: edges
            .iter()
            .map(|(id, a, b)| RawEdge {
                id: id.to_string(),
                ends: (a.to_string(), b.to_string()),
                length: rint(1),
            })
            .collect(),
    };
    validate_graph(&raw, false).expect("fixture graph is valid")
}

/// Parses a point by vertex id (`w1`) or edge position (`e1@1/2`).
/// Panics on anything unknown; intended for tests.
pub fn pt(g: &MetricGraph, name: &str) -> PointRef {
    if let Some(v) = g.vertex_by_id(name) {
        return PointRef::Vertex(v);
    }
    let (edge, off) = name
        .split_once('@')
        .unwrap_or_else(|| panic!("point {name} is neither a vertex nor edge@offset"));
    let e = g
        .edge_by_id(edge)
        .unwrap_or_else(|| panic!("unknown edge {edge}"));
    let off = parse_rat(off).unwrap_or_else(|| panic!("bad offset in {name}"));
    g.point_on_edge(e, off)
        .unwrap_or_else(|err| panic!("bad point {name}: {err}"))
}

/// Builds a divisor from (coefficient, point name) pairs.
pub fn dv(g: &MetricGraph, entries: &[(i64, &str)]) -> Divisor {
    Divisor::from_entries(entries.iter().map(|&(c, name)| (pt(g, name), c)))
}

/// Two vertices joined by a single unit edge: the unit tree.
pub fn unit_path() -> MetricGraph {
    build(&["w1", "w2"], &[("e1", "w1", "w2")])
}

/// Two vertices joined by two parallel unit edges: the unit circle of
/// circumference 2.
pub fn cycle2() -> MetricGraph {
    build(&["w1", "w2"], &[("e1", "w1", "w2"), ("e2", "w1", "w2")])
}

/// The complete graph on four vertices with unit edges.
pub fn k4() -> MetricGraph {
    build(
        &["w1", "w2", "w3", "w4"],
        &[
            ("e1", "w1", "w2"),
            ("e2", "w1", "w3"),
            ("e3", "w1", "w4"),
            ("e4", "w2", "w3"),
            ("e5", "w2", "w4"),
            ("e6", "w3", "w4"),
        ],
    )
}

/// The genus-4 worked example: two vertices of degree four joined by a
/// doubled edge, two of degree three, all edges of unit length, with its
/// named midpoints and the two demonstration divisors.
pub struct Fig2 {
    pub graph: MetricGraph,
    /// base point, the midpoint of `e6`
    pub v0: PointRef,
    /// midpoint of the doubled edge `e1`
    pub v1: PointRef,
    /// midpoint of `e3`
    pub v2: PointRef,
    /// midpoint of `e4`
    pub v3: PointRef,
    /// midpoint of `e5`
    pub v4: PointRef,
    pub d1: Divisor,
    pub d2: Divisor,
}

pub fn fig2() -> Fig2 {
    let graph = build(
        &["w1", "w2", "w3", "w4"],
        &[
            ("e1", "w1", "w2"),
            ("e2", "w1", "w2"),
            ("e3", "w3", "w4"),
            ("e4", "w4", "w1"),
            ("e5", "w4", "w2"),
            ("e6", "w3", "w1"),
            ("e7", "w3", "w2"),
        ],
    );
    let d1 = dv(&graph, &[(1, "e1@1/2"), (1, "w3"), (2, "w4")]);
    let d2 = dv(&graph, &[(2, "e1@1/2"), (1, "e3@1/2"), (1, "w3"), (2, "w4")]);
    Fig2 {
        v0: pt(&graph, "e6@1/2"),
        v1: pt(&graph, "e1@1/2"),
        v2: pt(&graph, "e3@1/2"),
        v3: pt(&graph, "e4@1/2"),
        v4: pt(&graph, "e5@1/2"),
        d1,
        d2,
        graph,
    }
}

/// Shape parameters for random connected multigraphs.
#[derive(Clone, Debug)]
pub struct GraphCfg {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// extra edges beyond a spanning tree; equals the genus
    pub max_extra_edges: usize,
    pub unit_lengths: bool,
}

impl Default for GraphCfg {
    fn default() -> Self {
        GraphCfg {
            min_vertices: 2,
            max_vertices: 6,
            max_extra_edges: 4,
            unit_lengths: false,
        }
    }
}

fn random_length(rng: &mut TestRng) -> Rat {
    rat(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

/// A random connected loopless multigraph: a random spanning tree plus up
/// to `max_extra_edges` extra edges, with rational lengths.
pub fn random_graph(rng: &mut TestRng, cfg: &GraphCfg) -> MetricGraph {
    let n = rng.gen_range(cfg.min_vertices..=cfg.max_vertices.max(cfg.min_vertices));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        pairs.push((rng.gen_range(0..i), i));
    }
    for _ in 0..rng.gen_range(0..=cfg.max_extra_edges) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        pairs.push((a.min(b), a.max(b)));
    }
    let raw = RawGraph {
        vertices: (1..=n).map(|i| format!("w{i}")).collect(),
        edges: pairs
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| RawEdge {
                id: format!("e{}", k + 1),
                ends: (format!("w{}", a + 1), format!("w{}", b + 1)),
                length: if cfg.unit_lengths {
                    rint(1)
                } else {
                    random_length(rng)
                },
            })
            .collect(),
    };
    validate_graph(&raw, false).expect("generated graph is valid")
}

/// A random point: a vertex one time in three, otherwise an interior edge
/// point at a small-denominator fraction of the length.
pub fn random_point(rng: &mut TestRng, g: &MetricGraph) -> PointRef {
    if rng.gen_range(0..3) == 0 {
        let v = rng.gen_range(0..g.vertex_count());
        return PointRef::Vertex(crate::graph::VertexIx(v));
    }
    let e = crate::graph::EdgeIx(rng.gen_range(0..g.edge_count()));
    let den = rng.gen_range(2..=5i64);
    let num = rng.gen_range(1..den);
    let off = g.edge(e).length.clone() * rat(num, den);
    g.point_on_edge(e, off).expect("fraction is interior")
}

/// `n` distinct random points.
pub fn random_points(rng: &mut TestRng, g: &MetricGraph, n: usize) -> BTreeSet<PointRef> {
    let mut out = BTreeSet::new();
    let mut attempts = 0;
    while out.len() < n {
        out.insert(random_point(rng, g));
        attempts += 1;
        assert!(attempts < 100 * (n + 1), "graph too small for {n} distinct points");
    }
    out
}

/// An effective divisor of the given degree at random points.
pub fn random_effective_divisor(rng: &mut TestRng, g: &MetricGraph, degree: usize) -> Divisor {
    Divisor::from_entries((0..degree).map(|_| (random_point(rng, g), 1)))
}

/// A random connected nonempty vertex set of at most `max_size` vertices,
/// grown by a randomized search from a random seed.
pub fn random_connected_vertex_set(
    rng: &mut TestRng,
    g: &MetricGraph,
    max_size: usize,
) -> BTreeSet<crate::graph::VertexIx> {
    let seed = crate::graph::VertexIx(rng.gen_range(0..g.vertex_count()));
    let target = rng.gen_range(1..=max_size.max(1));
    let mut out: BTreeSet<crate::graph::VertexIx> = [seed].into();
    let mut frontier = vec![seed];
    while out.len() < target && !frontier.is_empty() {
        let v = frontier.remove(rng.gen_range(0..frontier.len()));
        for &e in g.edges_at(v) {
            let u = g.edge(e).other_end(v);
            if out.len() < target && rng.gen_range(0..4) != 0 && out.insert(u) {
                frontier.push(u);
            }
        }
    }
    out
}

/// A divisor with `pos` positive and `neg` negative random chips.
pub fn random_divisor(rng: &mut TestRng, g: &MetricGraph, pos: usize, neg: usize) -> Divisor {
    let mut d = random_effective_divisor(rng, g, pos);
    for _ in 0..neg {
        d.add_to(random_point(rng, g), -1);
    }
    d
}
