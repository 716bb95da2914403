//! Acceptance gate. One test per shipped criterion; each prints a single
//! pass line (visible with --nocapture) and fails loudly otherwise.
//! Criteria marked with runtimes assert them with a wall clock.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::Rng;

use tdl::graph::{EdgeIx, PointRef, Transform, VertexIx};
use tdl::rank::{fg_rank, rank, restricted_rank, rr_verify};
use tdl::rat::{rat, rint, Rat};
use tdl::rds::{
    construct_rds_spanning, is_minimal_rds, is_rank_determining, is_special_region,
    witness_divisor, SpanningOptions,
};
use tdl::reduce::{
    dhar, move_step, reduce_effective, reduce_or_empty, support_locus, Caps, ReduceOutcome,
};
use tdl::refine::{refine, ClosedLocus};
use tdl::testgen::{self, cycle2, fig2, k4, pt, unit_path, GraphCfg, TestRng};
use tdl::divisor::apply_basic_extremal;
use tdl::{Divisor, MetricGraph};

fn caps() -> Caps {
    Caps::default()
}

fn set(points: &[PointRef]) -> BTreeSet<PointRef> {
    points.iter().cloned().collect()
}

/// An effective divisor with chips only on vertices.
fn random_vertex_divisor(rng: &mut TestRng, g: &MetricGraph, degree: usize) -> Divisor {
    Divisor::from_entries((0..degree).map(|_| {
        let v = VertexIx(rng.gen_range(0..g.vertex_count()));
        (PointRef::Vertex(v), 1)
    }))
}

/// Connected model-vertex set together with its induced closed edges.
fn induced_locus(g: &MetricGraph, w: &BTreeSet<VertexIx>) -> ClosedLocus {
    let closed: BTreeSet<EdgeIx> = g
        .edge_indices()
        .filter(|&e| w.contains(&g.edge(e).lo) && w.contains(&g.edge(e).hi))
        .collect();
    ClosedLocus::new(g, w.clone(), closed).unwrap()
}

fn outgoing(g: &MetricGraph, x: &ClosedLocus) -> Vec<(VertexIx, EdgeIx)> {
    let mut out = Vec::new();
    for &v in &x.vertices {
        for &e in g.edges_at(v) {
            if !x.closed_edges.contains(&e) {
                out.push((v, e));
            }
        }
    }
    out
}

/// Rescales every edge by its own random factor (denominators stay small).
fn random_rescale(rng: &mut TestRng, g: &MetricGraph) -> Transform {
    let factors: BTreeMap<String, Rat> = g
        .edge_indices()
        .map(|e| (g.edge(e).id.clone(), rat(rng.gen_range(1..=5), rng.gen_range(1..=3))))
        .collect();
    Transform::Rescale(factors)
}

fn all_midpoints(g: &MetricGraph) -> BTreeSet<PointRef> {
    g.edge_indices()
        .map(|e| {
            let half = g.edge(e).length.clone() / rint(2);
            g.point_on_edge(e, half).unwrap()
        })
        .collect()
}

#[test]
fn c01_burning_fixtures() {
    let start = Instant::now();
    let f = fig2();
    let w3 = pt(&f.graph, "w3");
    let w4 = pt(&f.graph, "w4");

    let out1 = dhar(&f.graph, &f.d1, &f.v0).unwrap();
    assert!(out1.s.is_empty(), "D1 must be reduced at v0");
    assert_eq!(
        out1.burn_layers,
        vec![set(&[f.v1.clone(), w3.clone()]), set(&[w4.clone()])]
    );

    let out2 = dhar(&f.graph, &f.d2, &f.v0).unwrap();
    assert_eq!(out2.s, set(&[f.v1.clone(), f.v2.clone(), w4.clone()]));

    let elapsed = start.elapsed();
    assert!(elapsed.as_millis() < 100, "took {elapsed:?}");
    println!("acceptance c01 burning-fixtures: pass");
}

#[test]
fn c02_move_fixture() {
    let f = fig2();
    let w4 = pt(&f.graph, "w4");
    let s = set(&[f.v1.clone(), f.v2.clone(), w4.clone()]);

    let out = move_step(&f.graph, &f.d2, &s, &f.v0, None).unwrap();
    let expected = Divisor::from_entries([
        (f.v3.clone(), 1),
        (f.v4.clone(), 1),
        (pt(&f.graph, "w1"), 1),
        (pt(&f.graph, "w2"), 1),
        (pt(&f.graph, "w3"), 2),
    ]);
    assert_eq!(out.result, expected);

    assert_eq!(out.components.len(), 2);
    let mut seen: Vec<(Divisor, BTreeSet<PointRef>)> = Vec::new();
    for c in &out.components {
        assert_eq!(c.d, rat(1, 2));
        let debits = Divisor::from_entries(c.debits.iter().cloned());
        let landing_support: BTreeSet<PointRef> =
            c.landings.iter().map(|(p, _)| p.clone()).collect();
        seen.push((debits, landing_support));
    }
    seen.sort();
    let expected_parts = {
        let mut parts = vec![
            (
                Divisor::from_entries([(f.v1.clone(), 2)]),
                set(&[pt(&f.graph, "w1"), pt(&f.graph, "w2")]),
            ),
            (
                Divisor::from_entries([(f.v2.clone(), 1), (w4.clone(), 2)]),
                set(&[f.v3.clone(), f.v4.clone(), pt(&f.graph, "w3")]),
            ),
        ];
        parts.sort();
        parts
    };
    assert_eq!(seen, expected_parts);
    println!("acceptance c02 move-fixture: pass");
}

#[test]
fn c03_reduction_termination_and_uniqueness() {
    let start = Instant::now();
    for seed in 0..200u64 {
        let mut rng = testgen::rng(0xC03 ^ (seed << 8));
        let base = testgen::random_graph(&mut rng, &GraphCfg::default());
        // stretch lengths so denominators range up to 12
        let g = base.transform(&random_rescale(&mut rng, &base)).unwrap().graph;
        let deg = rng.gen_range(0..=8);
        let d = testgen::random_effective_divisor(&mut rng, &g, deg);
        let v0 = testgen::random_point(&mut rng, &g);

        let (reduced, _) = reduce_effective(&g, &d, &v0, &caps())
            .unwrap_or_else(|e| panic!("seed {seed}: reduction failed: {e}"));

        let marks: BTreeSet<PointRef> = d.support().cloned().collect();
        let model = refine(&g, &marks);
        let mut done = 0;
        let mut attempts = 0;
        while done < 3 && attempts < 20 {
            attempts += 1;
            let w = testgen::random_connected_vertex_set(&mut rng, model.model(), 3);
            let x = induced_locus(model.model(), &w);
            let dirs = outgoing(model.model(), &x);
            if dirs.is_empty() {
                continue;
            }
            let eps = dirs
                .iter()
                .map(|&(_, e)| model.model().edge(e).length.clone())
                .min()
                .unwrap()
                / rint(2);
            let perturbed = apply_basic_extremal(&model, &d, &x, &eps, false).unwrap();
            match reduce_or_empty(&g, &perturbed, &v0, &caps()).unwrap() {
                ReduceOutcome::Reduced(r) => assert_eq!(r, reduced, "seed {seed}"),
                ReduceOutcome::CertifiedEmpty(_) => {
                    panic!("seed {seed}: effective class declared empty")
                }
            }
            done += 1;
        }
        assert!(done == 3 || g.vertex_count() == 1, "seed {seed}: too few perturbations");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("acceptance c03 reduction-uniqueness: pass ({elapsed:?})");
}

#[test]
fn c04_rank_identity() {
    let start = Instant::now();
    for seed in 0..200u64 {
        let mut rng = testgen::rng(0xC04 ^ (seed << 8));
        let g = testgen::random_graph(&mut rng, &GraphCfg::default());
        let genus = g.genus() as i64;
        assert!(genus <= 4);

        let target = rng.gen_range(-2..=2 * genus + 2);
        let neg = rng.gen_range(0..=2) + if target < 0 { (-target) as usize } else { 0 };
        let pos = (target + neg as i64) as usize;
        let d = testgen::random_divisor(&mut rng, &g, pos, neg);

        let rep = rr_verify(&g, &d, &caps()).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(rep.equal, "seed {seed}: lhs {} rhs {}", rep.lhs, rep.rhs);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!("acceptance c04 rank-identity: pass ({elapsed:?})");
}

#[test]
fn c05_finite_graph_consistency() {
    for seed in 0..100u64 {
        let mut rng = testgen::rng(0xC05 ^ (seed << 8));
        let cfg = GraphCfg { unit_lengths: true, ..GraphCfg::default() };
        let g = testgen::random_graph(&mut rng, &cfg);
        let deg = rng.gen_range(0..=6);
        let mut d = random_vertex_divisor(&mut rng, &g, deg);
        if rng.gen_range(0..3) == 0 {
            let v = VertexIx(rng.gen_range(0..g.vertex_count()));
            d = d.sub(&Divisor::from_entries([(PointRef::Vertex(v), 1)]));
        }

        let r = rank(&g, &d, None, false, &caps()).unwrap();
        let rf = fg_rank(&g, &d, &caps()).unwrap();
        assert_eq!(r.rank, rf, "seed {seed}");
    }
    println!("acceptance c05 finite-graph-consistency: pass");
}

#[test]
fn c06_rank_determining_fixtures() {
    // the full model-vertex set is rank-determining on every test graph
    let mut graphs: Vec<MetricGraph> =
        vec![fig2().graph, k4(), cycle2(), unit_path()];
    for seed in 0..10u64 {
        let mut rng = testgen::rng(0xC06 ^ (seed << 8));
        graphs.push(testgen::random_graph(&mut rng, &GraphCfg::default()));
    }
    for g in &graphs {
        let omega: BTreeSet<PointRef> = g.vertex_indices().map(PointRef::Vertex).collect();
        assert!(is_rank_determining(g, &omega, &caps()).unwrap().is_rds);
    }

    // on unit K4 the three-vertex set is rank-determining and minimal
    let g = k4();
    let a = set(&[pt(&g, "w1"), pt(&g, "w2"), pt(&g, "w4")]);
    assert!(is_rank_determining(&g, &a, &caps()).unwrap().is_rds);
    assert!(is_minimal_rds(&g, &a, &caps()).unwrap().minimal);

    // on the doubled edge every pair of distinct points is a minimal RDS
    let g = cycle2();
    let points = [
        pt(&g, "w1"),
        pt(&g, "w2"),
        pt(&g, "e1@1/4"),
        pt(&g, "e1@1/2"),
        pt(&g, "e1@3/4"),
        pt(&g, "e2@1/3"),
        pt(&g, "e2@1/2"),
    ];
    for (i, p) in points.iter().enumerate() {
        for q in points.iter().skip(i + 1) {
            let pair = set(&[p.clone(), q.clone()]);
            assert!(is_rank_determining(&g, &pair, &caps()).unwrap().is_rds, "{pair:?}");
            assert!(is_minimal_rds(&g, &pair, &caps()).unwrap().minimal, "{pair:?}");
        }
    }

    // on trees every single point is rank-determining
    let mut trees = vec![unit_path()];
    for seed in 0..10u64 {
        let mut rng = testgen::rng(0x7EE ^ (seed << 8));
        let cfg = GraphCfg { max_extra_edges: 0, ..GraphCfg::default() };
        trees.push(testgen::random_graph(&mut rng, &cfg));
    }
    for t in &trees {
        assert_eq!(t.genus(), 0);
        let mut singles: Vec<PointRef> = t.vertex_indices().map(PointRef::Vertex).collect();
        for e in t.edge_indices() {
            let half = t.edge(e).length.clone() / rint(2);
            singles.push(t.point_on_edge(e, half).unwrap());
        }
        for p in singles {
            let a = set(&[p.clone()]);
            assert!(is_rank_determining(t, &a, &caps()).unwrap().is_rds, "{p:?}");
            assert!(is_minimal_rds(t, &a, &caps()).unwrap().minimal, "{p:?}");
        }
    }
    println!("acceptance c06 rank-determining-fixtures: pass");
}

#[test]
fn c07_spanning_construction() {
    for seed in 0..50u64 {
        let mut rng = testgen::rng(0xC07 ^ (seed << 8));
        let cfg = GraphCfg { max_extra_edges: 5, ..GraphCfg::default() };
        let g = testgen::random_graph(&mut rng, &cfg);
        assert!(g.genus() <= 5);

        let a = construct_rds_spanning(&g, &SpanningOptions::default()).unwrap();
        assert_eq!(a.len(), g.genus() + 1, "seed {seed}");
        assert!(is_rank_determining(&g, &a, &caps()).unwrap().is_rds, "seed {seed}");
        assert!(is_minimal_rds(&g, &a, &caps()).unwrap().minimal, "seed {seed}");
    }
    println!("acceptance c07 spanning-construction: pass");
}

#[test]
fn c08_witness_cross_validation() {
    let mut saw_rds = 0usize;
    let mut saw_not_rds = 0usize;
    for seed in 0..25u64 {
        let mut rng = testgen::rng(0xC08 ^ (seed << 8));
        let g = testgen::random_graph(&mut rng, &GraphCfg::default());
        let n = rng.gen_range(1..=4);
        let a = testgen::random_points(&mut rng, &g, n);

        let verdict = is_rank_determining(&g, &a, &caps()).unwrap();
        if let Some(dw) = &verdict.witness_divisor {
            assert!(!verdict.is_rds);
            saw_not_rds += 1;
            let restricted = restricted_rank(&g, dw, &a, &caps()).unwrap().rank;
            let full = rank(&g, dw, None, false, &caps()).unwrap().rank;
            assert!(restricted >= 1, "seed {seed}: restricted {restricted}");
            assert_eq!(full, 0, "seed {seed}");
        } else {
            assert!(verdict.is_rds);
            saw_rds += 1;
            for k in 0..20 {
                let deg = rng.gen_range(0..=g.genus() + 2);
                let d = testgen::random_effective_divisor(&mut rng, &g, deg);
                let restricted = restricted_rank(&g, &d, &a, &caps()).unwrap().rank;
                let full = rank(&g, &d, None, false, &caps()).unwrap().rank;
                assert_eq!(restricted, full, "seed {seed} sample {k}");
            }
            // minimality analysis produces further not-RDS witnesses for the
            // pruned subsets; they must certify themselves the same way
            if a.len() >= 2 {
                let verdict = is_minimal_rds(&g, &a, &caps()).unwrap();
                for (removed, w) in &verdict.isolating {
                    let dw = witness_divisor(w).unwrap();
                    let mut rest: BTreeSet<PointRef> = a.clone();
                    rest.remove(removed);
                    let restricted = restricted_rank(&g, &dw, &rest, &caps()).unwrap().rank;
                    let full = rank(&g, &dw, None, false, &caps()).unwrap().rank;
                    assert!(restricted >= 1, "seed {seed}: isolating {removed:?}");
                    assert_eq!(full, 0, "seed {seed}: isolating {removed:?}");
                }
            }
        }
    }
    assert!(saw_rds > 0 && saw_not_rds > 0, "suite must exercise both verdicts");
    println!("acceptance c08 witness-cross-validation: pass ({saw_rds} rds / {saw_not_rds} not)");
}

#[test]
fn c09_support_locus() {
    for seed in 0..50u64 {
        let mut rng = testgen::rng(0xC09 ^ (seed << 8));
        let g = testgen::random_graph(&mut rng, &GraphCfg::default());
        // The locus needs a nonempty system with nonempty support: effective
        // divisors on even seeds; mixed-sign divisors on odd seeds, with
        // degree >= max(1, genus) so the class stays nonempty.
        let d = if seed % 2 == 0 {
            let deg = rng.gen_range(1..=5);
            testgen::random_effective_divisor(&mut rng, &g, deg)
        } else {
            let neg = rng.gen_range(1..=2);
            let pos = neg + g.genus().max(1) + rng.gen_range(0..=3);
            testgen::random_divisor(&mut rng, &g, pos, neg)
        };

        let out = support_locus(&g, &d, &caps()).unwrap();
        let mg = out.model.model();

        let member_by_reduction = |p: &PointRef| -> bool {
            match reduce_or_empty(&g, &d, p, &caps()).unwrap() {
                ReduceOutcome::Reduced(r) => r.coeff(p) > 0,
                ReduceOutcome::CertifiedEmpty(_) => false,
            }
        };
        for v in mg.vertex_indices() {
            let p = out.model.to_base_point(&PointRef::Vertex(v));
            assert_eq!(
                out.locus.contains_point(&PointRef::Vertex(v)),
                member_by_reduction(&p),
                "seed {seed}: vertex {p:?}"
            );
        }
        for e in g.edge_indices() {
            let half = g.edge(e).length.clone() / rint(2);
            let p = g.point_on_edge(e, half).unwrap();
            let q = out.model.to_model_point(&p);
            assert_eq!(
                out.locus.contains_point(&q),
                member_by_reduction(&p),
                "seed {seed}: midpoint {p:?}"
            );
        }

        for r in &out.regions {
            assert!(is_special_region(&out.model, r).unwrap(), "seed {seed}");
        }
        for (i, a) in out.regions.iter().enumerate() {
            for b in out.regions.iter().skip(i + 1) {
                assert!(a.interior_vertices.is_disjoint(&b.interior_vertices));
                let ea: BTreeSet<EdgeIx> = a
                    .full_edges
                    .iter()
                    .copied()
                    .chain(a.stubs.iter().map(|&(e, _)| e))
                    .collect();
                let eb: BTreeSet<EdgeIx> = b
                    .full_edges
                    .iter()
                    .copied()
                    .chain(b.stubs.iter().map(|&(e, _)| e))
                    .collect();
                assert!(ea.is_disjoint(&eb), "seed {seed}");
            }
        }
        assert!(out.regions.len() <= g.genus(), "seed {seed}");
    }
    println!("acceptance c09 support-locus: pass");
}

#[test]
fn c10_topological_invariance() {
    for seed in 0..50u64 {
        let mut rng = testgen::rng(0xC10 ^ (seed << 8));
        let g = testgen::random_graph(&mut rng, &GraphCfg::default());
        let n = rng.gen_range(1..=4);
        let a = testgen::random_points(&mut rng, &g, n);

        let verdict = |g: &MetricGraph, a: &BTreeSet<PointRef>| -> (bool, Option<bool>) {
            let rds = is_rank_determining(g, a, &caps()).unwrap().is_rds;
            let minimal = rds.then(|| is_minimal_rds(g, a, &caps()).unwrap().minimal);
            (rds, minimal)
        };
        let expected = verdict(&g, &a);

        let rescaled = g.transform(&random_rescale(&mut rng, &g)).unwrap();
        let a2: BTreeSet<PointRef> = a.iter().map(|p| rescaled.map_point(p)).collect();
        assert_eq!(verdict(&rescaled.graph, &a2), expected, "seed {seed}: rescale");

        let subdivided = g.transform(&Transform::Subdivide(all_midpoints(&g))).unwrap();
        let a3: BTreeSet<PointRef> = a.iter().map(|p| subdivided.map_point(p)).collect();
        assert_eq!(verdict(&subdivided.graph, &a3), expected, "seed {seed}: subdivide");
    }
    println!("acceptance c10 topological-invariance: pass");
}
