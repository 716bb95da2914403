//! The checked-in workspace files under tests/fixtures/ must stay byte
//! identical to the canonical serialization of the graphs they describe.
//! Regenerate them with TDL_WRITE_FIXTURES=1 after an intentional change.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use tdl::divisor::canonical_divisor;
use tdl::graph::PointRef;
use tdl::testgen::{cycle2, fig2, k4, pt};
use tdl::Divisor;
use tdl_cli::workspace::{from_parts, parse_workspace, serialize_workspace, Workspace};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.json"))
}

fn check(name: &str, ws: &Workspace) {
    let text = serialize_workspace(ws);
    let path = fixture_path(name);
    if std::env::var("TDL_WRITE_FIXTURES").is_ok() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(on_disk, text, "{name}.json drifted from its canonical form");

    let reparsed = parse_workspace(&on_disk, false).unwrap();
    assert_eq!(
        serialize_workspace(&reparsed),
        on_disk,
        "{name}.json does not round-trip"
    );
}

fn fig2_workspace() -> Workspace {
    let f = fig2();
    let points: BTreeMap<String, PointRef> = [
        ("v0", f.v0.clone()),
        ("v1", f.v1.clone()),
        ("v2", f.v2.clone()),
        ("v3", f.v3.clone()),
        ("v4", f.v4.clone()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let divisors: BTreeMap<String, Divisor> = [
        ("D1".to_string(), f.d1.clone()),
        ("D2".to_string(), f.d2.clone()),
    ]
    .into_iter()
    .collect();
    let midpoints: BTreeSet<PointRef> =
        [&f.v0, &f.v1, &f.v2, &f.v3, &f.v4].into_iter().cloned().collect();
    let model_vertices: BTreeSet<PointRef> = ["w1", "w2", "w3", "w4"]
        .into_iter()
        .map(|id| pt(&f.graph, id))
        .collect();
    let sets: BTreeMap<String, BTreeSet<PointRef>> = [
        ("A".to_string(), midpoints),
        ("W".to_string(), model_vertices),
    ]
    .into_iter()
    .collect();
    from_parts(f.graph, points, divisors, sets).unwrap()
}

fn k4_workspace() -> Workspace {
    let g = k4();
    let divisors: BTreeMap<String, Divisor> =
        [("K".to_string(), canonical_divisor(&g))].into_iter().collect();
    let a: BTreeSet<PointRef> =
        ["w1", "w2", "w4"].into_iter().map(|id| pt(&g, id)).collect();
    let omega: BTreeSet<PointRef> = ["w1", "w2", "w3", "w4"]
        .into_iter()
        .map(|id| pt(&g, id))
        .collect();
    let sets: BTreeMap<String, BTreeSet<PointRef>> =
        [("A".to_string(), a), ("OMEGA".to_string(), omega)].into_iter().collect();
    from_parts(g, BTreeMap::new(), divisors, sets).unwrap()
}

fn cycle2_workspace() -> Workspace {
    let g = cycle2();
    let divisors: BTreeMap<String, Divisor> =
        [("D".to_string(), Divisor::from_entries([(pt(&g, "w1"), 1)]))]
            .into_iter()
            .collect();
    let pair: BTreeSet<PointRef> = [pt(&g, "w1"), pt(&g, "w2")].into_iter().collect();
    let single: BTreeSet<PointRef> = [pt(&g, "w1")].into_iter().collect();
    let sets: BTreeMap<String, BTreeSet<PointRef>> =
        [("P".to_string(), pair), ("S1".to_string(), single)].into_iter().collect();
    from_parts(g, BTreeMap::new(), divisors, sets).unwrap()
}

#[test]
fn fig2_fixture_is_canonical() {
    check("fig2", &fig2_workspace());
}

#[test]
fn k4_fixture_is_canonical() {
    check("k4", &k4_workspace());
}

#[test]
fn cycle2_fixture_is_canonical() {
    check("cycle2", &cycle2_workspace());
}
