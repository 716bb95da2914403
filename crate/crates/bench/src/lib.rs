//! Shared helpers for the criterion benchmarks.

use tdl::divisor::Divisor;
use tdl::testgen::{self, GraphCfg, TestRng};
use tdl::MetricGraph;

/// A reproducible batch of (graph, effective divisor) cases.
pub fn cases(rng: &mut TestRng, count: usize, degree: usize) -> Vec<(MetricGraph, Divisor)> {
    let cfg = GraphCfg::default();
    (0..count)
        .map(|_| {
            let g = testgen::random_graph(rng, &cfg);
            let d = testgen::random_effective_divisor(rng, &g, degree);
            (g, d)
        })
        .collect()
}
