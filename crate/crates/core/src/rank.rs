//! Rank of a divisor: emptiness of the linear system, the general and the
//! set-restricted rank via depth-first search over failing effective
//! divisors, the Riemann-Roch identity, and an independent integer-graph
//! rank for unit graphs with vertex-supported divisors.

use std::collections::BTreeSet;

use crate::divisor::{canonical_divisor, Divisor};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, PointRef};
use crate::rat::rint;
use crate::reduce::{reduce_effective, reduce_or_empty, Caps, ReduceOutcome};

/// Result of a rank computation. `failing_witness` is an effective divisor
/// `E` of degree `rank + 1` with `|D - E|` empty (the zero divisor when the
/// system itself is empty); it is absent when the degree shortcut applied.
/// `levels_checked` counts the tested degrees, zero under the shortcut.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rank: i64,
    pub failing_witness: Option<Divisor>,
    pub levels_checked: usize,
}

/// The reduced representative of `|d|` when the system is nonempty.
pub fn linear_system_nonempty(
    g: &MetricGraph,
    d: &Divisor,
    caps: &Caps,
) -> Result<Option<Divisor>> {
    let base = PointRef::Vertex(g.vertex_indices().next().expect("graph has vertices"));
    Ok(match reduce_or_empty(g, d, &base, caps)? {
        ReduceOutcome::Reduced(r) => Some(r),
        ReduceOutcome::CertifiedEmpty(_) => None,
    })
}

/// Searches for an effective divisor `E` of degree `chips` supported on
/// `points[floor..]` with `|rep - E|` empty, where `rep` is effective.
/// Chips are placed in nondecreasing point order; each placement reduces at
/// the new point so the remaining divisor stays effective and reduced.
fn failing_divisor(
    g: &MetricGraph,
    points: &[PointRef],
    rep: &Divisor,
    chips: i64,
    floor: usize,
    caps: &Caps,
    nodes: &mut usize,
) -> Result<Option<Divisor>> {
    if chips == 0 {
        return Ok(None);
    }
    for j in floor..points.len() {
        *nodes += 1;
        if *nodes > caps.subsets {
            return Err(Error::SearchCapExceeded { cap: caps.subsets });
        }
        let p = &points[j];
        let (rp, _) = reduce_effective(g, rep, p, caps)?;
        if rp.coeff(p) == 0 {
            // any completion on p keeps the system empty
            return Ok(Some(Divisor::from_entries([(p.clone(), chips)])));
        }
        let next = rp.sub(&Divisor::from_entries([(p.clone(), 1)]));
        if let Some(mut e) = failing_divisor(g, points, &next, chips - 1, j, caps, nodes)? {
            e.add_to(p.clone(), 1);
            return Ok(Some(e));
        }
    }
    Ok(None)
}

fn rank_over_points(
    g: &MetricGraph,
    d: &Divisor,
    points: &[PointRef],
    caps: &Caps,
) -> Result<RankReport> {
    let Some(rep) = linear_system_nonempty(g, d, caps)? else {
        return Ok(RankReport {
            rank: -1,
            failing_witness: Some(Divisor::zero()),
            levels_checked: 1,
        });
    };
    let mut nodes = 0usize;
    for s in 1.. {
        if let Some(e) = failing_divisor(g, points, &rep, s, 0, caps, &mut nodes)? {
            return Ok(RankReport {
                rank: s - 1,
                failing_witness: Some(e),
                levels_checked: (s + 1) as usize,
            });
        }
    }
    unreachable!("a failing divisor exists at degree deg(d) + 1")
}

/// Rank of `d`, tested against effective divisors supported on `base_set`
/// (all vertices when `None`). A custom set must contain every vertex.
/// With `rr_shortcut`, degrees above `2g - 2` return `deg - g` directly.
pub fn rank(
    g: &MetricGraph,
    d: &Divisor,
    base_set: Option<&BTreeSet<PointRef>>,
    rr_shortcut: bool,
    caps: &Caps,
) -> Result<RankReport> {
    let points: Vec<PointRef> = match base_set {
        None => g.vertex_indices().map(PointRef::Vertex).collect(),
        Some(set) => {
            for v in g.vertex_indices() {
                if !set.contains(&PointRef::Vertex(v)) {
                    return Err(Error::InvalidVertexSet {
                        missing: g.vertex_id(v).to_string(),
                    });
                }
            }
            set.iter().cloned().collect()
        }
    };
    if rr_shortcut && d.degree() > 2 * g.genus() as i64 - 2 {
        return Ok(RankReport {
            rank: d.degree() - g.genus() as i64,
            failing_witness: None,
            levels_checked: 0,
        });
    }
    rank_over_points(g, d, &points, caps)
}

/// Rank of `d` restricted to the nonempty point set `a`: `-1` exactly when
/// `|d|` is empty, and otherwise at least `s` exactly when every effective
/// degree-`s` divisor supported on `a` can be subtracted.
pub fn restricted_rank(
    g: &MetricGraph,
    d: &Divisor,
    a: &BTreeSet<PointRef>,
    caps: &Caps,
) -> Result<RankReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let points: Vec<PointRef> = a.iter().cloned().collect();
    rank_over_points(g, d, &points, caps)
}

#[derive(Clone, Debug)]
pub struct RrReport {
    pub rank_d: i64,
    pub rank_kd: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// Evaluates both sides of `r(D) - r(K - D) = deg(D) + 1 - g`, always by
/// full enumeration.
pub fn rr_verify(g: &MetricGraph, d: &Divisor, caps: &Caps) -> Result<RrReport> {
    let k = canonical_divisor(g);
    let rank_d = rank(g, d, None, false, caps)?.rank;
    let rank_kd = rank(g, &k.sub(d), None, false, caps)?.rank;
    let lhs = rank_d - rank_kd;
    let rhs = d.degree() + 1 - g.genus() as i64;
    Ok(RrReport {
        rank_d,
        rank_kd,
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// Integer chip configuration on the vertices of a unit graph, with its own
/// burning, firing, and reduction. Shares nothing with the metric engine so
/// the two ranks can check each other.
struct FiniteGraph {
    /// adjacency counts, symmetric
    adj: Vec<Vec<usize>>,
}

impl FiniteGraph {
    fn burn(&self, chips: &[i64], q: usize) -> Vec<bool> {
        let n = self.adj.len();
        let mut burnt = vec![false; n];
        burnt[q] = true;
        loop {
            let mut changed = false;
            for v in 0..n {
                if burnt[v] {
                    continue;
                }
                let heat: usize = (0..n).filter(|&u| burnt[u]).map(|u| self.adj[v][u]).sum();
                if (heat as i64) > chips[v] {
                    burnt[v] = true;
                    changed = true;
                }
            }
            if !changed {
                return burnt;
            }
        }
    }

    /// `q`-reduction of a configuration that is effective away from `q`.
    fn reduce(&self, chips: &[i64], q: usize, caps: &Caps) -> Result<Vec<i64>> {
        let n = self.adj.len();
        let mut chips = chips.to_vec();
        for _ in 0..caps.iterations {
            let burnt = self.burn(&chips, q);
            if burnt.iter().all(|&b| b) {
                return Ok(chips);
            }
            for v in 0..n {
                if burnt[v] {
                    continue;
                }
                for u in 0..n {
                    if burnt[u] {
                        chips[v] -= self.adj[v][u] as i64;
                        chips[u] += self.adj[v][u] as i64;
                    }
                }
            }
        }
        Err(Error::IterationCapExceeded { cap: caps.iterations })
    }

    /// Reduced form at `q`, or None when the class has no effective
    /// representative. Negative entries are discharged greedily in vertex
    /// order.
    fn reduce_or_empty(&self, chips: &[i64], q: usize, caps: &Caps) -> Result<Option<Vec<i64>>> {
        let mut pos: Vec<i64> = chips.iter().map(|&c| c.max(0)).collect();
        for v in 0..self.adj.len() {
            let need = -chips[v].min(0);
            if need == 0 {
                continue;
            }
            let r = self.reduce(&pos, v, caps)?;
            if r[v] < need {
                return Ok(None);
            }
            pos = r;
            pos[v] -= need;
        }
        Ok(Some(self.reduce(&pos, q, caps)?))
    }

    fn failing(
        &self,
        rep: &[i64],
        chips: i64,
        floor: usize,
        caps: &Caps,
        nodes: &mut usize,
    ) -> Result<bool> {
        if chips == 0 {
            return Ok(false);
        }
        for v in floor..self.adj.len() {
            *nodes += 1;
            if *nodes > caps.subsets {
                return Err(Error::SearchCapExceeded { cap: caps.subsets });
            }
            let r = self.reduce(rep, v, caps)?;
            if r[v] == 0 {
                return Ok(true);
            }
            let mut next = r;
            next[v] -= 1;
            if self.failing(&next, chips - 1, v, caps, nodes)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Rank of a vertex-supported divisor on a unit graph, computed with
/// integer chip-firing only.
pub fn fg_rank(g: &MetricGraph, d: &Divisor, caps: &Caps) -> Result<i64> {
    for e in g.edge_indices() {
        if g.edge(e).length != rint(1) {
            return Err(Error::NotUnitGraph {
                edge: g.edge(e).id.clone(),
            });
        }
    }
    let n = g.vertex_count();
    let mut chips = vec![0i64; n];
    for (p, c) in d.iter() {
        match p {
            PointRef::Vertex(v) => chips[v.0] += c,
            PointRef::Interior(..) => {
                return Err(Error::NotVertexSupported {
                    point: g.point_name(p),
                })
            }
        }
    }
    let mut adj = vec![vec![0usize; n]; n];
    for e in g.edge_indices() {
        let edge = g.edge(e);
        adj[edge.lo.0][edge.hi.0] += 1;
        adj[edge.hi.0][edge.lo.0] += 1;
    }
    let fg = FiniteGraph { adj };

    let Some(rep) = fg.reduce_or_empty(&chips, 0, caps)? else {
        return Ok(-1);
    };
    let mut nodes = 0usize;
    for s in 1.. {
        if fg.failing(&rep, s, 0, caps, &mut nodes)? {
            return Ok(s - 1);
        }
    }
    unreachable!("a failing divisor exists at degree deg(d) + 1")
}
