//! Divisors: finite integer chip configurations on the points of a metric
//! graph, plus the basic extremal perturbation that slides chips off a
//! closed connected region along its outgoing directions.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, PointRef, VertexIx};
use crate::rat::{fmt_rat, Rat};
use crate::refine::{ClosedLocus, RefinedModel};

/// An integer divisor with finite support. Zero coefficients are never
/// stored, so equality of maps is equality of divisors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Divisor(BTreeMap<PointRef, i64>);

impl Divisor {
    pub fn zero() -> Self {
        Divisor(BTreeMap::new())
    }

    /// Sums coefficients over repeated points and drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (PointRef, i64)>) -> Self {
        let mut d = Divisor::zero();
        for (p, c) in entries {
            d.add_to(p, c);
        }
        d
    }

    pub fn coeff(&self, p: &PointRef) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn add_to(&mut self, p: PointRef, c: i64) {
        use std::collections::btree_map::Entry;
        match self.0.entry(p) {
            Entry::Vacant(slot) => {
                if c != 0 {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|&c| c > 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Support points in canonical order.
    pub fn support(&self) -> impl Iterator<Item = &PointRef> {
        self.0.keys()
    }

    /// (point, coefficient) pairs in canonical point order.
    pub fn iter(&self) -> impl Iterator<Item = (&PointRef, i64)> {
        self.0.iter().map(|(p, &c)| (p, c))
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add_to(p.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add_to(p.clone(), -c);
        }
        out
    }

    pub fn negate(&self) -> Divisor {
        Divisor(self.0.iter().map(|(p, &c)| (p.clone(), -c)).collect())
    }

    /// The effective divisor of positive coefficients.
    pub fn positive_part(&self) -> Divisor {
        Divisor(
            self.0
                .iter()
                .filter(|(_, &c)| c > 0)
                .map(|(p, &c)| (p.clone(), c))
                .collect(),
        )
    }

    /// The effective divisor `max(-D, 0)`, so `D = D⁺ − D⁻`.
    pub fn negative_part(&self) -> Divisor {
        Divisor(
            self.0
                .iter()
                .filter(|(_, &c)| c < 0)
                .map(|(p, &c)| (p.clone(), -c))
                .collect(),
        )
    }
}

/// The canonical divisor `Σ (deg(v) − 2)(v)`.
pub fn canonical_divisor(g: &MetricGraph) -> Divisor {
    Divisor::from_entries(
        g.vertex_indices()
            .map(|v| (PointRef::Vertex(v), g.degree(v) as i64 - 2)),
    )
}

/// Slides chips off the closed connected region `x` of the model: every
/// boundary vertex is debited its out-degree and one chip lands at distance
/// `eps` along each outgoing direction. Chips meeting at the same point sum.
///
/// `d` lives on the base graph and so does the result. `eps` must be
/// positive and no larger than the safe collar radius: the shortest outgoing
/// direction, shortened further past neither an interior support chip nor
/// the midpoint of an edge swept from both ends. With `strict`, every
/// boundary vertex must carry at least its out-degree in chips, so the
/// result stays effective when `d` is.
pub fn apply_basic_extremal(
    model: &RefinedModel,
    d: &Divisor,
    x: &ClosedLocus,
    eps: &Rat,
    strict: bool,
) -> Result<Divisor> {
    let g = model.model();
    if !x.is_connected(g) {
        return Err(Error::NotConnected);
    }

    // chips located on the model
    let mut on_model: BTreeMap<PointRef, i64> = BTreeMap::new();
    for (p, c) in d.iter() {
        *on_model.entry(model.to_model_point(p)).or_insert(0) += c;
    }

    // outgoing directions with their safe lengths
    let mut directions: Vec<(VertexIx, crate::graph::EdgeIx)> = Vec::new();
    for &v in &x.vertices {
        for &e in g.edges_at(v) {
            if !x.closed_edges.contains(&e) {
                directions.push((v, e));
            }
        }
    }

    if *eps <= Rat::zero() {
        let limit = safe_radius(g, x, &on_model, &directions)
            .map_or_else(|| "unbounded".to_string(), |r| fmt_rat(&r));
        return Err(Error::UnsafeEpsilon {
            epsilon: fmt_rat(eps),
            limit,
        });
    }
    if let Some(safe) = safe_radius(g, x, &on_model, &directions) {
        if *eps > safe {
            return Err(Error::UnsafeEpsilon {
                epsilon: fmt_rat(eps),
                limit: fmt_rat(&safe),
            });
        }
    }

    if strict {
        let mut outdeg: BTreeMap<VertexIx, i64> = BTreeMap::new();
        for &(v, _) in &directions {
            *outdeg.entry(v).or_insert(0) += 1;
        }
        for (&v, &n) in &outdeg {
            let have = on_model
                .get(&PointRef::Vertex(v))
                .copied()
                .unwrap_or(0);
            if have < n {
                return Err(Error::NotSaturated {
                    point: g.vertex_id(v).to_string(),
                });
            }
        }
    }

    for &(v, e) in &directions {
        *on_model.entry(PointRef::Vertex(v)).or_insert(0) -= 1;
        let edge = g.edge(e);
        let from_lo = if v == edge.lo {
            eps.clone()
        } else {
            edge.length.clone() - eps.clone()
        };
        let landing = g
            .point_on_edge(e, from_lo)
            .expect("safe radius keeps the landing on the edge");
        *on_model.entry(landing).or_insert(0) += 1;
    }

    Ok(Divisor::from_entries(
        on_model
            .into_iter()
            .map(|(p, c)| (model.to_base_point(&p), c)),
    ))
}

/// Largest admissible collar radius, or None when there are no outgoing
/// directions.
fn safe_radius(
    g: &MetricGraph,
    x: &ClosedLocus,
    on_model: &BTreeMap<PointRef, i64>,
    directions: &[(VertexIx, crate::graph::EdgeIx)],
) -> Option<Rat> {
    let doubly: BTreeSet<crate::graph::EdgeIx> = directions
        .iter()
        .filter(|(v, e)| x.vertices.contains(&g.edge(*e).other_end(*v)))
        .map(|&(_, e)| e)
        .collect();
    let mut safe: Option<Rat> = None;
    let mut shrink = |r: Rat| {
        if safe.as_ref().map_or(true, |s| r < *s) {
            safe = Some(r);
        }
    };
    for &(v, e) in directions {
        let edge = g.edge(e);
        shrink(edge.length.clone());
        if doubly.contains(&e) {
            shrink(edge.length.clone() / crate::rat::rint(2));
        }
        for (p, _) in on_model {
            if let PointRef::Interior(pe, off) = p {
                if *pe == e {
                    let dist = if v == edge.lo {
                        off.clone()
                    } else {
                        edge.length.clone() - off.clone()
                    };
                    shrink(dist);
                }
            }
        }
    }
    safe
}
