//! Divisor theory on metric graphs.
//!
//! A metric graph is a finite connected multigraph whose edges carry
//! positive rational lengths, regarded as a compact metric space. This
//! crate works with divisors on such graphs: finite integer combinations
//! of points. It provides
//!
//! - graph construction and validation, refinement of the model along
//!   marked points, and exact rational geometry ([`graph`], [`refine`]);
//! - divisor arithmetic, the canonical divisor, and basic extremal moves
//!   of chips along outgoing edges ([`divisor`]);
//! - reduced-divisor computation via the burning algorithm, with full
//!   step-by-step traces, emptiness certificates for complete linear
//!   systems, and support loci ([`reduce`]);
//! - rank computation, restricted rank over a point set, the
//!   Riemann-Roch identity check, and the discrete rank on unit graphs
//!   ([`rank`]);
//! - rank-determining sets: verification, minimality, closure, witness
//!   construction, and spanning-tree based constructions ([`rds`]).
//!
//! All arithmetic is exact over the rationals; no floating point is used
//! anywhere. Every search is capped by [`reduce::Caps`] so that malformed
//! inputs fail with an error instead of running away.

#![forbid(unsafe_code)]

pub mod divisor;
pub mod error;
pub mod graph;
pub mod rank;
pub mod rat;
pub mod rds;
pub mod reduce;
pub mod refine;

#[cfg(feature = "testgen")]
pub mod testgen;

pub use divisor::Divisor;
pub use error::{Error, Result};
pub use graph::MetricGraph;
pub use rat::Rat;
