//! Error type shared by every operation in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: String, vertex: String },
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {edge} has nonpositive length")]
    NonpositiveLength { edge: String },
    #[error("duplicate id {id}")]
    DuplicateId { id: String },
    #[error("graph has no edges")]
    NoEdges,
    #[error("unknown vertex {id}")]
    UnknownVertex { id: String },
    #[error("unknown edge {id}")]
    UnknownEdge { id: String },
    #[error("offset {offset} is outside edge {edge}")]
    OffsetOutOfRange { edge: String, offset: String },
    #[error("rescale factor for edge {edge} is nonpositive")]
    NonpositiveFactor { edge: String },

    #[error("vertex {vertex} is not on the boundary of the region")]
    NotBoundary { vertex: String },
    #[error("divisor is negative at {point}")]
    NotEffective { point: String },
    #[error("boundary point {point} is not saturated")]
    NotSaturated { point: String },
    #[error("locus is empty or not connected")]
    NotConnected,
    #[error("region has no interior")]
    EmptyRegion,
    #[error("epsilon {epsilon} exceeds the safe collar radius {limit}")]
    UnsafeEpsilon { epsilon: String, limit: String },

    #[error("iteration cap {cap} exceeded")]
    IterationCapExceeded { cap: usize },
    #[error("search cap {cap} exceeded")]
    SearchCapExceeded { cap: usize },

    #[error("test set is missing graph vertex {missing}")]
    InvalidVertexSet { missing: String },
    #[error("point set must be nonempty")]
    EmptySet,
    #[error("linear system is empty")]
    EmptySystem,
    #[error("edge {edge} does not have unit length")]
    NotUnitGraph { edge: String },
    #[error("divisor has a chip at non-vertex point {point}")]
    NotVertexSupported { point: String },
    #[error("set is not rank-determining")]
    NotRds,
    #[error("not a spanning tree: {detail}")]
    NotSpanningTree { detail: String },
    #[error("witness divisor failed validation: {detail}")]
    InvalidWitness { detail: String },

    #[error("invalid parameter: {detail}")]
    InvalidParameter { detail: String },
    #[error("internal geometry violation: {detail}")]
    InternalGeometry { detail: String },
    #[error("internal consistency check failed: {detail}")]
    InternalCheck { detail: String },
}

impl Error {
    /// True for conditions that signal a resource cap or an internal defect
    /// rather than bad input.
    pub fn is_defect(&self) -> bool {
        matches!(
            self,
            Error::IterationCapExceeded { .. }
                | Error::SearchCapExceeded { .. }
                | Error::InternalGeometry { .. }
                | Error::InternalCheck { .. }
                | Error::InvalidWitness { .. }
        )
    }
}
