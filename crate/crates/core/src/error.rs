use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::PlanViolation;
use crate::graph::EdgeId;
use crate::properties::PropertyViolation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("edge {edge}: vertex {vertex} out of range (graph has {vertices} vertices)")]
    VertexOutOfRange { edge: EdgeId, vertex: usize, vertices: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("expected {expected} signs, got {got}")]
    SignCount { expected: usize, got: usize },
    #[error("invalid path element: {0}")]
    InvalidPath(String),
    #[error("more than {cap} circles; use a smaller instance for oracle work")]
    CircleCapExceeded { cap: usize },
    #[error("graph is not simple (it has a loop or parallel edges)")]
    NotSimple,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid plan ({} violations)", .0.len())]
    InvalidPlan(Vec<PlanViolation>),
    #[error("block {block}: vertex subset does not define a cut")]
    InvalidCut { block: usize },
    #[error("graph violates the local degree conditions ({} violations)", .0.len())]
    PropertyViolated(Vec<PropertyViolation>),
    #[error("sampler gave up after {0} attempts")]
    RetryBudgetExhausted(usize),
}
