use thiserror::Error;

use crate::ids::{EdgeId, FaceId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(EdgeId),
    #[error("face {0} is not a face of size two on two distinct edges")]
    NotBigon(FaceId),
    #[error("link at {0} is connected; nothing to split")]
    LinkConnected(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("link graph is not 2-connected")]
    Not2Connected,
    #[error("node {0} is not a cut-vertex of the link graph")]
    NotCutVertex(usize),
    #[error("link at {0} is disconnected")]
    DisconnectedLink(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PlanarityError {
    #[error("graph is not a subdivision of a 3-connected graph")]
    NotApplicable,
    #[error("graph is not planar")]
    NonPlanar,
    #[error("node for edge {0} missing from link")]
    MissingNode(EdgeId),
    #[error("loop-planarity instance outside the implemented range")]
    OutOfImplementedRange,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StretchError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("not a branch of the link at {0}")]
    NotABranch(VertexId),
    #[error("not a 2-separator of the link at {0}")]
    NotTwoSeparator(VertexId),
    #[error("link at {0} is not 2-connected")]
    LinkNot2Connected(VertexId),
    #[error("faces are not adjacent in every planar rotator at edge {0}")]
    AdjacencyNotForced(EdgeId),
    #[error("edge {0} has face-degree below three")]
    DegreeTooLow(EdgeId),
    #[error("edge {0} is not reversible by the para-star criterion")]
    NotReversible(EdgeId),
    #[error("edge {0} is not the new edge of a branch stretch")]
    NotUnstretchable(EdgeId),
    #[error("input complex is not simplicial")]
    NotSimplicial,
    #[error("vertex {0} carries a loop")]
    LoopAt(VertexId),
    #[error("face {0} does not run once along the stretched edge")]
    FaceNotOnEdge(FaceId),
    #[error("rotation pull-back failed verification")]
    VerificationFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("not a para-cycle")]
    NotParaCycle,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("certificate rejected: {0}")]
    CertificateRejected(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Stretch(#[from] StretchError),
    #[error("normal form not reached: {0}")]
    Stuck(&'static str),
    #[error("verification failed: {0}")]
    VerificationFailed(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("unknown generator")]
    UnknownGenerator,
    #[error("unknown named graph")]
    UnknownGraph,
    #[error("bad parameters: {0}")]
    BadParams(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("no rotator for edge {0}")]
    MissingEdge(EdgeId),
    #[error("rotator of edge {0} is not a permutation of its darts")]
    NotAPermutation(EdgeId),
    #[error("rotator given for unknown edge {0}")]
    UnknownEdge(EdgeId),
}
