use thiserror::Error;

/// Every failure the library can report. Variant names double as the stable
/// error codes printed by the command line tool.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arc {arc} is paired with itself")]
    InvolutionFixedPoint { arc: String },

    #[error("arc {arc} belongs to more than one neighborhood")]
    ArcInTwoNeighborhoods { arc: String },

    #[error("invalid boundary: {reason}")]
    BoundaryViolation { reason: String },

    #[error("identifier {id} is declared twice")]
    DuplicateIdentifier { id: String },

    #[error("unknown arc {arc}")]
    UnknownArc { arc: String },

    #[error("unknown vertex {vertex}")]
    UnknownVertex { vertex: String },

    #[error("a nodeless loop arose in safe mode")]
    NodelessLoopInSafeMode,

    #[error("the nodeless loop is not an object of the core category")]
    NodelessLoopInCoreMode,

    #[error("input graph is not connected")]
    DisconnectedInput,

    #[error("{what} is not an internal edge")]
    NotInternalEdge { what: String },

    #[error("source/target mismatch: {reason}")]
    SourceTargetMismatch { reason: String },

    #[error("mode mismatch: {reason}")]
    ModeMismatch { reason: String },

    #[error("arc map does not commute with the involution at {arc}")]
    NotInvolutive { arc: String },

    #[error("no embedding has the boundary requested for vertex {vertex}")]
    NoEmbeddingWithBoundary { vertex: String },

    #[error("images of two vertices share vertex {vertex}")]
    VertexOverlap { vertex: String },

    #[error("a graph without boundary is sent entirely into edges")]
    CollapseViolation,

    #[error("vertex {vertex} cannot be sent to an edge")]
    EdgeFlagShapeError { vertex: String },

    #[error("enumeration needs about {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid boundary match at vertex {vertex}: {reason}")]
    InvalidBoundaryMatch { vertex: String, reason: String },

    #[error("map is not in the requested subcategory: {reason}")]
    NotInSubcategory { reason: String },

    #[error("map {map} is not generated by the presheaf table")]
    MapNotInCorpusSpan { map: String },

    #[error("presheaf table does not describe a functor: {reason}")]
    InconsistentTable { reason: String },

    #[error("corpus has no object isomorphic to {what}")]
    MissingCorpusObject { what: String },

    #[error("corpus is too small: {reason}")]
    CorpusTooSmall { reason: String },

    #[error("vertex {vertex} is not stable")]
    UnstableGraph { vertex: String },

    #[error("map does not preserve genus at vertex {vertex}")]
    ClosureViolation { vertex: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A validation error in an input block, located by its first line.
    #[error("line {line}: {error}")]
    At { line: usize, error: Box<Error> },
}

impl Error {
    /// The variant name, used as a machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvolutionFixedPoint { .. } => "InvolutionFixedPoint",
            Error::ArcInTwoNeighborhoods { .. } => "ArcInTwoNeighborhoods",
            Error::BoundaryViolation { .. } => "BoundaryViolation",
            Error::DuplicateIdentifier { .. } => "DuplicateIdentifier",
            Error::UnknownArc { .. } => "UnknownArc",
            Error::UnknownVertex { .. } => "UnknownVertex",
            Error::NodelessLoopInSafeMode => "NodelessLoopInSafeMode",
            Error::NodelessLoopInCoreMode => "NodelessLoopInCoreMode",
            Error::DisconnectedInput => "DisconnectedInput",
            Error::NotInternalEdge { .. } => "NotInternalEdge",
            Error::SourceTargetMismatch { .. } => "SourceTargetMismatch",
            Error::ModeMismatch { .. } => "ModeMismatch",
            Error::NotInvolutive { .. } => "NotInvolutive",
            Error::NoEmbeddingWithBoundary { .. } => "NoEmbeddingWithBoundary",
            Error::VertexOverlap { .. } => "VertexOverlap",
            Error::CollapseViolation => "CollapseViolation",
            Error::EdgeFlagShapeError { .. } => "EdgeFlagShapeError",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InvalidBoundaryMatch { .. } => "InvalidBoundaryMatch",
            Error::NotInSubcategory { .. } => "NotInSubcategory",
            Error::MapNotInCorpusSpan { .. } => "MapNotInCorpusSpan",
            Error::InconsistentTable { .. } => "InconsistentTable",
            Error::MissingCorpusObject { .. } => "MissingCorpusObject",
            Error::CorpusTooSmall { .. } => "CorpusTooSmall",
            Error::UnstableGraph { .. } => "UnstableGraph",
            Error::ClosureViolation { .. } => "ClosureViolation",
            Error::Parse { .. } => "ParseError",
            Error::At { error, .. } => error.code(),
        }
    }
}

impl Error {
    /// Attach a source line number.
    pub fn at(self, line: usize) -> Error {
        match self {
            Error::Parse { line: 0, message } => Error::Parse { line, message },
            e @ (Error::Parse { .. } | Error::At { .. }) => e,
            e => Error::At { line, error: Box::new(e) },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
