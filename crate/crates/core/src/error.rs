use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{label}` in {side} labels")]
    DuplicateLabel { label: String, side: &'static str },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("label map is not defined on `{0}`")]
    MapNotTotal(String),

    #[error("not a morphism of relations: ({x}, {y}) is sent to ({fx}, {fy}), which is not in the target")]
    NotAMorphism {
        x: String,
        y: String,
        fx: String,
        fy: String,
    },

    #[error("cannot compose: target of the first morphism is not the source of the second")]
    SourceTargetMismatch,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("a simplex needs at least one vertex")]
    EmptySimplex,

    #[error("not simplicial: the image of {facet:?} is not a simplex of the target")]
    NotSimplicial { facet: Vec<String> },

    #[error("{simplex:?} is not a simplex")]
    NotASimplex { simplex: Vec<String> },

    #[error("a nerve needs at least one cover element")]
    EmptyCover,

    #[error("a facet with {size} vertices exceeds the dimension guard (max dimension {max_dimension})")]
    DimensionGuard { size: usize, max_dimension: usize },

    #[error("more than {limit} simplices; raise the simplex budget to enumerate this complex")]
    SimplexBudget { limit: usize },

    #[error("brute force is limited to {limit} objects, got {size}")]
    TooLarge { size: usize, limit: usize },

    #[error("homology map in degree {degree} is not invertible")]
    NotInvertible { degree: usize },

    #[error("{0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Resource guards, as opposed to bad input.
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::DimensionGuard { .. } | Error::SimplexBudget { .. })
    }
}
