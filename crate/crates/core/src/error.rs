use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a complex needs at least one vertex")]
    EmptyComplex,
    #[error("duplicate vertex `{0}` in vertex order")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("empty facet")]
    EmptyFacet,
    #[error("vertex `{0}` listed twice in one simplex")]
    RepeatedVertexInSimplex(String),
    #[error("{{{0}}} is not a simplex of the complex")]
    NotASimplex(String),
    #[error("vertex `{vertex}` does not belong to simplex {{{simplex}}}")]
    VertexNotInSimplex { vertex: String, simplex: String },
    #[error("chain terms have mixed dimensions {0} and {1}")]
    MixedDimension(usize, usize),
    #[error("element mixes degrees {0} and {1}")]
    MixedDegree(usize, usize),
    #[error("{{{lower}}} is not a subset of {{{upper}}}")]
    NotASubset { lower: String, upper: String },
    #[error("story repeats the neighbouring statement {{{0}}}")]
    RepeatedNeighbour(String),
    #[error("story is not fair")]
    UnfairStory,
    #[error("an empty story has no statements")]
    EmptyStory,
    #[error("operands live over different complexes")]
    ComplexMismatch,
    #[error("the ideal starts in degree 1; degree 0 was requested")]
    DegreeZeroIdeal,
    #[error("vertex map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("source vertex `{0}` is not mapped")]
    UnmappedVertex(String),
    #[error("source vertex `{0}` is mapped twice")]
    DuplicateMapping(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("parse error at column {column}: {message}")]
    Expr { column: usize, message: String },
}
