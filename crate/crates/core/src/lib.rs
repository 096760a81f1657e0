//! Exact incidence algebras of finite simplicial complexes.
//!
//! The incidence algebra `I(K)` of a simplicial complex `K` is spanned by the
//! pairs `|P><Q|` with `P ⊆ Q`. Graded by `dim Q - dim P`, it carries a
//! differential built from the border operator and its adjoint:
//!
//! ```text
//! d |P><Q| = |∂P><Q| - (-1)^n |P><Q∂|
//! ```
//!
//! This crate builds that structure with arbitrary-precision rationals and
//! checks it against a second route: the stories algebra (the universal
//! differential envelope of the functions on `K`), the ideal of unfair and
//! sign-balanced stories, and the projection `sigma` onto `I(K)`. Simplicial
//! maps act contravariantly through [`functor::VertexMap`].
//!
//! Module map:
//! - [`complex`]: complexes, simplices, chains, border/coborder, Betti numbers.
//! - [`incidence`]: incidence elements, product, differential.
//! - [`stories`]: stories, the envelope differential, the ideal, `sigma`, `lift`.
//! - [`functor`]: vertex maps and their pullbacks.
//! - [`expr`]: text formats, element grammar, JSON records.
//! - [`corpus`], [`props`]: the reference complexes/maps and the property suite.

pub mod complex;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod expr;
pub mod functor;
pub mod incidence;
pub mod linalg;
pub mod props;
pub mod sign;
pub mod stories;

pub use complex::{betti, Chain, Complex, Simplex, SimplexId, VertexId};
pub use error::{Error, Result};
pub use exec::Execution;
pub use functor::{DifferentiabilityReport, VertexMap};
pub use incidence::{BasisPair, IncidenceElement};
pub use sign::Sign;
pub use stories::{IdealReport, Story, StoryElement};

/// Exact scalar field used throughout.
pub type Scalar = num_rational::BigRational;
