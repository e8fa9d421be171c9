//! Exact computation of extension complexities of 0/1-polytopes of dimension at most four.
//!
//! The crate walks the whole chain from raw vertex subsets of the cube to certified
//! extension complexities:
//!
//! * [`core_types`]: vertex sets, polytope IDs and the symmetry group of the cube,
//! * [`exact_geometry`]: affine hulls, facets, f-vectors and slack matrices in exact arithmetic,
//! * [`equivalence`]: 0/1-equivalence and affine equivalence classes,
//! * [`lower_bounds`]: fooling sets, rectangle coverings and refined rectangle coverings,
//! * [`constructions`]: upper bounds from unions, reflections and down-monotonization,
//!   together with explicit nice 0/1-extensions that certify them,
//! * [`pipeline`]: orchestration, reports and comparison against the bundled tables.
//!
//! The linear algebra is generic over a [`Field`] scalar. Everything the pipeline computes
//! runs over [`Rational`] (or plain `i64` for integer data); no floating point is involved.

pub mod constructions;
pub mod core_types;
pub mod equivalence;
mod error;
pub mod exact_geometry;
pub mod linalg;
pub mod lower_bounds;
pub mod pipeline;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, SlackEntry};

pub use core_types::{CubeSymmetry, VertexSet};
pub use exact_geometry::{FacetRow, FacetSystem, SlackMatrix};

/// Exact rational scalar used throughout the pipeline.
pub type Rational = num_rational::Ratio<i128>;

/// Dense rational matrix.
pub type RationalMatrix = linalg::Matrix<Rational>;

/// Affine map with rational coefficients.
pub type RationalAffineMap = linalg::AffineMap<Rational>;

/// Slack matrix with machine-integer entries, the form produced by [`exact_geometry::slack_matrix`].
pub type IntSlackMatrix = SlackMatrix<i64>;
