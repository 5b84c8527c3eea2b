//! Exact polynomial curve algebra: invariants, integerization, normalization
//! and birational equivalence.

mod bounds;
mod curve;
pub mod fixtures;
pub(crate) mod linalg;
mod normalize;
mod poly;

pub use bounds::{dimension_bounds, DimensionBounds, Provenance};
pub use curve::{
    c0_constant, c0_constant_abs, canonical_sort, diameter_of, integerize, profile, project,
    r_index, r_index_of, sigma_bound, sigma_bound_abs, type_vector, Curve, CurveProfile,
    IntegerizedCurve,
};
pub use normalize::{
    apply_transform, equivalent, is_degenerate, normalize, normalize_with_pivot, Normalization,
    TransformMatrix,
};
pub use poly::RatPoly;
