use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by fan validation and the geometric computations built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vectors are not independent")]
    NotIndependent,
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fan dimension must be at least 1")]
    BadDimension,
    #[error("ray {ray} is zero")]
    ZeroRay { ray: usize },
    #[error("ray {ray} not primitive")]
    RayNotPrimitive { ray: usize },
    #[error("rays {first} and {second} are duplicates")]
    DuplicateRay { first: usize, second: usize },
    #[error("ray index {index} out of range in cone {cone}")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("cone {cone} is not full-dimensional")]
    ConeNotFullDimensional { cone: usize },
    #[error("cone {cone} is not strongly convex")]
    ConeNotStronglyConvex { cone: usize },
    #[error("cone {cone} lists ray {ray} which is not an extremal ray of the cone")]
    ConeRayNotExtremal { cone: usize, ray: usize },
    #[error("cones {first} and {second} do not intersect in a common face")]
    ConesNotIntersectingInFace { first: usize, second: usize },
    #[error("cones {first} and {second} are identical")]
    DuplicateCone { first: usize, second: usize },
    #[error("ray {ray} belongs to no maximal cone")]
    UnusedRay { ray: usize },
    #[error("rays do not span the ambient space (torus factor)")]
    TorusFactor,
    #[error("fan not complete/valid: facet {facet:?} of cone {cone} has {count} incident maximal cones")]
    NotComplete { cone: usize, facet: Vec<usize>, count: usize },
    #[error("fan not complete/valid: maximal cones are not connected through walls")]
    Disconnected,
    #[error("malformed fan JSON: {0}")]
    Json(String),

    #[error("multiplicity undefined for non-simplicial cone")]
    NonSimplicialCone,
    #[error("ray index {0} out of range")]
    RayOutOfRange(usize),
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },
    #[error("boundary coefficient {index} outside [0,1]")]
    BoundaryCoefficient { index: usize },
    #[error("divisor is not Q-Cartier")]
    NotQCartier,
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("weights {0:?} are not well-formed")]
    NotWellFormed(Vec<i64>),
    #[error("weights do not match the fan: {0}")]
    WeightMismatch(String),
    #[error("invalid construction parameter: {0}")]
    BadParameter(String),
    #[error("curve class is not an extremal ray of the Mori cone")]
    NotExtremal,
    #[error("ray not contractible in this artifact's scope: {0}")]
    NotContractible(String),
    #[error("fibration contraction out of scope: {0}")]
    UnsupportedFibration(String),
    /// An exact identity that must hold failed; always a bug or a counterexample.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// A theorem-level assertion failed on a valid input.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

impl Error {
    /// Stable machine-readable code for reports and CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotIndependent => "not_independent",
            Error::ZeroVector => "zero_vector",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::BadDimension => "bad_dimension",
            Error::ZeroRay { .. } => "zero_ray",
            Error::RayNotPrimitive { .. } => "ray_not_primitive",
            Error::DuplicateRay { .. } => "duplicate_ray",
            Error::RayIndexOutOfRange { .. } => "ray_index_out_of_range",
            Error::ConeNotFullDimensional { .. } => "cone_not_full_dimensional",
            Error::ConeNotStronglyConvex { .. } => "cone_not_strongly_convex",
            Error::ConeRayNotExtremal { .. } => "cone_ray_not_extremal",
            Error::ConesNotIntersectingInFace { .. } => "cones_not_intersecting_in_face",
            Error::DuplicateCone { .. } => "duplicate_cone",
            Error::UnusedRay { .. } => "unused_ray",
            Error::TorusFactor => "torus_factor",
            Error::NotComplete { .. } => "not_complete",
            Error::Disconnected => "disconnected",
            Error::Json(_) => "json",
            Error::NonSimplicialCone => "non_simplicial_cone",
            Error::RayOutOfRange(_) => "ray_out_of_range",
            Error::DivisorLength { .. } => "divisor_length",
            Error::BoundaryCoefficient { .. } => "boundary_coefficient",
            Error::NotQCartier => "not_q_cartier",
            Error::NotSmooth => "not_smooth",
            Error::NotSimplicial => "not_simplicial",
            Error::NotWellFormed(_) => "not_well_formed",
            Error::WeightMismatch(_) => "weight_mismatch",
            Error::BadParameter(_) => "bad_parameter",
            Error::NotExtremal => "not_extremal",
            Error::NotContractible(_) => "not_contractible",
            Error::UnsupportedFibration(_) => "unsupported_fibration",
            Error::Internal(_) => "internal",
            Error::TheoremViolation(_) => "theorem_violation",
        }
    }
}
