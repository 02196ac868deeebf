use thiserror::Error;

use crate::geometry::Point2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({}, {}) is not strictly inside the domain", .0.x, .0.y)]
    NotInterior(Point2),

    #[error("direction has norm {0}, expected a unit vector")]
    NonUnitDirection(f64),

    #[error("points are closer than the geometric tolerance ({0:e})")]
    CoincidentPoints(f64),

    #[error("adaptive quadrature did not converge within {depth} refinement levels")]
    QuadratureNonConvergent { depth: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {0} outside [0, 1]")]
    OutOfDomain(f64),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("constructed boundary is not convex at edge {0}")]
    NonConvexOutput(usize),

    #[error("domain is not centrally symmetric about its basepoint")]
    NotSymmetric,

    #[error("tangent line does not meet the boundary")]
    NoIntersection,

    #[error("tree needs {needed} gaps but the set provides {available}")]
    InsufficientGaps { needed: usize, available: usize },

    #[error("{0} is not a point of the set at the available resolution")]
    NotInSet(f64),

    #[error("source exponent {source_dim} must be smaller than target exponent {target_dim}")]
    ExponentOrder { source_dim: f64, target_dim: f64 },

    #[error("base map sends distinct points {0} and {1} to the same image")]
    BaseMapNotInjective(f64, f64),

    #[error("map is not order preserving near {0}")]
    NotOrderPreserving(f64),

    #[error("vertices {0}, {1}, {2} violate strict convexity")]
    NonConvex(usize, usize, usize),

    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergent { .. } | Error::NoIntersection | Error::NonConvexOutput(_)
        )
    }
}
