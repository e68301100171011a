use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the forward models, the reconstructions and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // Construction and argument errors.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("order {requested} exceeds the available order {available}")]
    OrderExceeded { requested: usize, available: usize },

    // Series algebra.
    #[error("leading coefficient must be positive, got {0}")]
    NonpositiveLeadingCoefficient(f64),
    #[error("leading coefficient must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("inner series of a composition must vanish at 0, got constant {0}")]
    NonzeroInnerConstant(f64),
    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),

    // Curves.
    #[error("plane curve is not A-type at the base point (second derivative vanishes)")]
    NotAType,
    #[error("projection direction is tangent to the curve (cos theta1 = 0)")]
    TangentDirection,
    #[error("sample grid is degenerate: {0}")]
    DegenerateGrid(String),
    #[error("degenerate measurement: {0}")]
    DegenerateMeasurement(String),
    #[error("projection directions are collinear (sin phi = 0)")]
    CollinearDirections,
    #[error("recovered viewing angle {0} lies outside (0, pi)")]
    AngleOutOfRange(f64),
    #[error("linear system is ill-conditioned at level {level}: |det| = {det:e}")]
    IllConditioned { level: usize, det: f64 },
    #[error("measured curvature vanishes")]
    ZeroCurvatureMeasurement,

    // Surfaces.
    #[error("direction is asymptotic (p(theta) = 0)")]
    AsymptoticDirection,
    #[error("contour generator cannot be parametrized by u (a02 sin theta = 0)")]
    DegenerateParametrization,
    #[error("surface violates the normalization a20*a02 != 0, a20 > a02, a20 > 0")]
    NotNormalized,
    #[error("root refinement failed at u = {u}: residual {residual:e}")]
    RootRefinementFailed { u: f64, residual: f64 },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("no real solution: mean/Gaussian pair has M^2 < G ({0})")]
    NoRealRoots(String),
    #[error("no angle branch reproduces the measurements: {0}")]
    NoConsistentBranch(String),

    // Analysis.
    #[error("no real point on the ambiguity curve at M = {0}")]
    NoRealPoint(f64),
    #[error("branch search failed: {0}")]
    BranchSearchFailed(String),
    #[error("point is a flat umbilic (a20 = a02 = 0)")]
    FlatUmbilic,
}

impl Error {
    /// True for errors caused by malformed arguments rather than by the
    /// geometry of a well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::NonFinite(_) | Error::OrderExceeded { .. }
        )
    }
}
