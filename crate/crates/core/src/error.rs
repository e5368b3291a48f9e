use thiserror::Error;

use crate::mcg::Involution;

/// Every failure the library can report. Each variant has a stable
/// snake_case [`code`](Error::code) used by structured emitters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("|tr| = {trace} is within tolerance of 2 but the matrix is not ±identity")]
    AmbiguousClass { trace: f64 },
    #[error("matrix is not elliptic (|tr| = {trace})")]
    NotElliptic { trace: f64 },
    #[error("lower-left entry vanishes")]
    ZeroDenominator,
    #[error("point lies on the hyperbola xy - x - y = 0 (x = {x}, y = {y})")]
    OnHyperbola { x: f64, y: f64 },
    #[error("level formula is indeterminate at the singular point (2,2,2)")]
    Indeterminate,
    #[error("singular point of the level function at ({a}, {b}, {c})")]
    SingularPoint { a: f64, b: f64, c: f64 },
    #[error("product {product} <= 4: curve is not hyperbolic")]
    NotHyperbolic { product: f64 },
    #[error("kappa = {kappa} is out of range (need kappa > -2)")]
    OutOfRange { kappa: f64 },
    #[error("kappa = -2: cone angle 2π is a degenerate limit")]
    DegenerateTwoPi,
    #[error("triple ({a}, {b}, {c}) is not on the geometric component")]
    NotGeometric { a: f64, b: f64, c: f64 },
    #[error("CBA = -identity (singular point (2,2,2))")]
    DegenerateMinusIdentity,
    #[error("kappa = {kappa} is not in the cone-point range (-2, 2)")]
    NotConeCase { kappa: f64 },
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("pivot of {axis} equals 1 after applying {prefix_len} letters")]
    PivotAtOne { axis: Involution, prefix_len: usize },
    #[error("word is not reduced: letter {position} repeats its predecessor")]
    NotReduced { position: usize },
    #[error("reduction did not reach the fundamental domain within {max_steps} steps")]
    MaxStepsExceeded { max_steps: usize },
    #[error("image of a generator is not parabolic (|tr| = {trace})")]
    NonParabolicImage { trace: f64 },
    #[error("fixed points of the image generators coincide")]
    CoincidentFixedPoints,
    #[error("automorphism image is not a conjugate of a generator or its inverse")]
    NotPeripheral,
    #[error("axis endpoints coincide")]
    DegenerateAxis,
    #[error("quadrature did not converge: error estimate {estimate:e} after {subdivisions} subdivisions")]
    QuadratureNotConverged { estimate: f64, subdivisions: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::AmbiguousClass { .. } => "ambiguous_class",
            Error::NotElliptic { .. } => "not_elliptic",
            Error::ZeroDenominator => "zero_denominator",
            Error::OnHyperbola { .. } => "on_hyperbola",
            Error::Indeterminate => "indeterminate",
            Error::SingularPoint { .. } => "singular_point",
            Error::NotHyperbolic { .. } => "not_hyperbolic",
            Error::OutOfRange { .. } => "out_of_range",
            Error::DegenerateTwoPi => "degenerate_two_pi",
            Error::NotGeometric { .. } => "not_geometric",
            Error::DegenerateMinusIdentity => "degenerate_minus_identity",
            Error::NotConeCase { .. } => "not_cone_case",
            Error::CertificateFailed(_) => "certificate_failed",
            Error::PivotAtOne { .. } => "pivot_at_one",
            Error::NotReduced { .. } => "not_reduced",
            Error::MaxStepsExceeded { .. } => "max_steps_exceeded",
            Error::NonParabolicImage { .. } => "non_parabolic_image",
            Error::CoincidentFixedPoints => "coincident_fixed_points",
            Error::NotPeripheral => "not_peripheral",
            Error::DegenerateAxis => "degenerate_axis",
            Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
