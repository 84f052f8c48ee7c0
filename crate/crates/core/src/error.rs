use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degenerate position: {0}")]
    DegeneratePosition(String),
    #[error("curve is not immersed near parameter {0}")]
    NotImmersed(String),
    #[error("curve self-intersects at parameters {0}")]
    SelfIntersecting(String),
    #[error("affine chart meets the curve tangentially")]
    ChartHitsCurveTangentially,
    #[error("degenerate parametrization: {0}")]
    DegenerateParametrization(String),
    #[error("non-generic projection: {0}")]
    NonGenericProjection(String),
    #[error("no admissible chart: {0}")]
    ChartFailure(String),
    #[error("point lies on the curve")]
    PointOnCurve,
    #[error("curve is not maximally writhed: {0}")]
    NotMW(String),
    #[error("census matches neither viewpoint region: {0}")]
    AmbiguousCensus(String),
    #[error("plane through the line is not transverse to the curve")]
    NonTransversePlane,
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("diagram has {0} crossings, above the state-sum budget {1}")]
    TooManyCrossings(usize, usize),
    #[error("Alexander polynomial requested for a {0}-component link")]
    MultiComponent(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("curve is not smooth: {0}")]
    NotSmooth(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
