use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate ({x}, {y}) outside the supported range |c| < 2^31")]
    CoordinateOutOfRange { x: i64, y: i64 },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("points {0}, {1}, {2} are collinear")]
    Collinear(usize, usize, usize),
    #[error("triangle is degenerate (its vertices are collinear)")]
    DegenerateTriangle,
    #[error("affine map is singular")]
    SingularMap,
    #[error("affine image of point {index} is not representable")]
    AffineOverflow { index: usize },
    #[error("invalid scale {num}/{den}")]
    InvalidScale { num: u64, den: u64 },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("{n} points exceed the limit of {max}")]
    TooManyPoints { n: usize, max: usize },
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pair indices must differ (got {0} twice)")]
    SameIndex(usize),
    #[error("invalid convex body: {0}")]
    InvalidBody(&'static str),
    #[error("grid needs an even point count, got {0}")]
    OddCount(usize),
    #[error("only {available} mesh squares fit inside the body, {needed} required")]
    InsufficientSquares { needed: usize, available: usize },
    #[error("quadrature did not reach the requested tolerance")]
    QuadratureDiverged,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
