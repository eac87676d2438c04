use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong across the crate.
///
/// Validation failures carry a human-readable reason; the schema layer wraps
/// them with a JSON pointer when they come from an input file.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is singular (ad - bc = 0)")]
    SingularMatrix,
    #[error("complex value is not finite: {0}")]
    NonFinite(String),
    #[error("map is the identity; every point is fixed")]
    IdentityMap,
    #[error("map is parabolic or the identity and has no multiplier pair")]
    NotDiagonalizable,
    #[error("degenerate quadruple: {0}")]
    DegenerateQuadruple(&'static str),

    #[error("invalid graft spec: {0}")]
    InvalidSpec(String),
    #[error("closed form needs at least one leaf")]
    EmptySpec,

    #[error("invalid model map: {0}")]
    InvalidModel(String),
    #[error("point {0} lies on the branch cut (negative real axis)")]
    BranchCut(String),
    #[error("model maps are undefined at the puncture and at infinity")]
    AtPuncture,
    #[error("finite-difference step too large: estimates at h and h/2 differ by {0:e}")]
    StepTooLarge(f64),
    #[error("w^2 q(w) does not converge as w -> 0 (pole of order > 2?)")]
    DivergentLimit,
    #[error("continuation fit residual {0:e} exceeds tolerance")]
    FitResidualTooLarge(f64),

    #[error("invalid surface signature: {0}")]
    InvalidSignature(String),
    #[error("pants-curve count is not an integer")]
    NonIntegerT,

    #[error("unknown generator index {0}")]
    UnknownGenerator(i32),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid framing: {0}")]
    InvalidFraming(String),
    #[error("orbit search exceeded its caps before closing or reaching the target")]
    DepthExceeded,
    #[error("puncture {0} has identity or parabolic peripheral and cannot be flipped")]
    NotFlippable(usize),
    #[error("identity peripheral needs the model map's asymptotic value")]
    MissingAsymptotic,
    #[error("Fock-Goncharov coordinate is not defined: {0}")]
    IllDefinedCoordinate(&'static str),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
}
