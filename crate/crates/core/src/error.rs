use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({x}, {y}) is not in the upper half-plane")]
    InvalidPoint { x: f64, y: f64 },

    #[error("matrix has non-positive determinant {0}")]
    BadDeterminant(f64),

    #[error("point escaped to the ideal boundary under the Möbius action")]
    BoundaryEscape,

    #[error("angle undefined: a ray endpoint coincides with the vertex")]
    DegenerateAngle,

    #[error("angles ({0}, {1}, {2}) do not bound a hyperbolic triangle")]
    NotHyperbolic(f64, f64, f64),

    #[error("a punctured sphere needs at least 4 punctures, got {0}")]
    TooFewPunctures(usize),

    #[error("invalid angle vector: {0}")]
    InvalidAlpha(String),

    #[error("coordinates outside the moment polytope: mu_{index} = {value}")]
    OutsidePolytope { index: usize, value: f64 },

    #[error("gamma_{0} is required but absent")]
    MissingGamma(usize),

    #[error("malformed chain: {0}")]
    MalformedChain(String),

    #[error("generator product is {residual:e} away from ±identity")]
    ProductNotIdentity { residual: f64 },

    #[error("generator {index} has rotation angle {found}, expected {expected}")]
    WrongGeneratorAngle {
        index: usize,
        expected: f64,
        found: f64,
    },

    #[error("image of {curve} is not elliptic (|trace| = {trace})")]
    NonElliptic { curve: String, trace: f64 },

    #[error("curve {0} has no declared twist side")]
    NoTwistSide(String),

    #[error("unknown curve label {0:?}")]
    BadLabel(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown {kind} {name:?}; known: {known}")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("invalid configuration at `{path}`: {message}")]
    Config { path: String, message: String },
}
