use thiserror::Error;

/// Errors shared across the crate. Variant names follow the failure they
/// report; most carry enough context to locate the offending element.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not bipartite: {0}")]
    NonBipartite(String),

    #[error("white vertex {vertex}: incident rhombus angles sum to {sum}, expected 2π")]
    WhiteAngleSum { vertex: u32, sum: f64 },

    #[error("Euler characteristic {chi} is not 2-2g for any genus g >= 1")]
    EulerMismatch { chi: i64 },

    #[error("edge {edge}: rhombus angle {alpha} outside (0, π)")]
    NonPositiveAngle { edge: u32, alpha: f64 },

    #[error("edge {edge} is not incident to vertex {vertex}")]
    NotIncident { vertex: u32, edge: u32 },

    #[error("degenerate corner at vertex {vertex}: incoming and outgoing edge coincide")]
    DegenerateCorner { vertex: u32 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("GF(2) system is singular: {0}")]
    SingularSolve(String),

    #[error("chain is not a cycle: boundary at vertex {vertex} is {defect}")]
    NotACycle { vertex: u32, defect: i64 },

    #[error("no flat cochain exists: odd vertex count {count}")]
    OddVertexCount { count: usize },

    #[error("cone angle {theta} at {location} is not a positive multiple of 2π")]
    NonIntegralConeAngle { location: String, theta: f64 },

    #[error("canonical cochain validation failed: {0}")]
    HolonomyMismatch(String),

    #[error("curvature identity failed at face {face}: |c + exp(iθ/2)| = {defect}")]
    CurvatureIdentityFailed { face: u32, defect: f64 },

    #[error("GF(2) face system inconsistent: {0}")]
    Gf2Inconsistent(String),

    #[error("sign system for the base spin structure is inconsistent: {0}")]
    StarUnreachable(String),

    #[error("winding sum {value} is not an integer multiple of 2π within tolerance")]
    NonIntegerWinding { value: f64 },

    #[error("cone angle {theta} at {location} is not an odd multiple of 2π")]
    EvenConeAngle { location: String, theta: f64 },

    #[error("Arf sum {sum} has modulus != 2^g; input is not a quadratic form")]
    NotPlusMinus2g { sum: i64 },

    #[error("Kasteleyn conditions violated: {0}")]
    ConditionsViolated(String),

    #[error("could not re-select basis cycles with even q0 values")]
    OddQ0Unresolvable,

    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("white vertex {vertex} has degree {degree} < 3")]
    WhiteDegreeTooSmall { vertex: u32, degree: usize },

    #[error("builder parameter out of range: {0}")]
    AngleOutOfRange(String),

    #[error("builder produced an invalid surface: {0}")]
    ConstructionInvalid(String),

    #[error("malformed surface data: {0}")]
    InvalidSurface(String),

    #[error("graph too large for brute-force enumeration: {vertices} vertices (cap {cap})")]
    TooLarge { vertices: usize, cap: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
