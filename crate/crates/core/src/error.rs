use thiserror::Error;

/// Errors raised by the geometry kernel, graph ingestion and the derived computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid space form: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is off the model manifold (residual {residual:.3e} > {tolerance:.1e})")]
    OffManifold { residual: f64, tolerance: f64 },

    #[error("tangent vectors are based at different points")]
    BaseMismatch,

    #[error("vector is not tangent at its base point (residual {0:.3e})")]
    NotTangent(f64),

    #[error("zero tangent vector")]
    ZeroVector,

    #[error("coincident points have no connecting direction")]
    CoincidentPoints,

    #[error("diameter bound violated: distance {distance} reaches pi/b = {limit}")]
    DiameterBound { distance: f64, limit: f64 },

    #[error("conjugate point reached: r = {r} >= pi/b = {limit}")]
    ConjugatePoint { r: f64, limit: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} has valence {valence}; every vertex needs valence at least 2")]
    LowValence { vertex: String, valence: usize },

    #[error("graph is disconnected; components: {}", format_components(.0))]
    Disconnected(Vec<Vec<String>>),

    #[error("edge {edge}: {reason}")]
    DegenerateEdge { edge: String, reason: String },

    #[error("sampling step {h} exceeds the shortest edge length {shortest}")]
    StepTooLarge { h: f64, shortest: f64 },

    #[error("apex lies on the graph (edge {edge}, distance {distance:.3e})")]
    ApexOnGraph { edge: String, distance: f64 },

    #[error("arclength inconsistency on edge {edge}: 1 - r'^2 = {radicand:.3e}")]
    ArclengthInconsistency { edge: String, radicand: f64 },

    #[error("center-of-mass iteration failed: {0}")]
    CenterDiverged(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed graph document: {0}")]
    Json(#[from] serde_json::Error),
}

fn format_components(components: &[Vec<String>]) -> String {
    components
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Error {
    /// Input-validation failures (bad documents, illegal graphs) as opposed
    /// to failures of a numerical computation on otherwise valid input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpace(_)
                | Error::DimensionMismatch { .. }
                | Error::OffManifold { .. }
                | Error::InvalidGraph(_)
                | Error::LowValence { .. }
                | Error::Disconnected(_)
                | Error::UnknownVertex(_)
                | Error::InvalidArgument(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
