use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("invalid patch: {0}")]
    InvalidPatch(String),

    #[error("parameter ({r}, {s}) lies outside the domain [{r0}, {r1}] x [{s0}, {s1}]")]
    OutsideDomain {
        r: f64,
        s: f64,
        r0: f64,
        r1: f64,
        s0: f64,
        s1: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate geometry at ({r}, {s}): {what}")]
    DegenerateGeometry { r: f64, s: f64, what: &'static str },

    #[error("derivative order {requested} requested, at most {available} available")]
    DerivativeOrder { requested: usize, available: usize },

    #[error("invalid problem definition: {0}")]
    InvalidProblem(String),

    #[error("unknown benchmark case `{0}`")]
    UnknownCase(String),

    #[error("sparse matrix construction failed: {0}")]
    Matrix(String),

    #[error("singular system ({reason}); estimated null-space dimension: {}", null_dim.map(|d| d.to_string()).unwrap_or_else(|| "unknown".into()))]
    Singular {
        reason: String,
        null_dim: Option<usize>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
