use thiserror::Error;

/// Errors surfaced by the geometry, homological-algebra and IO layers.
///
/// Variants split into two classes: invalid input (rejected data, failed
/// preconditions) and internal invariant violations (a verification step the
/// library performs on its own output failed). The CLI maps the former to
/// exit code 2 and the latter to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("polyhedron is nonempty but has no vertex (contains a line)")]
    NoVertex,
    #[error("unbounded input: {0}")]
    Unbounded(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not full-dimensional: {0}")]
    NotFullDimensional(String),
    #[error("incompatible polyhedron: {0}")]
    Incompatible(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("filtration error: {0}")]
    Filtration(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(String),
    /// A consistency check on data the library itself produced failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Exit code the CLI should use for this error: 2 for rejected input,
    /// 3 for internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
