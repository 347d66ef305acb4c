use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch in {op}: expected {expected}, got {got}")]
    Shape {
        op: &'static str,
        expected: String,
        got: String,
    },

    #[error("matrix is not an se(3) element (deviation {0:.3e})")]
    NotSe3(f64),

    #[error("rotation is not orthonormal (deviation {0:.3e})")]
    MalformedRotation(f64),

    #[error("configuration does not match joint {joint}: {reason}")]
    BadConfig { joint: usize, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cycle detected in parent graph involving body '{0}'")]
    CycleDetected(String),

    #[error("unknown joint kind '{0}'")]
    UnknownJoint(String),

    #[error("rotational inertia of body '{0}' is not symmetric positive-definite")]
    NonSpdInertia(String),

    #[error("singular {0}: model is not physical")]
    Singular(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(op: &'static str, expected: impl ToString, got: impl ToString) -> Error {
    Error::Shape {
        op,
        expected: expected.to_string(),
        got: got.to_string(),
    }
}
