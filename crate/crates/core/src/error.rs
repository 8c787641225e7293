use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime >= 3")]
    NotPrime(u64),
    #[error("dimension {0} is below 2")]
    BadDimension(usize),
    #[error("modulus {0} exceeds the supported cap of 2^20")]
    ModulusTooLarge(u64),
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate {value} is not reduced modulo {q}")]
    Unreduced { value: u64, q: u64 },
    #[error("parameter t must be nonzero for {0}")]
    ZeroParameter(&'static str),
    #[error("{what} of size {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error("length {len} exceeds the cap {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("relation is not symmetric: phi(x, y) != phi(y, x) for x = {x:?}, y = {y:?}")]
    AsymmetricRelation { x: Vec<u32>, y: Vec<u32> },
    #[error("pair function has a negative value at ({0}, {1})")]
    NegativeInput(usize, usize),
    #[error("relation not supported by {0}")]
    WrongRelation(&'static str),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("missing input: {0}")]
    MissingInput(&'static str),
    #[error("unsupported theorem: {0}")]
    UnsupportedTheorem(String),
    #[error("bad set recipe: {0}")]
    BadRecipe(String),
    #[error("file format error at line {line}: {msg}")]
    FileFormat { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instance {index}: {source}")]
    Instance { index: usize, source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that come from a size or length cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        match self {
            Error::Instance { source, .. } => source.is_resource_cap(),
            other => matches!(
                other,
                Error::TooLarge { .. } | Error::TooLong { .. } | Error::ModulusTooLarge(_)
            ),
        }
    }

    pub(crate) fn at_instance(self, index: usize) -> Self {
        Error::Instance {
            index,
            source: Box::new(self),
        }
    }

    pub(crate) fn too_large(what: &'static str, size: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::TooLarge {
            what,
            size: size.into(),
            cap: cap.into(),
        }
    }
}
