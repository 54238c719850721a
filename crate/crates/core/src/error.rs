use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is numerically singular (condition estimate {condition:.3e})")]
    SingularMatrix { condition: f64 },
    #[error("matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("min-linf bisection did not converge: {0}")]
    NonConvergent(String),
    #[error("{targets} cancellation targets exceed {elements} IRS elements")]
    TooManyTargets { targets: usize, elements: usize },
    #[error("need at least {required} IRS elements, have {available}")]
    TooFewElements { required: usize, available: usize },
    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("size {size} exceeds budget {budget} ({what})")]
    SizeOverflow { what: String, size: usize, budget: usize },
    #[error("receiver {receiver} is not decodable")]
    NotDecodable { receiver: usize },
    #[error("estimator called with zero samples")]
    ZeroSamples,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Dimension(_) | Error::WeightSum { .. } => 2,
            Error::TooFewElements { .. } | Error::TooManyTargets { .. } => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
