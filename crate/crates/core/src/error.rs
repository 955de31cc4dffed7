use crate::cutcheck::CutCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid embedding: {0}")]
    EmbeddingInvalid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("chords {0:?} and {1:?} do not cross")]
    NotCrossing((usize, usize), (usize, usize)),
    #[error("demands are not separable by segment [{start}, +{len})")]
    NotSeparable { start: usize, len: usize },
    #[error("demands on face {0} are not laminar")]
    NotLaminar(usize),
    #[error("instance has {n} vertices, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("commodity {0} has no path in the supply graph")]
    Disconnected(usize),
    #[error("cut condition violated: {0}")]
    CutViolated(Box<CutCertificate>),
    #[error("flow oracle fell short: {0}")]
    OracleShortfall(String),
    #[error("cut cover instance is infeasible even with every edge")]
    Infeasible,
    #[error("no instance found within the search budget")]
    NotFound,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
