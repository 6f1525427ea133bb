use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected {expected} cells, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("line {line}, column `{column}`: cannot parse `{value}` as a number")]
    Unparseable {
        line: usize,
        column: String,
        value: String,
    },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("column `{0}` appears in both tables; supply a rename")]
    ColumnCollision(String),
    #[error("column `{0}` is constant and cannot be min-max normalized")]
    DegenerateColumn(String),
    #[error("expression `{expr}`: {message}")]
    Expression { expr: String, message: String },
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("rankings cover different items: {0}")]
    ItemMismatch(String),
    #[error("index {index} out of range for {len} items")]
    OutOfRange { index: usize, len: usize },
    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("invalid model: {0}")]
    Model(String),
    #[error("solver budget exhausted: {0}")]
    Budget(String),
    #[error("solver numerical failure: {0}")]
    Numerical(String),
    #[error("witness check failed: {0}")]
    Witness(String),
    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}
