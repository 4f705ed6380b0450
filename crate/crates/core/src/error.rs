use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error(
        "storage infeasible: {uavs} UAV(s) holding {per_uav} content(s) each cannot cover {contents} contents"
    )]
    StorageInfeasible {
        per_uav: usize,
        uavs: usize,
        contents: usize,
    },

    #[error("user and UAV positions coincide")]
    CoincidentPositions,

    #[error("user {user} is not associated with UAV {uav}")]
    NotAssociated { user: usize, uav: usize },

    #[error("user {0} is not an uplink transmitter (content user or inactive sensing user)")]
    NotTransmitting(usize),

    #[error("sensing user {0} is already active")]
    AlreadyActive(usize),

    #[error("speed must be non-negative, got {0}")]
    NegativeSpeed(f64),

    #[error("MEC user {user} has no CPU speed allocated at UAV {uav}")]
    ZeroCompute { user: usize, uav: usize },

    #[error("content user {user} has zero downlink rate at UAV {uav}")]
    ZeroRate { user: usize, uav: usize },

    #[error("UAV {0} has no associated users")]
    NoAssociatedUsers(usize),

    #[error("content user {0} cannot be served by any UAV")]
    Unservable(usize),

    #[error("edge weight denominator is zero for user {user} at UAV {uav}")]
    ZeroDenominator { user: usize, uav: usize },

    #[error("closed form infeasible at the given multiplier")]
    InfeasibleMultiplier,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("exhaustive search refused: {0}")]
    LimitsExceeded(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
