use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("{0} is not an element of the dyadic set {{1, 2, 4, ...}}")]
    InvalidIndex(u64),
    #[error("invalid interval [{a}, {b}]: need a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("operation requires a {expected} domain")]
    WrongDomain { expected: &'static str },
    #[error("fields live on different domains")]
    DomainMismatch,
    #[error("oracle limited to n <= {limit}, got n = {n}")]
    SizeLimit { n: usize, limit: usize },
    #[error("mass density drifted by {drift:e} (tolerance {tolerance:e})")]
    ConservationViolation { drift: f64, tolerance: f64 },
    #[error("solution blew up at t = {time}")]
    BlowUp { time: f64 },
    #[error("initial data not decayed at the box edges: |u| = {edge:e}")]
    EdgeDecay { edge: f64 },
    #[error("time {t} outside the available range [{lo}, {hi}]")]
    Range { t: f64, lo: f64, hi: f64 },
    #[error("window support [{lo}, {hi}] exceeds trajectory span [{start}, {end}]")]
    Extension { lo: f64, hi: f64, start: f64, end: f64 },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("invalid field dump: {0}")]
    Dump(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
