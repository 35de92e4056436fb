use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} exceeds cap: required {required}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("process finished: no open vertices remain")]
    ProcessFinished,

    #[error("quadrature did not converge on [{a}, {b}]: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature {
        a: f64,
        b: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("constant search failed for r={r}: best worst-margin {best_margin:e} at alpha={alpha}, beta={beta}")]
    ConstantSearch {
        r: usize,
        alpha: f64,
        beta: f64,
        best_margin: f64,
    },

    #[error("search budget exhausted after {nodes} nodes (partial count {partial})")]
    Budget { nodes: u64, partial: u64 },

    #[error("run log lacks required data: {0}")]
    MissingSnapshots(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
