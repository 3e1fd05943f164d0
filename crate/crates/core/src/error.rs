use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("edge {a}-{b} in layer `{layer}` listed with weights {first} and {second}")]
    ContradictoryWeight {
        layer: String,
        a: String,
        b: String,
        first: f64,
        second: f64,
    },

    #[error("invalid edge {a}-{b} in layer `{layer}`: {reason}")]
    InvalidEdge {
        layer: String,
        a: String,
        b: String,
        reason: &'static str,
    },

    #[error("duplicate layer name `{0}`")]
    DuplicateLayer(String),

    #[error("unknown layer `{0}`")]
    UnknownLayer(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("operation needs {expected} layers, network has {found}")]
    LayerCount {
        expected: &'static str,
        found: usize,
    },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("nodes not recorded in run output: {}", .0.join(", "))]
    NotRecorded(Vec<String>),

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix must be square with at least 2 rows, got {rows}x{cols}")]
    MatrixShape { rows: usize, cols: usize },

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),

    #[error("statistic undefined: {0}")]
    Undefined(&'static str),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
