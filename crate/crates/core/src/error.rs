use std::io;

use crate::operator::OperatorFamily;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    Range {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("grid with {nodes} nodes is too small for {family} (needs at least {required})")]
    GridTooSmall {
        family: OperatorFamily,
        nodes: usize,
        required: usize,
    },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("{family} does not support {capability}")]
    Unsupported {
        family: OperatorFamily,
        capability: &'static str,
    },

    #[error("pinned weights are inconsistent with the order conditions")]
    Infeasible,

    #[error("singular linear system")]
    Singular,

    #[error("metrics were computed with {metrics} but the quadrature uses {quadrature}; enable the mixed override to allow this")]
    OperatorMismatch {
        metrics: OperatorFamily,
        quadrature: OperatorFamily,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
