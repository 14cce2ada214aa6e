use std::io;

use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("node index {index} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },

    #[error("graph is disconnected: node {first:?} cannot reach node {second:?}")]
    Disconnected { first: String, second: String },

    #[error("invalid box diameter {epsilon}: {reason}")]
    InvalidEpsilon { epsilon: u32, reason: String },

    #[error("covering does not partition the nodes: {0}")]
    Integrity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient box-size range: delta = {delta} yields {usable} usable values, need at least 4")]
    InsufficientRange { delta: u32, usable: usize },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("fit did not converge after {iterations} iterations (best grid start: d = {grid_d}, beta = {grid_beta}, nu = {grid_nu}, rss = {grid_rss})")]
    NonConvergence {
        iterations: usize,
        grid_d: f64,
        grid_beta: f64,
        grid_nu: f64,
        grid_rss: f64,
    },

    #[error("not enough degrees of freedom: n = {n}, k = {k}")]
    DegreesOfFreedom { n: usize, k: usize },

    #[error("cannot compare fits: {0}")]
    Comparison(String),

    #[error("invalid generator parameters: {0}")]
    Parameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
