use thiserror::Error;

/// Errors produced by panel construction, estimation, and generation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("panel construction failed: {0}")]
    Panel(String),

    #[error("instrument relevance failure: P({r}) = {p_r} is not above P({r_prime}) = {p_r_prime}")]
    Relevance {
        r: u32,
        r_prime: u32,
        p_r: f64,
        p_r_prime: f64,
    },

    #[error("collinear design columns: {0}")]
    Collinear(String),

    #[error("perfect separation: {0}")]
    PerfectSeparation(String),

    #[error("optimizer did not converge after {iterations} iterations (|grad| = {grad_norm:.3e})")]
    NoConvergence { iterations: usize, grad_norm: f64 },

    #[error("line search could not find a finite objective value")]
    NoFiniteStep,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
