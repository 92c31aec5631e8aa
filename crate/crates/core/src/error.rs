use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty class: color {color} is absent from column {column}")]
    EmptyClass { column: usize, color: usize },

    #[error("infeasible block: color {color} in column {column} has degree {degree} < {delta}")]
    Infeasible {
        column: usize,
        color: usize,
        degree: u32,
        delta: u32,
    },

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
