use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty input")]
    EmptyInput,
    #[error("alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("illegal pruning relation: {0}")]
    IllegalPrune(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("automaton has {states} states, oracle limit is {cap}")]
    TooLarge { states: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
