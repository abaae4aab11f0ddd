use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("symbolic division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("no value bound for `{0}`")]
    Unbound(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
}
