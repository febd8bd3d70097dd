use thiserror::Error;

/// Errors shared across the algebraic kernel, the numeric evaluator and the
/// expression parser.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular (ad - bc = 0)")]
    SingularMatrix,
    #[error("evaluation point is a pole of the rational function")]
    PoleAtEvaluationPoint,
    #[error("letter {0} is not in the supported alphabet")]
    UnsupportedLetter(String),
    #[error("f disagrees with the bracket at index {0}")]
    InvalidF(usize),
    #[error("input word must be non-constant")]
    EmptyWordInput,
    #[error("gamma maps an endpoint of integration to infinity")]
    GammaMapsEndpointToInfinity,
    #[error("word is not admissible for evaluation")]
    NotAdmissible,
    #[error("an integrand pole lies on the integration path [0,1]")]
    PoleOnPath,
    #[error("requested tolerance not reached (best error estimate {0:e})")]
    ToleranceNotReached(f64),
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
