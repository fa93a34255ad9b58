use thiserror::Error;

use crate::network::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text. The message carries the line/column reported by the parser.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("invalid network: {}", join_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown value `{value}` for variable `{variable}`")]
    UnknownValue { variable: String, value: String },

    #[error("variable index {0} out of range")]
    VariableIndex(usize),

    #[error("empty value set for variable `{0}`")]
    EmptyValueSet(String),

    #[error("assignment is not a total valid world: {0}")]
    InvalidAssignment(String),

    #[error("conditioning on a null event")]
    NullConditioning,

    #[error("invalid epistemic state: {0}")]
    InvalidState(String),

    #[error("explanandum literal on `{0}` is not among the observations")]
    NotObserved(String),

    #[error("explanandum contradicts the observation of `{0}`")]
    ContradictsObservation(String),

    #[error("`{source_var}` does not causally precede any of the sink variables")]
    NotAncestor { source_var: String },

    #[error("mechanism fragment is cyclic")]
    CyclicMechanism,

    #[error("edge {0} -> {1} is not an edge of the network")]
    UnknownEdge(String, String),

    #[error("conflicting conjuncts on `{0}`")]
    ConjunctConflict(String),

    #[error("explanation has zero prior probability in the contracted state")]
    ImpossibleExplanation,

    #[error("explanandum has zero probability in the contracted state")]
    ImpossibleExplanandum,

    #[error("candidates were scored against different explananda")]
    MismatchedExplanandum,

    #[error("edge {0} - {1} is not in the belief graph")]
    NotInBeliefGraph(String, String),

    #[error("unknown external cause `{0}`")]
    UnknownExternal(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid case: {0}")]
    InvalidCase(String),

    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Inference,
    UnknownScenario,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NullConditioning
            | Error::ImpossibleExplanation
            | Error::ImpossibleExplanandum => ErrorKind::Inference,
            Error::UnknownScenario(_) => ErrorKind::UnknownScenario,
            _ => ErrorKind::Validation,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Validation => 2,
            ErrorKind::Inference => 3,
            ErrorKind::UnknownScenario => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
