use thiserror::Error;

use crate::field::FieldError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // circuit structure
    #[error("node {node} refers to itself or a later node ({operand})")]
    CyclicReference { node: usize, operand: usize },
    #[error("node {node} refers to missing node {index}")]
    DanglingIndex { node: usize, index: usize },
    #[error("output {output} refers to missing node {index}")]
    DanglingOutput { output: usize, index: usize },
    #[error("node {node} uses parameter `{id}` which has no table entry")]
    UnknownParameter { node: usize, id: String },
    #[error("node {node} has an inconsistent scalar flag")]
    InconsistentScalarFlag { node: usize },
    #[error("node {node} is an input `{name}` that is undeclared or declared twice")]
    BadInputNode { node: usize, name: String },
    #[error("node {node} repeats parameter `{id}`")]
    DuplicateParameter { node: usize, id: String },
    #[error("parameter `{0}` has a table entry but no node")]
    OrphanParameter(String),
    #[error("input list and input nodes disagree on `{0}`")]
    InputListMismatch(String),
    #[error("parameter `{id}` mentions undeclared parameter variable `{var}`")]
    UndeclaredParamVar { id: String, var: String },
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },

    // evaluation
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error(transparent)]
    Field(#[from] FieldError),

    // polynomial ring
    #[error("node {node} expands to {terms} terms, above the budget")]
    BudgetExceeded { node: usize, terms: usize },
    #[error("circuit has {outputs} outputs; expansion needs exactly one")]
    UnassignedSemantics { outputs: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix has no rows or columns")]
    EmptyMatrix,
    #[error("matrix rows have inconsistent lengths ({expected} vs {got})")]
    RaggedMatrix { expected: usize, got: usize },
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("polynomial has no positive degree in `{0}`")]
    NonPositiveDegree(String),
    #[error("polynomial parse error at byte {pos}: {message}")]
    PolyParse { pos: usize, message: String },

    // passes and certificates
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("circuit does not compute the general solution: {0}")]
    NotAGeneralSolution(String),
    #[error("parameter `{parameter}` is not invariant: {witness}")]
    NotInvariant { parameter: String, witness: String },
    #[error("sampling produced no pair of distinct equivalent parameter points")]
    NoEquivalentPairsFound,
    #[error("{what} = {value} outside [{min}, {max}]")]
    OutOfRange { what: &'static str, value: u64, min: u64, max: u64 },
    #[error("empty point set")]
    EmptyPointSet,
    #[error("polynomial is not monic in `{0}`")]
    NotMonic(String),
    #[error("points are not pairwise distinct")]
    DuplicatePoints,
    #[error("expected {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("circuit does not compute R")]
    NotR,
    #[error("exhaustive search stopped after {explored} candidates")]
    SearchBudgetExceeded { explored: u64 },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CyclicReference { .. } => "CyclicReference",
            Error::DanglingIndex { .. } | Error::DanglingOutput { .. } => "DanglingIndex",
            Error::UnknownParameter { .. } => "UnknownParameter",
            Error::InconsistentScalarFlag { .. } => "InconsistentScalarFlag",
            Error::BadInputNode { .. } => "BadInputNode",
            Error::DuplicateParameter { .. } => "DuplicateParameter",
            Error::OrphanParameter(_) => "OrphanParameter",
            Error::InputListMismatch(_) => "InputListMismatch",
            Error::UndeclaredParamVar { .. } => "UndeclaredParamVar",
            Error::Syntax { .. } => "SyntaxError",
            Error::MissingAssignment(_) => "MissingAssignment",
            Error::Field(FieldError::ModulusNotPrime(_)) => "ModulusNotPrime",
            Error::Field(FieldError::DenominatorVanishes { .. }) => "DenominatorVanishes",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::UnassignedSemantics { .. } => "UnassignedSemantics",
            Error::ExponentOverflow => "ExponentOverflow",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NonSquare { .. } => "NonSquare",
            Error::EmptyMatrix => "EmptyMatrix",
            Error::RaggedMatrix { .. } => "RaggedMatrix",
            Error::NotDivisible => "NotDivisible",
            Error::NonPositiveDegree(_) => "NonPositiveDegree",
            Error::PolyParse { .. } => "SyntaxError",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::NotAGeneralSolution(_) => "NotAGeneralSolution",
            Error::NotInvariant { .. } => "NotInvariant",
            Error::NoEquivalentPairsFound => "NoEquivalentPairsFound",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::EmptyPointSet => "EmptyPointSet",
            Error::NotMonic(_) => "NotMonic",
            Error::DuplicatePoints => "DuplicatePoints",
            Error::WrongPointCount { .. } => "WrongPointCount",
            Error::NotR => "NotR",
            Error::SearchBudgetExceeded { .. } => "SearchBudgetExceeded",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::SearchBudgetExceeded { .. })
    }
}
