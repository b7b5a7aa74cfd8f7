use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),

    #[error("universe file line {line}: {message}")]
    UniverseSyntax { line: usize, message: String },

    #[error("full tuple space of {size} tuples exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u64 },

    #[error("attribute `{0}` is not declared in the universe")]
    UnknownAttribute(String),

    #[error("value `{value}` is not in the domain of attribute `{attribute}`")]
    ValueOutOfDomain { attribute: String, value: String },

    #[error("relation is not valid over this universe: {0}")]
    InvalidRelation(String),

    #[error("syntax error at column {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("column {position}: operators `{first}` and `{second}` must be parenthesized against each other")]
    MixedOperators {
        position: usize,
        first: &'static str,
        second: &'static str,
    },

    #[error("variable `{0}` is unbound")]
    UnboundVariable(String),

    #[error("enumeration budget exceeded: {required} items needed, limit {limit}")]
    BudgetExceeded { required: u128, limit: u128 },

    #[error("evaluation failed under {assignment}: {source}")]
    Evaluation {
        assignment: String,
        #[source]
        source: Box<Error>,
    },

    #[error("symbol `{0}` has no interpretation in an abstract model")]
    UnsupportedSymbol(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model file line {line}: {message}")]
    ModelSyntax { line: usize, message: String },

    #[error("search budget exhausted; largest size fully excluded: {}", largest_excluded.map_or("none".to_string(), |n| n.to_string()))]
    SearchBudgetExhausted { largest_excluded: Option<usize> },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
