use alloc::string::String;
use alloc::vec::Vec;

use crate::model::Violation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid preference specification: {}", render_violations(.0))]
    InvalidSpec(Vec<Violation>),

    #[error("outcome does not match the specification's variables: {0}")]
    OutcomeMismatch(String),

    #[error("malformed outcome `{0}`: expected comma-separated var=value pairs")]
    MalformedOutcome(String),

    #[error("outcome is missing variable `{0}`")]
    IncompleteOutcome(String),

    #[error("variable `{0}` is not defined in the preference specification")]
    UndefinedVariable(String),

    #[error("value `{value}` is not in the domain of variable `{variable}`")]
    UndefinedValue { variable: String, value: String },

    #[error("{outcomes} outcomes exceed the explicit engine's limit of {limit}")]
    TooLarge { outcomes: u128, limit: u128 },

    #[error("the two specifications do not declare identical variables and domains")]
    VariableMismatch,

    #[error(
        "decision diagram node budget of {budget} exceeded; \
         retry with the explicit engine or an external SMV checker"
    )]
    NodeBudgetExceeded { budget: usize },

    #[error("decision diagram handles belong to different managers")]
    ManagerMismatch,

    #[error("proof shape does not match the query: {0}")]
    ShapeMismatch(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

fn render_violations(violations: &[Violation]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, v) in violations.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        let _ = write!(out, "{v}");
    }
    out
}
