//! Whole-circuit operators: reversal, gate-set decomposition, rule-driven
//! rewriting, inlining of boxed subcircuits and hierarchical gate counting.
//!
//! All operators are pure functions from circuits to circuits.

mod count;
mod decompose;
mod inline;
mod reverse;
mod rules;

pub use count::{gate_count, GateCountReport, GateKey};
pub use decompose::{decompose, max_primitive_width, GateBase};
pub use inline::inline_all;
pub use reverse::{inverse_name, reverse_circuit};
pub use rules::{transform, GateShape, RuleContext, TransformRule};

pub(crate) use inline::expand_call;
pub(crate) use reverse::{reverse_gates, reversed_subroutines};

use thiserror::Error;

use crate::ir::{IrError, Violation};

/// How a named unitary is inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InverseRule {
    SelfInverse,
    /// The inverse is another registered gate.
    Named(String),
    /// Same gate with every parameter negated, e.g. `exp(-iZt)`.
    ParamNegate,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("gate {index} ({gate}) is not reversible")]
    Irreversible { index: usize, gate: String },
    #[error("gate \"{0}\" has no registered inverse")]
    NoInverse(String),
    #[error("no decomposition rule for {0}")]
    NoRule(String),
    #[error("cannot push controls onto non-controllable gate {0}")]
    NotControllable(String),
    #[error("unknown subroutine \"{0}\"")]
    UnknownSubroutine(String),
    #[error("call to \"{0}\" does not match its interface")]
    CallInterface(String),
    #[error("transformed circuit is invalid: {}", first_violation(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Ir(#[from] IrError),
}

fn first_violation(v: &[Violation]) -> String {
    match v.first() {
        Some(x) if v.len() > 1 => format!("{x} (and {} more)", v.len() - 1),
        Some(x) => x.to_string(),
        None => String::new(),
    }
}

/// Short human-readable gate description for error messages.
pub(crate) fn describe(g: &crate::ir::Gate) -> String {
    use crate::ir::Gate;
    match g {
        Gate::Unitary { name, .. } => format!("\"{name}\""),
        Gate::Init { .. } => "Init".into(),
        Gate::TermAssert { .. } => "TermAssert".into(),
        Gate::Discard { .. } => "Discard".into(),
        Gate::Measure { .. } => "Measure".into(),
        Gate::Classical { op, .. } => format!("classical \"{}\"", op.name()),
        Gate::Call { name, .. } => format!("call \"{name}\""),
        Gate::Comment { .. } => "comment".into(),
    }
}
