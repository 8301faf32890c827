//! A small expression language over qutrit (or qubit) states.
//!
//! ```text
//! query  := QNAME "(" args ")"
//!           QNAME ∈ {prob, prob_true, probs, effprob, entropy, purity, bloch, classify}
//! state  := ket
//!         | "mix" "(" weight ":" state { "," weight ":" state } ")"
//!         | GNAME [ "[" tv "]" ] "(" state ")"
//!         | "kron" "(" state "," state ")"
//! ket    := "|" tv { " " tv } ">"
//! tv     := "0" | "1/2" | "1"        (local dimension 3, the default)
//!         | "0" | "1"                (local dimension 2)
//! ```
//!
//! `prob` takes a truth value and a state; every other query takes a single
//! state. A bare state is also accepted at top level and evaluates to its
//! density operator. Every node carries a (d, n) signature; mismatches are
//! rejected before evaluation.

mod eval;
mod parse;
mod token;

use std::fmt;

use thiserror::Error;

pub use eval::{eval, eval_state, evaluate, Value};
pub use parse::{parse, parse_str, Expr, Query, QueryName, Signature, StateExpr, StateKind};
pub use token::{tokenize, Keyword, Token, TokenKind};

/// Half-open byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LangError {
    #[error("lexical error at byte {offset}: unexpected `{found}`: {reason}")]
    Lex {
        offset: usize,
        found: String,
        reason: String,
    },

    #[error("syntax error at {span}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        span: Span,
        expected: Vec<String>,
        found: String,
    },

    #[error("unknown gate `{name}` at {span}; known gates: {}", .catalog.join(", "))]
    UnknownGate {
        span: Span,
        name: String,
        catalog: Vec<String>,
    },

    #[error("signature error at {span}: {message}")]
    Signature { span: Span, message: String },

    #[error("invalid mixture at {span}: weights must be nonnegative and sum to 1 (sum {sum})")]
    Weights { span: Span, sum: f64 },

    #[error("evaluation error at {span}: {source}")]
    Eval {
        span: Span,
        #[source]
        source: crate::Error,
    },
}

impl LangError {
    pub fn span(&self) -> Span {
        match self {
            Self::Lex { offset, found, .. } => Span::new(*offset, offset + found.len()),
            Self::Syntax { span, .. }
            | Self::UnknownGate { span, .. }
            | Self::Signature { span, .. }
            | Self::Weights { span, .. }
            | Self::Eval { span, .. } => *span,
        }
    }
}
