use std::fmt;

use super::token::{tokenize, Keyword, Token, TokenKind};
use super::{LangError, Span};
use crate::gates::{catalog_names, gate_arity};
use crate::states::{space_dim, TruthValue};

const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryName {
    Prob,
    ProbTrue,
    Probs,
    EffProb,
    Entropy,
    Purity,
    Bloch,
    Classify,
}

impl QueryName {
    pub const ALL: [QueryName; 8] = [
        Self::Prob,
        Self::ProbTrue,
        Self::Probs,
        Self::EffProb,
        Self::Entropy,
        Self::Purity,
        Self::Bloch,
        Self::Classify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Prob => "prob",
            Self::ProbTrue => "prob_true",
            Self::Probs => "probs",
            Self::EffProb => "effprob",
            Self::Entropy => "entropy",
            Self::Purity => "purity",
            Self::Bloch => "bloch",
            Self::Classify => "classify",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == name)
    }

    /// Queries defined only on a single qutrit.
    fn qutrit_only(self) -> bool {
        matches!(self, Self::EffProb | Self::Bloch)
    }
}

impl fmt::Display for QueryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Local dimension and number of sites of a state expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub d: usize,
    pub n: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}, n={}", self.d, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Ket(Vec<TruthValue>),
    Mix(Vec<(f64, StateExpr)>),
    Gate { name: String, arg: Box<StateExpr> },
    Kron(Box<StateExpr>, Box<StateExpr>),
}

/// A state node. Equality ignores spans, so trees parsed from differently
/// formatted text compare equal.
#[derive(Debug, Clone)]
pub struct StateExpr {
    pub kind: StateKind,
    pub sig: Signature,
    pub span: Span,
}

impl PartialEq for StateExpr {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.kind == other.kind
    }
}

#[derive(Debug, Clone)]
pub struct Query {
    pub name: QueryName,
    /// Only `prob` carries a truth value.
    pub tv: Option<TruthValue>,
    pub arg: StateExpr,
    pub span: Span,
}

impl PartialEq for Query {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.tv == other.tv && self.arg == other.arg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Query(Query),
    State(StateExpr),
}

impl fmt::Display for StateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StateKind::Ket(components) => {
                f.write_str("|")?;
                for (i, tv) in components.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{tv}")?;
                }
                f.write_str(">")
            }
            StateKind::Mix(parts) => {
                f.write_str("mix(")?;
                for (i, (w, s)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{w}:{s}")?;
                }
                f.write_str(")")
            }
            StateKind::Gate { name, arg } => write!(f, "{name}({arg})"),
            StateKind::Kron(a, b) => write!(f, "kron({a}, {b})"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tv {
            Some(tv) => write!(f, "{}({tv}, {})", self.name, self.arg),
            None => write!(f, "{}({})", self.name, self.arg),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Query(q) => q.fmt(f),
            Expr::State(s) => s.fmt(f),
        }
    }
}

const STATE_START: [&str; 4] = ["a ket", "`mix`", "`kron`", "a gate name"];

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn eof_span(&self) -> Span {
        let end = self.tokens.last().map_or(0, |t| t.span.end);
        Span::new(end, end)
    }

    fn error(&self, expected: &[&str]) -> LangError {
        let (span, found) = match self.peek() {
            Some(t) => (t.span, format!("`{}`", t.lexeme)),
            None => (self.eof_span(), "end of input".to_string()),
        };
        LangError::Syntax {
            span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn expect(&mut self, kind: TokenKind, label: &str) -> Result<&'a Token, LangError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(&[label])),
        }
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let expr = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Keyword(Keyword::Query(_))) => Expr::Query(self.query()?),
            Some(
                TokenKind::Ket(_)
                | TokenKind::Gate(_)
                | TokenKind::Keyword(Keyword::Mix | Keyword::Kron),
            ) => Expr::State(self.state()?),
            _ => {
                let mut expected = vec!["a query name"];
                expected.extend(STATE_START);
                return Err(self.error(&expected));
            }
        };
        if self.peek().is_some() {
            return Err(self.error(&["end of input"]));
        }
        Ok(expr)
    }

    fn query(&mut self) -> Result<Query, LangError> {
        let head = &self.tokens[self.pos];
        let TokenKind::Keyword(Keyword::Query(name)) = head.kind else {
            unreachable!("caller checked for a query keyword")
        };
        self.pos += 1;
        self.expect(TokenKind::LParen, "`(`")?;
        let tv_token = if name == QueryName::Prob {
            let t = match self.peek() {
                Some(t) if matches!(t.kind, TokenKind::Number(_)) => t,
                _ => return Err(self.error(&["a truth value"])),
            };
            self.pos += 1;
            self.expect(TokenKind::Comma, "`,`")?;
            Some(t)
        } else {
            None
        };
        let arg = self.state()?;
        let close = self.expect(TokenKind::RParen, "`)`")?;
        let span = head.span.join(close.span);

        if name.qutrit_only() && arg.sig != (Signature { d: 3, n: 1 }) {
            return Err(LangError::Signature {
                span: arg.span,
                message: format!(
                    "{name} needs a single qutrit (d=3, n=1); argument is {}",
                    arg.sig
                ),
            });
        }
        let tv = match tv_token {
            Some(t) => Some(truth_value(t, arg.sig.d)?),
            None => None,
        };
        Ok(Query {
            name,
            tv,
            arg,
            span,
        })
    }

    fn state(&mut self) -> Result<StateExpr, LangError> {
        let Some(head) = self.peek() else {
            return Err(self.error(&STATE_START));
        };
        match &head.kind {
            TokenKind::Ket(components) => {
                self.pos += 1;
                let d = components[0].d();
                let n = components.len();
                check_size(d, n, head.span)?;
                Ok(StateExpr {
                    kind: StateKind::Ket(components.clone()),
                    sig: Signature { d, n },
                    span: head.span,
                })
            }
            TokenKind::Keyword(Keyword::Mix) => self.mix(head),
            TokenKind::Keyword(Keyword::Kron) => self.kron(head),
            TokenKind::Gate(base) => self.gate(head, base),
            _ => Err(self.error(&STATE_START)),
        }
    }

    fn mix(&mut self, head: &'a Token) -> Result<StateExpr, LangError> {
        self.pos += 1;
        self.expect(TokenKind::LParen, "`(`")?;
        let mut parts: Vec<(f64, StateExpr)> = Vec::new();
        loop {
            let weight = match self.peek() {
                Some(Token {
                    kind: TokenKind::Number(w),
                    ..
                }) => *w,
                _ => return Err(self.error(&["a weight"])),
            };
            self.pos += 1;
            self.expect(TokenKind::Colon, "`:`")?;
            let s = self.state()?;
            if let Some((_, first)) = parts.first() {
                if first.sig != s.sig {
                    return Err(LangError::Signature {
                        span: s.span,
                        message: format!(
                            "mixture components must share a signature: {} vs {}",
                            first.sig, s.sig
                        ),
                    });
                }
            }
            parts.push((weight, s));
            match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Comma) => self.pos += 1,
                Some(TokenKind::RParen) => break,
                _ => return Err(self.error(&["`,`", "`)`"])),
            }
        }
        let close = self.expect(TokenKind::RParen, "`)`")?;
        let span = head.span.join(close.span);
        let sum: f64 = parts.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(LangError::Weights { span, sum });
        }
        let sig = parts[0].1.sig;
        Ok(StateExpr {
            kind: StateKind::Mix(parts),
            sig,
            span,
        })
    }

    fn kron(&mut self, head: &'a Token) -> Result<StateExpr, LangError> {
        self.pos += 1;
        self.expect(TokenKind::LParen, "`(`")?;
        let a = self.state()?;
        self.expect(TokenKind::Comma, "`,`")?;
        let b = self.state()?;
        let close = self.expect(TokenKind::RParen, "`)`")?;
        let span = head.span.join(close.span);
        if a.sig.d != b.sig.d {
            return Err(LangError::Signature {
                span,
                message: format!(
                    "kron operands must share a local dimension: {} vs {}",
                    a.sig, b.sig
                ),
            });
        }
        let sig = Signature {
            d: a.sig.d,
            n: a.sig.n + b.sig.n,
        };
        check_size(sig.d, sig.n, span)?;
        Ok(StateExpr {
            kind: StateKind::Kron(Box::new(a), Box::new(b)),
            sig,
            span,
        })
    }

    fn gate(&mut self, head: &'a Token, base: &str) -> Result<StateExpr, LangError> {
        self.pos += 1;
        let mut name = base.to_string();
        let mut name_span = head.span;
        if let Some(Token {
            kind: TokenKind::LBracket,
            ..
        }) = self.peek()
        {
            self.pos += 1;
            let arg = match self.peek() {
                Some(t) if matches!(t.kind, TokenKind::Number(_)) => t,
                _ => return Err(self.error(&["a gate argument"])),
            };
            self.pos += 1;
            let close = self.expect(TokenKind::RBracket, "`]`")?;
            name = format!("{base}[{}]", arg.lexeme);
            name_span = head.span.join(close.span);
        }
        let arity = gate_arity(&name).map_err(|_| LangError::UnknownGate {
            span: name_span,
            name: name.clone(),
            catalog: catalog_names(),
        })?;
        self.expect(TokenKind::LParen, "`(`")?;
        let arg = self.state()?;
        let close = self.expect(TokenKind::RParen, "`)`")?;
        let span = head.span.join(close.span);
        let fits = arg.sig.d == arity.d && (arity.any_sites || arg.sig.n == 1);
        if !fits {
            let sites = if arity.any_sites {
                "any n".to_string()
            } else {
                "n=1".to_string()
            };
            return Err(LangError::Signature {
                span: arg.span,
                message: format!("{name} is d={}, {sites}; argument is {}", arity.d, arg.sig),
            });
        }
        let sig = arg.sig;
        Ok(StateExpr {
            kind: StateKind::Gate {
                name,
                arg: Box::new(arg),
            },
            sig,
            span,
        })
    }
}

fn truth_value(token: &Token, d: usize) -> Result<TruthValue, LangError> {
    let TokenKind::Number(x) = token.kind else {
        unreachable!("truth values are number tokens")
    };
    TruthValue::all(d)
        .into_iter()
        .find(|tv| (tv.value() - x).abs() < 1e-12)
        .ok_or_else(|| LangError::Signature {
            span: token.span,
            message: format!(
                "`{}` is not a truth value for d={d} (expected one of {})",
                token.lexeme,
                TruthValue::all(d)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        })
}

fn check_size(d: usize, n: usize, span: Span) -> Result<(), LangError> {
    space_dim(d, n)
        .map(|_| ())
        .map_err(|source| LangError::Eval { span, source })
}

/// Parses a token sequence produced by [`tokenize`].
pub fn parse(tokens: &[Token]) -> Result<Expr, LangError> {
    Parser { tokens, pos: 0 }.expr()
}

/// Tokenizes and parses `input` with local dimension `d`.
pub fn parse_str(input: &str, d: usize) -> Result<Expr, LangError> {
    parse(&tokenize(input, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3(i: usize) -> TruthValue {
        TruthValue::qutrit(i).unwrap()
    }

    #[test]
    fn query_over_gate() {
        let expr = parse_str("prob_true(H3(|0>))", 3).unwrap();
        let Expr::Query(q) = &expr else {
            panic!("{expr:?}")
        };
        assert_eq!(q.name, QueryName::ProbTrue);
        let StateKind::Gate { name, arg } = &q.arg.kind else {
            panic!()
        };
        assert_eq!(name, "H3");
        assert_eq!(arg.kind, StateKind::Ket(vec![q3(0)]));
        assert_eq!(q.arg.sig, Signature { d: 3, n: 1 });
    }

    #[test]
    fn prob_over_mixture() {
        let expr = parse_str("prob(1/2, mix(1/2:|0>, 1/2:|1>))", 3).unwrap();
        let Expr::Query(q) = &expr else { panic!() };
        assert_eq!(q.tv, Some(q3(1)));
        let StateKind::Mix(parts) = &q.arg.kind else {
            panic!()
        };
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].0, 0.5);
    }

    #[test]
    fn h3_on_two_sites_is_a_signature_error() {
        match parse_str("H3(|0 0>)", 3).unwrap_err() {
            LangError::Signature { span, message } => {
                assert_eq!(span, Span::new(3, 8));
                assert!(message.contains("H3 is d=3, n=1"), "{message}");
                assert!(message.contains("n=2"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_list_expected_tokens() {
        match parse_str("probs(|0>", 3).unwrap_err() {
            LangError::Syntax {
                expected, found, ..
            } => {
                assert_eq!(expected, vec!["`)`"]);
                assert_eq!(found, "end of input");
            }
            other => panic!("{other:?}"),
        }
        match parse_str("probs(|0>) |1>", 3).unwrap_err() {
            LangError::Syntax { span, expected, .. } => {
                assert_eq!(span, Span::new(11, 14));
                assert_eq!(expected, vec!["end of input"]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_str("", 3), Err(LangError::Syntax { .. })));
        assert!(matches!(
            parse_str("prob(|0>)", 3),
            Err(LangError::Syntax { .. })
        ));
        assert!(matches!(
            parse_str("mix(|0>)", 3),
            Err(LangError::Syntax { .. })
        ));
    }

    #[test]
    fn unknown_gate_lists_catalog() {
        match parse_str("NOTR(|0>)", 3).unwrap_err() {
            LangError::UnknownGate { name, catalog, .. } => {
                assert_eq!(name, "NOTR");
                assert!(catalog.contains(&"SQNOT[1/2]".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_str("SQI[0.7](|0>)", 3),
            Err(LangError::UnknownGate { .. })
        ));
    }

    #[test]
    fn signature_rules() {
        assert!(parse_str("NOT[1/2](|1>)", 3).is_ok());
        assert!(parse_str("H(|0 1>)", 2).is_ok());
        assert!(parse_str("NOTR[2](|1>)", 2).is_ok());
        assert!(parse_str("NOTR[3](|1>)", 3).is_ok());
        assert!(matches!(
            parse_str("H(|0>)", 3),
            Err(LangError::Signature { .. })
        ));
        assert!(matches!(
            parse_str("H3(|0>)", 2),
            Err(LangError::Signature { .. })
        ));
        assert!(matches!(
            parse_str("effprob(kron(|0>, |1>))", 3),
            Err(LangError::Signature { .. })
        ));
        assert!(matches!(
            parse_str("mix(0.5:|0>, 0.5:|0 1>)", 3),
            Err(LangError::Signature { .. })
        ));
        assert!(matches!(
            parse_str("prob(1/2, |0>)", 2),
            Err(LangError::Signature { .. })
        ));
        let kron = parse_str("kron(|0>, kron(|1/2>, |1>))", 3).unwrap();
        let Expr::State(s) = kron else { panic!() };
        assert_eq!(s.sig, Signature { d: 3, n: 3 });
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(matches!(
            parse_str("mix(0.5:|0>, 0.4:|1>)", 3),
            Err(LangError::Weights { .. })
        ));
        assert!(parse_str("mix(1/3:|0>, 1/3:|1/2>, 1/3:|1>)", 3).is_ok());
    }

    #[test]
    fn oversized_registers_are_rejected() {
        let ket = format!("|{}>", ["0"; 9].join(" "));
        assert!(parse_str(&ket, 3).is_err());
        assert!(parse_str(&format!("|{}>", ["0"; 7].join(" ")), 3).is_ok());
    }

    #[test]
    fn pretty_print_reparses_to_same_tree() {
        for text in [
            "prob_true( SQNOT[1/2]( H3(|0>) ) )",
            "prob(1,mix(0.25:|0>,0.75:NOT[0](|1>)))",
            "kron(|0 1/2>,SQI[1](|1>))",
            "bloch(mix(1/3:|0>, 1/3:|1/2>, 1/3:|1>))",
            "NOTR[3](|1/2>)",
        ] {
            let first = parse_str(text, 3).unwrap();
            let printed = first.to_string();
            assert_eq!(parse_str(&printed, 3).unwrap(), first, "{printed}");
        }
    }
}
