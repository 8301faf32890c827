use super::parse::QueryName;
use super::{LangError, Span};
use crate::gates::{INDEXED_FAMILIES, PLAIN_GATES};
use crate::states::TruthValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Query(QueryName),
    Mix,
    Kron,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    /// Components of a basis ket, first site first.
    Ket(Vec<TruthValue>),
    /// Gate base name, e.g. `SQNOT` in `SQNOT[1/2]`.
    Gate(String),
    /// Decimal (`0.25`) or fraction (`1/2`); the lexeme is kept on the token.
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

fn ket_alphabet(d: usize) -> Vec<String> {
    TruthValue::all(d).iter().map(ToString::to_string).collect()
}

fn lex_ket(input: &str, start: usize, d: usize) -> Result<(TokenKind, usize), LangError> {
    let body_start = start + 1;
    let close = input[body_start..]
        .find('>')
        .map(|i| body_start + i)
        .ok_or_else(|| LangError::Lex {
            offset: start,
            found: "|".into(),
            reason: "unterminated ket, expected `>`".into(),
        })?;
    let alphabet = ket_alphabet(d);
    let mut components = Vec::new();
    let body = &input[body_start..close];
    let mut offset = body_start;
    for piece in body.split(' ') {
        if !piece.is_empty() {
            match alphabet.iter().position(|a| a == piece) {
                Some(index) => components.push(TruthValue::new(index, d).expect("in alphabet")),
                None => {
                    return Err(LangError::Lex {
                        offset,
                        found: piece.to_string(),
                        reason: format!(
                            "ket component not in {{{}}} for d={d}",
                            alphabet.join(", ")
                        ),
                    })
                }
            }
        }
        offset += piece.len() + 1;
    }
    if components.is_empty() {
        return Err(LangError::Lex {
            offset: start,
            found: input[start..=close].to_string(),
            reason: "empty ket".into(),
        });
    }
    Ok((TokenKind::Ket(components), close + 1))
}

fn lex_number(input: &str, start: usize) -> Result<(TokenKind, usize), LangError> {
    let bytes = input.as_bytes();
    let digits_from = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let int_end = digits_from(start);
    let bad = |end: usize, reason: &str| LangError::Lex {
        offset: start,
        found: input[start..end].to_string(),
        reason: reason.to_string(),
    };
    match bytes.get(int_end) {
        Some(b'.') | Some(b'/') => {
            let frac_end = digits_from(int_end + 1);
            if frac_end == int_end + 1 {
                return Err(bad(frac_end, "expected digits"));
            }
            let lexeme = &input[start..frac_end];
            let value = if bytes[int_end] == b'.' {
                lexeme
                    .parse::<f64>()
                    .map_err(|_| bad(frac_end, "bad number"))?
            } else {
                let num: f64 = input[start..int_end]
                    .parse()
                    .map_err(|_| bad(frac_end, "bad number"))?;
                let den: f64 = input[int_end + 1..frac_end]
                    .parse()
                    .map_err(|_| bad(frac_end, "bad number"))?;
                if den == 0.0 {
                    return Err(bad(frac_end, "zero denominator"));
                }
                num / den
            };
            Ok((TokenKind::Number(value), frac_end))
        }
        _ => {
            let value = input[start..int_end]
                .parse::<f64>()
                .map_err(|_| bad(int_end, "bad number"))?;
            Ok((TokenKind::Number(value), int_end))
        }
    }
}

fn classify_ident(word: &str) -> Option<TokenKind> {
    if let Some(q) = QueryName::from_name(word) {
        return Some(TokenKind::Keyword(Keyword::Query(q)));
    }
    match word {
        "mix" => Some(TokenKind::Keyword(Keyword::Mix)),
        "kron" => Some(TokenKind::Keyword(Keyword::Kron)),
        _ if INDEXED_FAMILIES.contains(&word) || PLAIN_GATES.contains(&word) => {
            Some(TokenKind::Gate(word.to_string()))
        }
        _ => None,
    }
}

/// Splits `input` into tokens; kets are validated against the local
/// dimension `d`.
pub fn tokenize(input: &str, d: usize) -> Result<Vec<Token>, LangError> {
    let mut tokens = Vec::new();
    let mut pos = 0;
    while let Some(ch) = input[pos..].chars().next() {
        if ch.is_whitespace() {
            pos += ch.len_utf8();
            continue;
        }
        let start = pos;
        let (kind, end) = match ch {
            '(' => (TokenKind::LParen, pos + 1),
            ')' => (TokenKind::RParen, pos + 1),
            '[' => (TokenKind::LBracket, pos + 1),
            ']' => (TokenKind::RBracket, pos + 1),
            ',' => (TokenKind::Comma, pos + 1),
            ':' => (TokenKind::Colon, pos + 1),
            '|' => lex_ket(input, pos, d)?,
            c if c.is_ascii_digit() => lex_number(input, pos)?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = input[pos..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(input.len() - pos);
                let word = &input[pos..pos + len];
                let kind = classify_ident(word).ok_or_else(|| LangError::Lex {
                    offset: pos,
                    found: word.to_string(),
                    reason: "unknown identifier".into(),
                })?;
                (kind, pos + len)
            }
            other => {
                return Err(LangError::Lex {
                    offset: pos,
                    found: other.to_string(),
                    reason: "unexpected character".into(),
                })
            }
        };
        tokens.push(Token {
            kind,
            lexeme: input[start..end].to_string(),
            span: Span::new(start, end),
        });
        pos = end;
    }
    Ok(tokens)
}
