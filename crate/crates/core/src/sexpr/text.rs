//! Textual form of the encoding: parenthesized, whitespace-separated.
//! Epsilon is spelled `eps`, holes `#0`, `#1`, ..., and an open spine tail
//! `...`. Identifiers that collide with a reserved spelling are written
//! between pipes (`|eps|`).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

use super::{Atom, Head, OpAtom, SExpr};

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Epsilon => f.write_str("eps"),
            SExpr::Atom(a) => write!(f, "{a}"),
            SExpr::App(head, children) => {
                write!(f, "({}", head.name())?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Spellings that a plain identifier is not allowed to use unescaped.
fn is_reserved_ident(s: &str) -> bool {
    matches!(s, "eps" | "evalinput" | "True" | "False" | "is")
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Bool(true) => f.write_str("True"),
            Atom::Bool(false) => f.write_str("False"),
            Atom::EvalInput => f.write_str("evalinput"),
            Atom::Op(OpAtom::Eq) => f.write_str("=="),
            Atom::Op(OpAtom::NotEq) => f.write_str("!="),
            Atom::Op(OpAtom::Is) => f.write_str("is"),
            Atom::Hole(k) => write!(f, "#{k}"),
            Atom::Ellipsis => f.write_str("..."),
            Atom::Ident(id) => {
                if is_reserved_ident(id) {
                    write!(f, "|{id}|")
                } else {
                    f.write_str(id)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SExprReadError {
    #[error("unknown head symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("bad token `{0}`")]
    BadToken(String),
    #[error("empty input")]
    Empty,
    #[error("trailing input after term")]
    TrailingInput,
    #[error("head symbol `{0}` used as an atom")]
    HeadAsAtom(String),
}

/// Read one term. Arities are not enforced here so that incomplete
/// candidate bodies (e.g. `(add #0)`) can be written down and fed to the
/// pruning checks; unknown head symbols are rejected.
pub fn parse_sexpr(text: &str) -> Result<SExpr, SExprReadError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let term = parse_term(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(SExprReadError::TrailingInput);
    }
    Ok(term)
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Quoted(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, SExprReadError> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            '(' => toks.push(Tok::Open),
            ')' => toks.push(Tok::Close),
            '|' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '|')) => break,
                        Some((_, c)) => s.push(c),
                        None => return Err(SExprReadError::Unbalanced),
                    }
                }
                toks.push(Tok::Quoted(s));
            }
            c if c.is_whitespace() => {}
            _ => {
                let start = i;
                let mut end = i + c.len_utf8();
                while let Some(&(j, c2)) = chars.peek() {
                    if c2.is_whitespace() || c2 == '(' || c2 == ')' || c2 == '|' {
                        break;
                    }
                    end = j + c2.len_utf8();
                    chars.next();
                }
                toks.push(Tok::Word(text[start..end].into()));
            }
        }
    }
    Ok(toks)
}

fn parse_term(tokens: &[Tok], pos: &mut usize) -> Result<SExpr, SExprReadError> {
    match tokens.get(*pos) {
        None => Err(SExprReadError::Empty),
        Some(Tok::Close) => Err(SExprReadError::Unbalanced),
        Some(Tok::Quoted(s)) => {
            *pos += 1;
            Ok(SExpr::Atom(Atom::Ident(s.clone())))
        }
        Some(Tok::Word(w)) => {
            *pos += 1;
            atom_of(w).map(SExpr::Atom).or_else(|e| {
                if w == "eps" {
                    Ok(SExpr::Epsilon)
                } else {
                    Err(e)
                }
            })
        }
        Some(Tok::Open) => {
            *pos += 1;
            let head = match tokens.get(*pos) {
                Some(Tok::Word(w)) => Head::from_name(w)
                    .ok_or_else(|| SExprReadError::UnknownSymbol(w.clone()))?,
                Some(_) => return Err(SExprReadError::BadToken("(".into())),
                None => return Err(SExprReadError::Unbalanced),
            };
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Tok::Close) => {
                        *pos += 1;
                        return Ok(SExpr::App(head, children));
                    }
                    Some(_) => children.push(parse_term(tokens, pos)?),
                    None => return Err(SExprReadError::Unbalanced),
                }
            }
        }
    }
}

fn atom_of(word: &str) -> Result<Atom, SExprReadError> {
    match word {
        "eps" => return Err(SExprReadError::BadToken("eps".into())),
        "..." => return Ok(Atom::Ellipsis),
        "True" => return Ok(Atom::Bool(true)),
        "False" => return Ok(Atom::Bool(false)),
        "evalinput" => return Ok(Atom::EvalInput),
        "==" => return Ok(Atom::Op(OpAtom::Eq)),
        "!=" => return Ok(Atom::Op(OpAtom::NotEq)),
        "is" => return Ok(Atom::Op(OpAtom::Is)),
        _ => {}
    }
    if let Some(rest) = word.strip_prefix('#') {
        return rest
            .parse::<u32>()
            .map(Atom::Hole)
            .map_err(|_| SExprReadError::BadToken(word.into()));
    }
    if word.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-') {
        return word
            .parse::<i64>()
            .map(Atom::Int)
            .map_err(|_| SExprReadError::BadToken(word.into()));
    }
    if is_ident(word) {
        return Ok(Atom::Ident(word.into()));
    }
    Err(SExprReadError::BadToken(word.into()))
}

fn is_ident(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_expected_spelling() {
        let s = SExpr::app(
            Head::StatementList,
            alloc::vec![
                SExpr::app(
                    Head::Assign,
                    alloc::vec![SExpr::ident("x"), SExpr::int(1)]
                ),
                SExpr::Epsilon,
            ],
        );
        assert_eq!(alloc::format!("{s}"), "(StatementList (assign x 1) eps)");
    }

    #[test]
    fn read_back_is_inverse() {
        let texts = [
            "(add 1 2)",
            "(StatementList (print (add x y)) eps)",
            "(add #0 #1)",
            "(compare #0 #1 #2)",
            "(compare a == b)",
            "(StatementList (assign x #0) ...)",
            "(assign |eps| 5)",
        ];
        for t in texts {
            let parsed = parse_sexpr(t).unwrap();
            assert_eq!(alloc::format!("{parsed}"), *t);
        }
    }

    #[test]
    fn unknown_head_rejected() {
        assert_eq!(
            parse_sexpr("(frobnicate 1 2)"),
            Err(SExprReadError::UnknownSymbol("frobnicate".into()))
        );
    }

    #[test]
    fn arity_not_enforced_at_read_time() {
        // incomplete bodies must be expressible for the pruning checks
        let s = parse_sexpr("(add #0)").unwrap();
        assert!(matches!(&s, SExpr::App(Head::Add, c) if c.len() == 1));
    }
}
