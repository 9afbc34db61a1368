use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{LineCol, SourceSpan};
use super::parse::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokKind {
    Ident(String),
    Int(i64),
    Kw(Kw),
    /// A Python keyword outside the supported grammar (`while`, `lambda`,
    /// `for`, ...). Lexed so it can never be mistaken for an identifier;
    /// the parser rejects it wherever it shows up.
    Reserved(&'static str),
    Assign,
    EqEq,
    NotEq,
    Plus,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Semi,
    Newline,
    Indent,
    Dedent,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kw {
    Print,
    Return,
    Def,
    True,
    False,
    Not,
    And,
    Or,
    If,
    Else,
    Is,
    Eval,
    Input,
}

/// Python keywords we must recognize but do not support. Anything here is a
/// syntax error when used; crucially `x = while` is a rejected keyword, not
/// an identifier read.
const RESERVED: &[&str] = &[
    "while", "for", "lambda", "class", "import", "from", "in", "None", "elif", "try", "except",
    "finally", "raise", "with", "as", "pass", "break", "continue", "global", "nonlocal", "del",
    "yield", "assert",
];

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokKind,
    pub span: SourceSpan,
}

pub(crate) fn describe(kind: &TokKind) -> String {
    use alloc::format;
    match kind {
        TokKind::Ident(s) => format!("identifier `{s}`"),
        TokKind::Int(n) => format!("integer `{n}`"),
        TokKind::Kw(k) => format!("keyword `{}`", kw_str(*k)),
        TokKind::Reserved(s) => format!("unsupported keyword `{s}`"),
        TokKind::Assign => "`=`".into(),
        TokKind::EqEq => "`==`".into(),
        TokKind::NotEq => "`!=`".into(),
        TokKind::Plus => "`+`".into(),
        TokKind::Minus => "`-`".into(),
        TokKind::LParen => "`(`".into(),
        TokKind::RParen => "`)`".into(),
        TokKind::LBracket => "`[`".into(),
        TokKind::RBracket => "`]`".into(),
        TokKind::LBrace => "`{`".into(),
        TokKind::RBrace => "`}`".into(),
        TokKind::Colon => "`:`".into(),
        TokKind::Comma => "`,`".into(),
        TokKind::Semi => "`;`".into(),
        TokKind::Newline => "end of line".into(),
        TokKind::Indent => "indent".into(),
        TokKind::Dedent => "dedent".into(),
        TokKind::Eof => "end of input".into(),
    }
}

fn kw_str(k: Kw) -> &'static str {
    match k {
        Kw::Print => "print",
        Kw::Return => "return",
        Kw::Def => "def",
        Kw::True => "True",
        Kw::False => "False",
        Kw::Not => "not",
        Kw::And => "and",
        Kw::Or => "or",
        Kw::If => "if",
        Kw::Else => "else",
        Kw::Is => "is",
        Kw::Eval => "eval",
        Kw::Input => "input",
    }
}

fn keyword(word: &str) -> Option<TokKind> {
    let kw = match word {
        "print" => Kw::Print,
        "return" => Kw::Return,
        "def" => Kw::Def,
        "True" => Kw::True,
        "False" => Kw::False,
        "not" => Kw::Not,
        "and" => Kw::And,
        "or" => Kw::Or,
        "if" => Kw::If,
        "else" => Kw::Else,
        "is" => Kw::Is,
        "eval" => Kw::Eval,
        "input" => Kw::Input,
        _ => {
            return RESERVED
                .iter()
                .find(|r| **r == word)
                .map(|r| TokKind::Reserved(r));
        }
    };
    Some(TokKind::Kw(kw))
}

/// Tokenize one source file. Lines are logical statements; indentation is
/// tracked with a width stack and any consistent width is accepted. Comments
/// and blank lines are discarded.
pub(crate) fn lex(source: &str, file: u32) -> Result<Vec<Token>, SyntaxError> {
    let mut tokens = Vec::new();
    let mut indents: Vec<usize> = alloc::vec![0];

    for (line_idx, raw_line) in source.lines().enumerate() {
        let line_no = line_idx as u32 + 1;
        let indent_width = raw_line.len() - raw_line.trim_start_matches([' ', '\t']).len();
        let rest = &raw_line[indent_width..];
        if rest.is_empty() || rest.starts_with('#') {
            continue;
        }

        let here = |col: usize| LineCol { line: line_no, col: col as u32 + 1 };
        let span_at =
            |start: usize, end: usize| SourceSpan::new(file, here(start), here(end));

        let current = *indents.last().unwrap();
        if indent_width > current {
            indents.push(indent_width);
            tokens.push(Token { kind: TokKind::Indent, span: span_at(0, indent_width) });
        } else if indent_width < current {
            while *indents.last().unwrap() > indent_width {
                indents.pop();
                tokens.push(Token { kind: TokKind::Dedent, span: span_at(0, indent_width) });
            }
            if *indents.last().unwrap() != indent_width {
                return Err(SyntaxError::BadIndent { span: span_at(0, indent_width) });
            }
        }

        lex_line(rest, indent_width, line_no, file, &mut tokens)?;
        let end = raw_line.len();
        tokens.push(Token { kind: TokKind::Newline, span: span_at(end, end) });
    }

    let last_line = source.lines().count() as u32 + 1;
    let eof = SourceSpan::new(
        file,
        LineCol { line: last_line, col: 1 },
        LineCol { line: last_line, col: 1 },
    );
    while indents.len() > 1 {
        indents.pop();
        tokens.push(Token { kind: TokKind::Dedent, span: eof });
    }
    tokens.push(Token { kind: TokKind::Eof, span: eof });
    Ok(tokens)
}

fn lex_line(
    rest: &str,
    offset: usize,
    line_no: u32,
    file: u32,
    tokens: &mut Vec<Token>,
) -> Result<(), SyntaxError> {
    let bytes = rest.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = rest[i..].chars().next().unwrap();
        let start = offset + i;
        let span = |w: usize| {
            SourceSpan::new(
                file,
                LineCol { line: line_no, col: (start + 1) as u32 },
                LineCol { line: line_no, col: (start + w + 1) as u32 },
            )
        };
        let simple = |kind: TokKind, w: usize| Token { kind, span: span(w) };
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '#' => break,
            '(' => { tokens.push(simple(TokKind::LParen, 1)); i += 1; }
            ')' => { tokens.push(simple(TokKind::RParen, 1)); i += 1; }
            '[' => { tokens.push(simple(TokKind::LBracket, 1)); i += 1; }
            ']' => { tokens.push(simple(TokKind::RBracket, 1)); i += 1; }
            '{' => { tokens.push(simple(TokKind::LBrace, 1)); i += 1; }
            '}' => { tokens.push(simple(TokKind::RBrace, 1)); i += 1; }
            ':' => { tokens.push(simple(TokKind::Colon, 1)); i += 1; }
            ',' => { tokens.push(simple(TokKind::Comma, 1)); i += 1; }
            ';' => { tokens.push(simple(TokKind::Semi, 1)); i += 1; }
            '+' => { tokens.push(simple(TokKind::Plus, 1)); i += 1; }
            '-' => { tokens.push(simple(TokKind::Minus, 1)); i += 1; }
            '=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(simple(TokKind::EqEq, 2));
                    i += 2;
                } else {
                    tokens.push(simple(TokKind::Assign, 1));
                    i += 1;
                }
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(simple(TokKind::NotEq, 2));
                    i += 2;
                } else {
                    return Err(SyntaxError::BadChar { ch: '!', span: span(1) });
                }
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text = &rest[i..j];
                let value: i64 = text
                    .parse()
                    .map_err(|_| SyntaxError::IntTooLarge { span: span(j - i) })?;
                tokens.push(simple(TokKind::Int(value), j - i));
                i = j;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = &rest[i..j];
                let kind = keyword(word).unwrap_or_else(|| TokKind::Ident(word.into()));
                tokens.push(simple(kind, j - i));
                i = j;
            }
            other => {
                return Err(SyntaxError::BadChar { ch: other, span: span(other.len_utf8()) });
            }
        }
    }
    Ok(())
}
