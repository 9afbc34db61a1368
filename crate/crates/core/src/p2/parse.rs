use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use super::ast::{Expr, ExprKind, Program, SourceSpan, Stmt, StmtKind, Target, TargetKind};
use super::lex::{self, describe, Kw, TokKind, Token};

/// Parse failure with the source position and what was expected there.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SyntaxError {
    #[error("{span}: expected {expected}, found {found}")]
    Unexpected { expected: String, found: String, span: SourceSpan },
    #[error("{span}: unsupported character `{ch}`")]
    BadChar { ch: char, span: SourceSpan },
    #[error("{span}: integer literal out of range")]
    IntTooLarge { span: SourceSpan },
    #[error("{span}: unindent does not match any outer block")]
    BadIndent { span: SourceSpan },
    #[error("{span}: cannot assign to this expression (target must be a name or subscription)")]
    BadTarget { span: SourceSpan },
    #[error("{span}: nested function definitions are not supported")]
    NestedDef { span: SourceSpan },
    #[error("{span}: `return` outside function")]
    ReturnOutsideFunction { span: SourceSpan },
    #[error("{span}: `{name}` is only valid as `eval(input())`")]
    BareEvalInput { name: String, span: SourceSpan },
    #[error("{span}: comparison chaining is not supported")]
    ChainedComparison { span: SourceSpan },
    #[error("empty module: a program needs at least one statement")]
    EmptyModule,
}

impl SyntaxError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            SyntaxError::Unexpected { span, .. }
            | SyntaxError::BadChar { span, .. }
            | SyntaxError::IntTooLarge { span }
            | SyntaxError::BadIndent { span }
            | SyntaxError::BadTarget { span }
            | SyntaxError::NestedDef { span }
            | SyntaxError::ReturnOutsideFunction { span }
            | SyntaxError::BareEvalInput { span, .. }
            | SyntaxError::ChainedComparison { span } => Some(*span),
            SyntaxError::EmptyModule => None,
        }
    }
}

/// Parse P2 source text into a [`Program`]. Spans carry file id 0.
pub fn parse_program(source: &str) -> Result<Program, SyntaxError> {
    parse_program_in(source, 0)
}

/// Same as [`parse_program`] with an explicit file id for spans.
pub fn parse_program_in(source: &str, file: u32) -> Result<Program, SyntaxError> {
    let tokens = lex::lex(source, file)?;
    let mut p = Parser { tokens, pos: 0 };
    let body = p.parse_stmts(false)?;
    p.expect(TokKind::Eof)?;
    if body.is_empty() {
        return Err(SyntaxError::EmptyModule);
    }
    Ok(Program { body })
}

/// Parse a single expression, e.g. an input-script literal line.
pub fn parse_expression(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = lex::lex(source, 0)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.parse_expr()?;
    // allow a trailing newline token from the lexer
    if p.peek() == &TokKind::Newline {
        p.bump();
    }
    p.expect(TokKind::Eof)?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &TokKind {
        &self.tokens[self.pos].kind
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Unexpected {
            expected: expected.into(),
            found: describe(self.peek()),
            span: self.span(),
        })
    }

    fn expect(&mut self, kind: TokKind) -> Result<Token, SyntaxError> {
        if *self.peek() == kind {
            Ok(self.bump())
        } else {
            self.unexpected(&describe(&kind))
        }
    }

    fn expect_kw(&mut self, kw: Kw) -> Result<Token, SyntaxError> {
        self.expect(TokKind::Kw(kw))
    }

    fn eat(&mut self, kind: TokKind) -> bool {
        if *self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Statements until EOF (top level) or dedent (inside a suite).
    fn parse_stmts(&mut self, in_def: bool) -> Result<Vec<Stmt>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                TokKind::Eof => break,
                TokKind::Dedent if in_def => {
                    self.bump();
                    break;
                }
                TokKind::Newline => {
                    self.bump();
                }
                _ => {
                    self.parse_logical_line(in_def, &mut out)?;
                }
            }
        }
        Ok(out)
    }

    /// One source line: a `def`, or simple statements separated by `;`.
    fn parse_logical_line(&mut self, in_def: bool, out: &mut Vec<Stmt>) -> Result<(), SyntaxError> {
        if *self.peek() == TokKind::Kw(Kw::Def) {
            if in_def {
                return Err(SyntaxError::NestedDef { span: self.span() });
            }
            out.push(self.parse_def()?);
            return Ok(());
        }
        loop {
            out.push(self.parse_simple_stmt(in_def)?);
            if self.eat(TokKind::Semi) {
                if *self.peek() == TokKind::Newline || *self.peek() == TokKind::Eof {
                    break; // trailing semicolon
                }
                continue;
            }
            break;
        }
        if *self.peek() != TokKind::Eof {
            self.expect(TokKind::Newline)?;
        }
        Ok(())
    }

    fn parse_def(&mut self) -> Result<Stmt, SyntaxError> {
        let start = self.span();
        self.expect_kw(Kw::Def)?;
        let name = match self.bump() {
            Token { kind: TokKind::Ident(name), .. } => name,
            t => {
                return Err(SyntaxError::Unexpected {
                    expected: "function name".into(),
                    found: describe(&t.kind),
                    span: t.span,
                })
            }
        };
        self.expect(TokKind::LParen)?;
        let mut params = Vec::new();
        if *self.peek() != TokKind::RParen {
            loop {
                match self.bump() {
                    Token { kind: TokKind::Ident(p), .. } => params.push(p),
                    t => {
                        return Err(SyntaxError::Unexpected {
                            expected: "parameter name".into(),
                            found: describe(&t.kind),
                            span: t.span,
                        })
                    }
                }
                if !self.eat(TokKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokKind::RParen)?;
        self.expect(TokKind::Colon)?;
        self.expect(TokKind::Newline)?;
        self.expect(TokKind::Indent)?;
        let mut suite = Vec::new();
        loop {
            match self.peek() {
                TokKind::Dedent => {
                    self.bump();
                    break;
                }
                TokKind::Eof => break,
                TokKind::Newline => {
                    self.bump();
                }
                _ => self.parse_logical_line(true, &mut suite)?,
            }
        }
        if suite.is_empty() {
            return self.unexpected("an indented statement");
        }
        let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
        Ok(Stmt::with_span(StmtKind::FunctionDef { name, params, suite }, span))
    }

    fn parse_simple_stmt(&mut self, in_def: bool) -> Result<Stmt, SyntaxError> {
        let start = self.span();
        match self.peek() {
            TokKind::Kw(Kw::Print) => {
                self.bump();
                self.expect(TokKind::LParen)?;
                let e = self.parse_expr()?;
                self.expect(TokKind::RParen)?;
                let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                Ok(Stmt::with_span(StmtKind::Print(e), span))
            }
            TokKind::Kw(Kw::Return) => {
                if !in_def {
                    return Err(SyntaxError::ReturnOutsideFunction { span: self.span() });
                }
                self.bump();
                let e = self.parse_expr()?;
                let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                Ok(Stmt::with_span(StmtKind::Return(e), span))
            }
            _ => {
                let e = self.parse_expr()?;
                if *self.peek() == TokKind::Assign {
                    self.bump();
                    let target = expr_to_target(e)?;
                    let value = self.parse_expr()?;
                    let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                    Ok(Stmt::with_span(StmtKind::Assign { target, value }, span))
                } else {
                    let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                    Ok(Stmt::with_span(StmtKind::Expr(e), span))
                }
            }
        }
    }

    // Expression grammar, lowest precedence first, mirroring Python 3:
    //   ternary > or > and > not > comparison > additive > unary minus > postfix > atom

    fn parse_expr(&mut self) -> Result<Expr, SyntaxError> {
        self.parse_ternary()
    }

    fn parse_ternary(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        let then_val = self.parse_or()?;
        if self.eat(TokKind::Kw(Kw::If)) {
            let cond = self.parse_or()?;
            self.expect_kw(Kw::Else)?;
            let or_else = self.parse_ternary()?;
            let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
            return Ok(Expr::with_span(
                ExprKind::Ternary {
                    then_val: Box::new(then_val),
                    cond: Box::new(cond),
                    or_else: Box::new(or_else),
                },
                span,
            ));
        }
        Ok(then_val)
    }

    fn parse_or(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        let mut e = self.parse_and()?;
        while self.eat(TokKind::Kw(Kw::Or)) {
            let rhs = self.parse_and()?;
            let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
            e = Expr::with_span(ExprKind::Or(Box::new(e), Box::new(rhs)), span);
        }
        Ok(e)
    }

    fn parse_and(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        let mut e = self.parse_not()?;
        while self.eat(TokKind::Kw(Kw::And)) {
            let rhs = self.parse_not()?;
            let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
            e = Expr::with_span(ExprKind::And(Box::new(e), Box::new(rhs)), span);
        }
        Ok(e)
    }

    fn parse_not(&mut self) -> Result<Expr, SyntaxError> {
        if *self.peek() == TokKind::Kw(Kw::Not) {
            let start = self.span();
            self.bump();
            let inner = self.parse_not()?;
            let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
            return Ok(Expr::with_span(ExprKind::Not(Box::new(inner)), span));
        }
        self.parse_comparison()
    }

    fn parse_comparison(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        let lhs = self.parse_additive()?;
        let op = match self.peek() {
            TokKind::EqEq => Some(CmpOp::Eq),
            TokKind::NotEq => Some(CmpOp::NotEq),
            TokKind::Kw(Kw::Is) => Some(CmpOp::Is),
            _ => None,
        };
        let Some(op) = op else { return Ok(lhs) };
        self.bump();
        let rhs = self.parse_additive()?;
        if matches!(self.peek(), TokKind::EqEq | TokKind::NotEq | TokKind::Kw(Kw::Is)) {
            return Err(SyntaxError::ChainedComparison { span: self.span() });
        }
        let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
        let kind = match op {
            CmpOp::Eq => ExprKind::Eq(Box::new(lhs), Box::new(rhs)),
            CmpOp::NotEq => ExprKind::NotEq(Box::new(lhs), Box::new(rhs)),
            CmpOp::Is => ExprKind::Is(Box::new(lhs), Box::new(rhs)),
        };
        Ok(Expr::with_span(kind, span))
    }

    fn parse_additive(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        let mut e = self.parse_unary()?;
        while self.eat(TokKind::Plus) {
            let rhs = self.parse_unary()?;
            let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
            e = Expr::with_span(ExprKind::Add(Box::new(e), Box::new(rhs)), span);
        }
        Ok(e)
    }

    fn parse_unary(&mut self) -> Result<Expr, SyntaxError> {
        if *self.peek() == TokKind::Minus {
            let start = self.span();
            self.bump();
            let inner = self.parse_unary()?;
            let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
            return Ok(Expr::with_span(ExprKind::Neg(Box::new(inner)), span));
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        let mut e = self.parse_atom()?;
        loop {
            match self.peek() {
                TokKind::LParen => {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != TokKind::RParen {
                        loop {
                            args.push(self.parse_expr()?);
                            if !self.eat(TokKind::Comma) {
                                break;
                            }
                        }
                    }
                    self.expect(TokKind::RParen)?;
                    let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                    e = Expr::with_span(ExprKind::Call { callee: Box::new(e), args }, span);
                }
                TokKind::LBracket => {
                    self.bump();
                    let index = self.parse_expr()?;
                    self.expect(TokKind::RBracket)?;
                    let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                    e = Expr::with_span(
                        ExprKind::Subscript { object: Box::new(e), index: Box::new(index) },
                        span,
                    );
                }
                _ => break,
            }
        }
        Ok(e)
    }

    fn parse_atom(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.span();
        match self.peek().clone() {
            TokKind::Ident(name) => {
                self.bump();
                Ok(Expr::with_span(ExprKind::Name(name), start))
            }
            TokKind::Int(value) => {
                self.bump();
                Ok(Expr::with_span(ExprKind::Int(value), start))
            }
            TokKind::Kw(Kw::True) => {
                self.bump();
                Ok(Expr::with_span(ExprKind::Bool(true), start))
            }
            TokKind::Kw(Kw::False) => {
                self.bump();
                Ok(Expr::with_span(ExprKind::Bool(false), start))
            }
            TokKind::Kw(Kw::Eval) => {
                // Only the fixed form eval(input()) is supported.
                self.bump();
                self.expect(TokKind::LParen)?;
                self.expect_kw(Kw::Input)?;
                self.expect(TokKind::LParen)?;
                self.expect(TokKind::RParen)?;
                self.expect(TokKind::RParen)?;
                let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                Ok(Expr::with_span(ExprKind::EvalInput, span))
            }
            TokKind::Kw(Kw::Input) => {
                Err(SyntaxError::BareEvalInput { name: "input".into(), span: start })
            }
            TokKind::Kw(Kw::Print) => {
                // print(..) in expression position, e.g. `return print(x)`.
                self.bump();
                self.expect(TokKind::LParen)?;
                let e = self.parse_expr()?;
                self.expect(TokKind::RParen)?;
                let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                Ok(Expr::with_span(ExprKind::PrintCall(Box::new(e)), span))
            }
            TokKind::LParen => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(TokKind::RParen)?;
                Ok(e)
            }
            TokKind::LBracket => {
                self.bump();
                let mut items = Vec::new();
                if *self.peek() != TokKind::RBracket {
                    loop {
                        items.push(self.parse_expr()?);
                        if !self.eat(TokKind::Comma) {
                            break;
                        }
                    }
                }
                self.expect(TokKind::RBracket)?;
                let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                Ok(Expr::with_span(ExprKind::List(items), span))
            }
            TokKind::LBrace => {
                self.bump();
                let mut pairs = Vec::new();
                if *self.peek() != TokKind::RBrace {
                    loop {
                        let k = self.parse_expr()?;
                        self.expect(TokKind::Colon)?;
                        let v = self.parse_expr()?;
                        pairs.push((k, v));
                        if !self.eat(TokKind::Comma) {
                            break;
                        }
                    }
                }
                self.expect(TokKind::RBrace)?;
                let span = SourceSpan::new(start.file, start.start, self.prev_span().end);
                Ok(Expr::with_span(ExprKind::Dict(pairs), span))
            }
            _ => self.unexpected("an expression"),
        }
    }
}

enum CmpOp {
    Eq,
    NotEq,
    Is,
}

fn expr_to_target(e: Expr) -> Result<Target, SyntaxError> {
    let span = e.span;
    match e.kind {
        ExprKind::Name(id) => Ok(Target { kind: TargetKind::Name(id), span }),
        ExprKind::Subscript { object, index } => {
            Ok(Target { kind: TargetKind::Subscript(*object, *index), span })
        }
        _ => Err(SyntaxError::BadTarget { span }),
    }
}
