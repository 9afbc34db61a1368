//! P2 syntax: typed AST, parser, and unparser.
//!
//! P2 is a small imperative subset of Python 3: prints, assignments,
//! expression statements, returns, and top-level function definitions over
//! integers, booleans, lists, and dictionaries. Every P2 program is a valid
//! Python 3 program with the same behavior. Function definitions cannot
//! nest and `return` is only legal inside a function body.

mod ast;
mod lex;
mod parse;
mod print;

pub use ast::{
    ast_size, Expr, ExprKind, LineCol, Program, SourceSpan, Stmt, StmtKind, Target, TargetKind,
};
pub use parse::{parse_expression, parse_program, parse_program_in, SyntaxError};
pub use print::{unparse, unparse_expr, unparse_stmt};
