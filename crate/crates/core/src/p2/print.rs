//! Unparser: emit a [`Program`] as Python 3 source that reparses to a
//! structurally identical tree. Output is canonical: 4-space indents, one
//! statement per line, single spaces around operators, and parentheses only
//! where precedence demands them.

use alloc::string::String;
use core::fmt::Write;

use super::ast::{Expr, ExprKind, Program, Stmt, StmtKind, Target, TargetKind};

/// Binding strength, tighter binds are higher. Mirrors the parser.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Ternary = 1,
    Or,
    And,
    Not,
    Cmp,
    Add,
    Unary,
    Postfix,
    Atom,
}

pub fn unparse(p: &Program) -> String {
    let mut out = String::new();
    for stmt in &p.body {
        write_stmt(&mut out, stmt, 0);
    }
    out
}

pub fn unparse_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    write_stmt(&mut out, s, 0);
    out
}

pub fn unparse_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, Prec::Ternary);
    out
}

fn write_stmt(out: &mut String, s: &Stmt, indent: usize) {
    for _ in 0..indent {
        out.push_str("    ");
    }
    match &s.kind {
        StmtKind::Print(e) => {
            out.push_str("print(");
            write_expr(out, e, Prec::Ternary);
            out.push(')');
        }
        StmtKind::Assign { target, value } => {
            write_target(out, target);
            out.push_str(" = ");
            write_expr(out, value, Prec::Ternary);
        }
        StmtKind::Expr(e) => write_expr(out, e, Prec::Ternary),
        StmtKind::Return(e) => {
            out.push_str("return ");
            write_expr(out, e, Prec::Ternary);
        }
        StmtKind::FunctionDef { name, params, suite } => {
            let _ = write!(out, "def {name}(");
            for (i, p) in params.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(p);
            }
            out.push_str("):\n");
            for stmt in suite {
                write_stmt(out, stmt, indent + 1);
            }
            return;
        }
    }
    out.push('\n');
}

fn write_target(out: &mut String, t: &Target) {
    match &t.kind {
        TargetKind::Name(id) => out.push_str(id),
        TargetKind::Subscript(o, i) => {
            write_expr(out, o, Prec::Postfix);
            out.push('[');
            write_expr(out, i, Prec::Ternary);
            out.push(']');
        }
    }
}

/// Write `e`, parenthesizing if its own precedence is below what the
/// surrounding position requires.
fn write_expr(out: &mut String, e: &Expr, min: Prec) {
    let prec = expr_prec(e);
    let parens = (prec as u8) < (min as u8);
    if parens {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Name(id) => out.push_str(id),
        ExprKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Bool(b) => out.push_str(if *b { "True" } else { "False" }),
        ExprKind::Neg(x) => {
            out.push('-');
            write_expr(out, x, Prec::Unary);
        }
        ExprKind::Not(x) => {
            out.push_str("not ");
            write_expr(out, x, Prec::Not);
        }
        ExprKind::Add(l, r) => {
            // left-associative: the right operand needs one level more
            write_expr(out, l, Prec::Add);
            out.push_str(" + ");
            write_expr(out, r, Prec::Unary);
        }
        ExprKind::And(l, r) => {
            write_expr(out, l, Prec::And);
            out.push_str(" and ");
            write_expr(out, r, Prec::Not);
        }
        ExprKind::Or(l, r) => {
            write_expr(out, l, Prec::Or);
            out.push_str(" or ");
            write_expr(out, r, Prec::And);
        }
        ExprKind::Eq(l, r) => write_cmp(out, l, "==", r),
        ExprKind::NotEq(l, r) => write_cmp(out, l, "!=", r),
        ExprKind::Is(l, r) => write_cmp(out, l, "is", r),
        ExprKind::Ternary { then_val, cond, or_else } => {
            write_expr(out, then_val, Prec::Or);
            out.push_str(" if ");
            write_expr(out, cond, Prec::Or);
            out.push_str(" else ");
            write_expr(out, or_else, Prec::Ternary);
        }
        ExprKind::List(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, item, Prec::Ternary);
            }
            out.push(']');
        }
        ExprKind::Dict(pairs) => {
            out.push('{');
            for (i, (k, v)) in pairs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, k, Prec::Ternary);
                out.push_str(": ");
                write_expr(out, v, Prec::Ternary);
            }
            out.push('}');
        }
        ExprKind::Subscript { object, index } => {
            write_expr(out, object, Prec::Postfix);
            out.push('[');
            write_expr(out, index, Prec::Ternary);
            out.push(']');
        }
        ExprKind::Call { callee, args } => {
            write_expr(out, callee, Prec::Postfix);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, Prec::Ternary);
            }
            out.push(')');
        }
        ExprKind::PrintCall(x) => {
            out.push_str("print(");
            write_expr(out, x, Prec::Ternary);
            out.push(')');
        }
        ExprKind::EvalInput => out.push_str("eval(input())"),
    }
    if parens {
        out.push(')');
    }
}

fn write_cmp(out: &mut String, l: &Expr, op: &str, r: &Expr) {
    // comparisons do not chain: both operands must bind tighter
    write_expr(out, l, Prec::Add);
    let _ = write!(out, " {op} ");
    write_expr(out, r, Prec::Add);
}

fn expr_prec(e: &Expr) -> Prec {
    match &e.kind {
        ExprKind::Ternary { .. } => Prec::Ternary,
        ExprKind::Or(..) => Prec::Or,
        ExprKind::And(..) => Prec::And,
        ExprKind::Not(..) => Prec::Not,
        ExprKind::Eq(..) | ExprKind::NotEq(..) | ExprKind::Is(..) => Prec::Cmp,
        ExprKind::Add(..) => Prec::Add,
        ExprKind::Neg(..) => Prec::Unary,
        ExprKind::Call { .. } | ExprKind::Subscript { .. } | ExprKind::PrintCall(..) => {
            Prec::Postfix
        }
        ExprKind::Name(_)
        | ExprKind::Int(_)
        | ExprKind::Bool(_)
        | ExprKind::List(_)
        | ExprKind::Dict(_)
        | ExprKind::EvalInput => Prec::Atom,
    }
}

/// Parenthesization helper used by tests: parse, print, reparse.
#[cfg(test)]
pub(crate) fn roundtrip(src: &str) -> Result<(Program, String, Program), super::SyntaxError> {
    let p1 = super::parse_program(src)?;
    let text = unparse(&p1);
    let p2 = super::parse_program(&text)?;
    Ok((p1, text, p2))
}
