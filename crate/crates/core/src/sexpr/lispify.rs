//! Encoding ASTs as terms and reconstructing ASTs from terms.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::p2::{Expr, ExprKind, Program, Stmt, StmtKind, Target, TargetKind};

use super::partial::{analyze, PartialTree};
use super::{Atom, Head, OpAtom, SExpr};

/// Encode a whole program as one term: a right-nested `StatementList`
/// spine terminated by epsilon, function suites encoded the same way under
/// their `def` node.
pub fn lispify(p: &Program) -> SExpr {
    stmt_spine(&p.body)
}

fn stmt_spine(stmts: &[Stmt]) -> SExpr {
    let mut tail = SExpr::Epsilon;
    for s in stmts.iter().rev() {
        tail = SExpr::app(Head::StatementList, alloc::vec![lispify_stmt(s), tail]);
    }
    tail
}

pub fn lispify_stmt(s: &Stmt) -> SExpr {
    match &s.kind {
        StmtKind::Print(e) => SExpr::app(Head::Print, alloc::vec![lispify_expr(e)]),
        StmtKind::Assign { target, value } => SExpr::app(
            Head::Assign,
            alloc::vec![lispify_target(target), lispify_expr(value)],
        ),
        StmtKind::Expr(e) => SExpr::app(Head::ExprStmt, alloc::vec![lispify_expr(e)]),
        StmtKind::Return(e) => SExpr::app(Head::Return, alloc::vec![lispify_expr(e)]),
        StmtKind::FunctionDef { name, params, suite } => {
            let mut plist = SExpr::Epsilon;
            for p in params.iter().rev() {
                plist = SExpr::app(Head::IdList, alloc::vec![SExpr::ident(p.clone()), plist]);
            }
            SExpr::app(
                Head::Def,
                alloc::vec![SExpr::ident(name.clone()), plist, stmt_spine(suite)],
            )
        }
    }
}

fn lispify_target(t: &Target) -> SExpr {
    match &t.kind {
        TargetKind::Name(id) => SExpr::ident(id.clone()),
        TargetKind::Subscript(o, i) => SExpr::app(
            Head::Subscript,
            alloc::vec![lispify_expr(o), lispify_expr(i)],
        ),
    }
}

pub fn lispify_expr(e: &Expr) -> SExpr {
    let bin = |h: Head, l: &Expr, r: &Expr| {
        SExpr::app(h, alloc::vec![lispify_expr(l), lispify_expr(r)])
    };
    match &e.kind {
        ExprKind::Name(id) => SExpr::ident(id.clone()),
        ExprKind::Int(n) => SExpr::int(*n),
        ExprKind::Bool(b) => SExpr::Atom(Atom::Bool(*b)),
        ExprKind::Neg(x) => SExpr::app(Head::Neg, alloc::vec![lispify_expr(x)]),
        ExprKind::Not(x) => SExpr::app(Head::Not, alloc::vec![lispify_expr(x)]),
        ExprKind::Add(l, r) => bin(Head::Add, l, r),
        ExprKind::And(l, r) => bin(Head::And, l, r),
        ExprKind::Or(l, r) => bin(Head::Or, l, r),
        ExprKind::Eq(l, r) => bin(Head::Eq, l, r),
        ExprKind::NotEq(l, r) => bin(Head::NotEq, l, r),
        ExprKind::Is(l, r) => bin(Head::Is, l, r),
        ExprKind::Ternary { then_val, cond, or_else } => SExpr::app(
            Head::Ternary,
            alloc::vec![
                lispify_expr(then_val),
                lispify_expr(cond),
                lispify_expr(or_else)
            ],
        ),
        ExprKind::List(items) => {
            let mut tail = SExpr::Epsilon;
            for item in items.iter().rev() {
                tail = SExpr::app(Head::ExprList, alloc::vec![lispify_expr(item), tail]);
            }
            SExpr::app(Head::List, alloc::vec![tail])
        }
        ExprKind::Dict(pairs) => {
            let mut tail = SExpr::Epsilon;
            for (k, v) in pairs.iter().rev() {
                let kv = SExpr::app(Head::Kv, alloc::vec![lispify_expr(k), lispify_expr(v)]);
                tail = SExpr::app(Head::KvList, alloc::vec![kv, tail]);
            }
            SExpr::app(Head::Dict, alloc::vec![tail])
        }
        ExprKind::Subscript { object, index } => bin(Head::Subscript, object, index),
        ExprKind::Call { callee, args } => {
            let mut tail = SExpr::Epsilon;
            for a in args.iter().rev() {
                tail = SExpr::app(Head::ExprList, alloc::vec![lispify_expr(a), tail]);
            }
            SExpr::app(Head::Call, alloc::vec![lispify_expr(callee), tail])
        }
        ExprKind::PrintCall(x) => SExpr::app(Head::PrintExpr, alloc::vec![lispify_expr(x)]),
        ExprKind::EvalInput => SExpr::Atom(Atom::EvalInput),
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DelispifyError {
    #[error("term is not a complete program: {0} issue(s) found")]
    Incomplete(PartialTree),
    #[error("term root is not a statement spine")]
    NotAProgram,
    #[error("program has no statements")]
    Empty,
}

/// Strict inverse of [`lispify`]: the term must be a complete, hole-free
/// statement spine. Reconstructed nodes carry dummy spans.
pub fn delispify(s: &SExpr) -> Result<Program, DelispifyError> {
    if !matches!(s, SExpr::App(Head::StatementList, _)) {
        return Err(DelispifyError::NotAProgram);
    }
    let tree = analyze(s);
    if !tree.is_complete() || tree.has_holes() || tree.open_tail {
        return Err(DelispifyError::Incomplete(tree));
    }
    let (stmts, open) = to_stmts(s, HolePolicy::Forbid).map_err(|_| DelispifyError::NotAProgram)?;
    debug_assert!(!open);
    if stmts.is_empty() {
        return Err(DelispifyError::Empty);
    }
    Ok(Program { body: stmts })
}

/// How reconstruction treats holes.
#[derive(Clone, Copy, PartialEq)]
pub(crate) enum HolePolicy {
    Forbid,
    /// Hole `#k` becomes the identifier `_param{k}`, the way a candidate
    /// body reads once its holes are promoted to parameters.
    AsParams,
}

/// Parameter name a hole turns into once promoted.
pub fn hole_param_name(k: u32) -> String {
    format!("_param{k}")
}

/// A hole-free binding as the expression it will become at the call site.
pub fn binding_expr(s: &SExpr) -> Option<Expr> {
    to_expr(s, HolePolicy::Forbid).ok()
}

pub(crate) struct Unrepresentable;

pub(crate) fn to_expr(s: &SExpr, pol: HolePolicy) -> Result<Expr, Unrepresentable> {
    let e = match s {
        SExpr::Epsilon => return Err(Unrepresentable),
        SExpr::Atom(a) => match a {
            Atom::Int(n) => Expr::int(*n),
            Atom::Ident(id) => Expr::name(id.clone()),
            Atom::Bool(b) => Expr::new(ExprKind::Bool(*b)),
            Atom::EvalInput => Expr::new(ExprKind::EvalInput),
            Atom::Hole(k) => match pol {
                HolePolicy::Forbid => return Err(Unrepresentable),
                HolePolicy::AsParams => Expr::name(hole_param_name(*k)),
            },
            Atom::Op(_) | Atom::Ellipsis => return Err(Unrepresentable),
        },
        SExpr::App(head, children) => {
            if children.len() != head.arity() {
                return Err(Unrepresentable);
            }
            let un = |k: fn(Box<Expr>) -> ExprKind| -> Result<Expr, Unrepresentable> {
                Ok(Expr::new(k(Box::new(to_expr(&children[0], pol)?))))
            };
            let bin = |k: fn(Box<Expr>, Box<Expr>) -> ExprKind| -> Result<Expr, Unrepresentable> {
                Ok(Expr::new(k(
                    Box::new(to_expr(&children[0], pol)?),
                    Box::new(to_expr(&children[1], pol)?),
                )))
            };
            match head {
                Head::Add => bin(ExprKind::Add)?,
                Head::And => bin(ExprKind::And)?,
                Head::Or => bin(ExprKind::Or)?,
                Head::Eq => bin(ExprKind::Eq)?,
                Head::NotEq => bin(ExprKind::NotEq)?,
                Head::Is => bin(ExprKind::Is)?,
                Head::Neg => un(ExprKind::Neg)?,
                Head::Not => un(ExprKind::Not)?,
                Head::PrintExpr => un(ExprKind::PrintCall)?,
                Head::Subscript => Expr::new(ExprKind::Subscript {
                    object: Box::new(to_expr(&children[0], pol)?),
                    index: Box::new(to_expr(&children[1], pol)?),
                }),
                Head::Ternary => Expr::new(ExprKind::Ternary {
                    then_val: Box::new(to_expr(&children[0], pol)?),
                    cond: Box::new(to_expr(&children[1], pol)?),
                    or_else: Box::new(to_expr(&children[2], pol)?),
                }),
                Head::List => Expr::new(ExprKind::List(expr_items(&children[0], pol)?)),
                Head::Dict => Expr::new(ExprKind::Dict(kv_items(&children[0], pol)?)),
                Head::Call => Expr::new(ExprKind::Call {
                    callee: Box::new(to_expr(&children[0], pol)?),
                    args: expr_items(&children[1], pol)?,
                }),
                Head::Compare => {
                    // normalized comparison form with the operator as a child
                    let op = match &children[1] {
                        SExpr::Atom(Atom::Op(op)) => *op,
                        _ => return Err(Unrepresentable),
                    };
                    let l = Box::new(to_expr(&children[0], pol)?);
                    let r = Box::new(to_expr(&children[2], pol)?);
                    Expr::new(match op {
                        OpAtom::Eq => ExprKind::Eq(l, r),
                        OpAtom::NotEq => ExprKind::NotEq(l, r),
                        OpAtom::Is => ExprKind::Is(l, r),
                    })
                }
                _ => return Err(Unrepresentable),
            }
        }
    };
    Ok(e)
}

fn expr_items(s: &SExpr, pol: HolePolicy) -> Result<Vec<Expr>, Unrepresentable> {
    let mut items = Vec::new();
    let mut cur = s;
    loop {
        match cur {
            SExpr::Epsilon => return Ok(items),
            SExpr::App(Head::ExprList, children) if children.len() == 2 => {
                items.push(to_expr(&children[0], pol)?);
                cur = &children[1];
            }
            _ => return Err(Unrepresentable),
        }
    }
}

fn kv_items(s: &SExpr, pol: HolePolicy) -> Result<Vec<(Expr, Expr)>, Unrepresentable> {
    let mut items = Vec::new();
    let mut cur = s;
    loop {
        match cur {
            SExpr::Epsilon => return Ok(items),
            SExpr::App(Head::KvList, children) if children.len() == 2 => {
                match &children[0] {
                    SExpr::App(Head::Kv, kv) if kv.len() == 2 => {
                        items.push((to_expr(&kv[0], pol)?, to_expr(&kv[1], pol)?));
                    }
                    _ => return Err(Unrepresentable),
                }
                cur = &children[1];
            }
            _ => return Err(Unrepresentable),
        }
    }
}

pub(crate) fn to_target(s: &SExpr, pol: HolePolicy) -> Result<Target, Unrepresentable> {
    match s {
        SExpr::Atom(Atom::Ident(id)) => Ok(Target::name(id.clone())),
        SExpr::App(Head::Subscript, children) if children.len() == 2 => Ok(Target::subscript(
            to_expr(&children[0], pol)?,
            to_expr(&children[1], pol)?,
        )),
        _ => Err(Unrepresentable),
    }
}

pub(crate) fn to_stmt(s: &SExpr, pol: HolePolicy) -> Result<Stmt, Unrepresentable> {
    let SExpr::App(head, children) = s else {
        return Err(Unrepresentable);
    };
    if children.len() != head.arity() {
        return Err(Unrepresentable);
    }
    let kind = match head {
        Head::Print => StmtKind::Print(to_expr(&children[0], pol)?),
        Head::ExprStmt => StmtKind::Expr(to_expr(&children[0], pol)?),
        Head::Return => StmtKind::Return(to_expr(&children[0], pol)?),
        Head::Assign => StmtKind::Assign {
            target: to_target(&children[0], pol)?,
            value: to_expr(&children[1], pol)?,
        },
        Head::Def => {
            let name = match &children[0] {
                SExpr::Atom(Atom::Ident(id)) => id.clone(),
                _ => return Err(Unrepresentable),
            };
            let mut params = Vec::new();
            let mut cur = &children[1];
            loop {
                match cur {
                    SExpr::Epsilon => break,
                    SExpr::App(Head::IdList, c) if c.len() == 2 => {
                        match &c[0] {
                            SExpr::Atom(Atom::Ident(id)) => params.push(id.clone()),
                            _ => return Err(Unrepresentable),
                        }
                        cur = &c[1];
                    }
                    _ => return Err(Unrepresentable),
                }
            }
            let (suite, open) = to_stmts(&children[2], pol)?;
            if suite.is_empty() || open {
                return Err(Unrepresentable);
            }
            StmtKind::FunctionDef { name, params, suite }
        }
        _ => return Err(Unrepresentable),
    };
    Ok(Stmt::new(kind))
}

/// Walk a statement spine; returns the statements and whether the spine
/// ended in an open tail rather than epsilon.
pub(crate) fn to_stmts(s: &SExpr, pol: HolePolicy) -> Result<(Vec<Stmt>, bool), Unrepresentable> {
    let mut stmts = Vec::new();
    let mut cur = s;
    loop {
        match cur {
            SExpr::Epsilon => return Ok((stmts, false)),
            SExpr::Atom(Atom::Ellipsis) => return Ok((stmts, true)),
            SExpr::App(Head::StatementList, children) if children.len() == 2 => {
                stmts.push(to_stmt(&children[0], pol)?);
                cur = &children[1];
            }
            _ => return Err(Unrepresentable),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p2::parse_program;

    #[test]
    fn add_becomes_nested_application() {
        let p = parse_program("print(1 + 2)").unwrap();
        let s = lispify(&p);
        assert_eq!(
            alloc::format!("{s}"),
            "(StatementList (print (add 1 2)) eps)"
        );
    }

    #[test]
    fn statement_sequence_becomes_spine() {
        let p = parse_program("x = 1\ny = 1\nprint(x + y)\n").unwrap();
        let s = lispify(&p);
        assert_eq!(
            alloc::format!("{s}"),
            "(StatementList (assign x 1) (StatementList (assign y 1) \
             (StatementList (print (add x y)) eps)))"
        );
    }

    #[test]
    fn single_print_program() {
        let p = parse_program("print(0)").unwrap();
        assert_eq!(alloc::format!("{}", lispify(&p)), "(StatementList (print 0) eps)");
    }

    #[test]
    fn delispify_inverts_lispify() {
        let srcs = [
            "x = 1\ny = 1\nprint(x + y)\n",
            "def f(a, b):\n    c = a + b\n    return c\nprint(f(1, 2))\n",
            "d = {1: 2}\nd[1] = [1, 2, 3]\nprint(d[1] is d[1])\n",
            "x = eval(input())\nprint(1 if x else -1)\n",
            "def g():\n    return print(0)\ng()\n",
        ];
        for src in srcs {
            let p = parse_program(src).unwrap();
            let back = delispify(&lispify(&p)).unwrap();
            assert_eq!(p, back, "lispify/delispify not inverse for:\n{src}");
        }
    }

    #[test]
    fn delispify_rejects_holes_and_incomplete_terms() {
        let s = super::super::parse_sexpr("(StatementList (print #0) eps)").unwrap();
        assert!(matches!(delispify(&s), Err(DelispifyError::Incomplete(_))));
        let s = super::super::parse_sexpr("(add 1 2)").unwrap();
        assert!(matches!(delispify(&s), Err(DelispifyError::NotAProgram)));
    }

    #[test]
    fn compare_form_normalizes_to_tagged_comparison() {
        let s = super::super::parse_sexpr("(compare a == b)").unwrap();
        let e = to_expr(&s, HolePolicy::Forbid).map_err(|_| ()).unwrap();
        assert_eq!(crate::p2::unparse_expr(&e), "a == b");
    }
}
