//! The Lisp-like program encoding used by the search engine.
//!
//! Every AST node becomes an application of a fixed head symbol to its
//! children, so a whole program is one nested term: `1 + 2` is `(add 1 2)`,
//! and a statement sequence is a right-nested `StatementList` spine ending
//! in the empty statement, written `eps`:
//!
//! ```text
//! x = 1; y = 1; print(x + y)
//!   ==>
//! (StatementList (assign x 1)
//!   (StatementList (assign y 1)
//!     (StatementList (print (add x y)) eps)))
//! ```
//!
//! Operators live in the head symbol (`eq`, `noteq`, `is`, `and`, `or`),
//! never as children, so "is this hole in a legal position" is a question
//! about the slot kind of its parent. Variable-length constructs (list and
//! dict displays, call arguments, parameter lists) are encoded as cons
//! spines so every head has a fixed arity.
//!
//! Patterns extend the same term language with numbered holes (`#0`, `#1`,
//! ...) and an open statement-spine tail written `...`.

mod lispify;
mod partial;
mod text;
mod vocab;

pub use lispify::{
    binding_expr, delispify, hole_param_name, lispify, lispify_expr, lispify_stmt, DelispifyError,
};
pub use partial::{
    analyze, body_ast, BodyAst, BodyError, Issue, IssueKind, PartialTree,
};
pub use text::{parse_sexpr, SExprReadError};
pub use vocab::{Head, SlotKind};

use alloc::string::String;
use alloc::vec::Vec;

/// One node of the encoding: an atom, an application of a vocabulary head,
/// or the spine terminator epsilon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SExpr {
    Atom(Atom),
    App(Head, Vec<SExpr>),
    Epsilon,
}

/// Leaf values. Identifiers, integers, and booleans are distinct atom kinds:
/// a hole must be able to tell an identifier from a literal, and operator
/// atoms (valid only in the operator slot of `compare`) from both.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Int(i64),
    Ident(String),
    Bool(bool),
    /// The fixed `eval(input())` expression.
    EvalInput,
    /// A comparison operator as a value; only legal in `compare`'s middle
    /// slot, and never bindable by a hole.
    Op(OpAtom),
    /// A numbered pattern hole.
    Hole(u32),
    /// Open tail of a root statement spine: "the rest of the statements
    /// stay at the call site". Never a parameter.
    Ellipsis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpAtom {
    Eq,
    NotEq,
    Is,
}

impl SExpr {
    pub fn ident(name: impl Into<String>) -> Self {
        SExpr::Atom(Atom::Ident(name.into()))
    }

    pub fn int(value: i64) -> Self {
        SExpr::Atom(Atom::Int(value))
    }

    pub fn hole(index: u32) -> Self {
        SExpr::Atom(Atom::Hole(index))
    }

    pub fn app(head: Head, children: Vec<SExpr>) -> Self {
        debug_assert_eq!(children.len(), head.arity());
        SExpr::App(head, children)
    }

    /// Pre-order walk over every node of the term.
    pub fn walk(&self, f: &mut impl FnMut(&SExpr)) {
        f(self);
        if let SExpr::App(_, children) = self {
            for c in children {
                c.walk(f);
            }
        }
    }

    pub fn contains(&self, pred: &impl Fn(&SExpr) -> bool) -> bool {
        let mut found = false;
        self.walk(&mut |n| found |= pred(n));
        found
    }

    /// Highest hole index plus one, i.e. the number of distinct holes if
    /// they are densely numbered.
    pub fn hole_count(&self) -> u32 {
        let mut max: Option<u32> = None;
        self.walk(&mut |n| {
            if let SExpr::Atom(Atom::Hole(k)) = n {
                max = Some(max.map_or(*k, |m| m.max(*k)));
            }
        });
        max.map_or(0, |m| m + 1)
    }

    pub fn has_holes(&self) -> bool {
        self.contains(&|n| matches!(n, SExpr::Atom(Atom::Hole(_))))
    }

    /// All identifier atoms in the term, in no particular order.
    pub fn collect_idents(&self, out: &mut alloc::collections::BTreeSet<String>) {
        self.walk(&mut |n| {
            if let SExpr::Atom(Atom::Ident(id)) = n {
                out.insert(id.clone());
            }
        });
    }

    pub fn child(&self, index: usize) -> Option<&SExpr> {
        match self {
            SExpr::App(_, children) => children.get(index),
            _ => None,
        }
    }

    /// Follow a child-index path from this node.
    pub fn at_path(&self, path: &[usize]) -> Option<&SExpr> {
        let mut cur = self;
        for &i in path {
            cur = cur.child(i)?;
        }
        Some(cur)
    }

    pub fn at_path_mut(&mut self, path: &[usize]) -> Option<&mut SExpr> {
        let mut cur = self;
        for &i in path {
            match cur {
                SExpr::App(_, children) => cur = children.get_mut(i)?,
                _ => return None,
            }
        }
        Some(cur)
    }
}
