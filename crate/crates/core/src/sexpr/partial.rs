//! Structural analysis of candidate terms: which required children are
//! missing, where every hole sits, and whether an open tail is in the one
//! sanctioned place (the root statement spine).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

use crate::p2::{Expr, Stmt};

use super::lispify::{to_expr, to_stmts, HolePolicy};
use super::{Atom, Head, SExpr, SlotKind};

/// Per-node findings for a term that may not reconstruct into a program
/// fragment. `issues` are structural malformations; `holes` records every
/// hole with the kind of slot it occupies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartialTree {
    pub issues: Vec<Issue>,
    pub holes: Vec<HoleSite>,
    /// The root spine ends in `...` (statements after the match stay put).
    pub open_tail: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub path: Vec<usize>,
    pub kind: IssueKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IssueKind {
    /// An application with fewer children than its head requires, e.g.
    /// `(add #0)`.
    MissingChildren { head: Head, expected: usize, found: usize },
    ExtraChildren { head: Head, expected: usize, found: usize },
    /// A slot holds something of the wrong kind, e.g. a statement head in
    /// an expression slot or an operator atom outside `compare`.
    WrongContent { slot: SlotKind, found: String },
    /// `...` somewhere other than the tail of the root statement spine.
    StrayEllipsis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoleSite {
    pub index: u32,
    pub slot: SlotKind,
}

impl PartialTree {
    pub fn is_complete(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has_holes(&self) -> bool {
        !self.holes.is_empty()
    }

    /// Holes sitting in slots where an arbitrary expression argument would
    /// be illegal or would change evaluation order.
    pub fn misplaced_holes(&self) -> impl Iterator<Item = &HoleSite> {
        self.holes.iter().filter(|h| h.slot != SlotKind::Expr)
    }
}

impl fmt::Display for PartialTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.issues.len())
    }
}

/// Classify the root and walk the whole term.
pub fn analyze(s: &SExpr) -> PartialTree {
    let mut tree = PartialTree::default();
    let mut path = Vec::new();
    match s {
        SExpr::App(Head::StatementList, _) => {
            walk_spine(s, true, &mut path, &mut tree);
        }
        SExpr::App(head, _) if head.is_statement() => {
            walk(s, SlotKind::Stmt, &mut path, &mut tree);
        }
        _ => walk(s, SlotKind::Expr, &mut path, &mut tree),
    }
    tree
}

fn push_issue(tree: &mut PartialTree, path: &[usize], kind: IssueKind) {
    tree.issues.push(Issue { path: path.to_vec(), kind });
}

fn walk_spine(s: &SExpr, root: bool, path: &mut Vec<usize>, tree: &mut PartialTree) {
    let base = path.len();
    let mut cur = s;
    loop {
        match cur {
            SExpr::Epsilon => break,
            SExpr::Atom(Atom::Ellipsis) => {
                if !root {
                    push_issue(tree, path, IssueKind::StrayEllipsis);
                } else {
                    tree.open_tail = true;
                }
                break;
            }
            SExpr::Atom(Atom::Hole(k)) => {
                tree.holes.push(HoleSite { index: *k, slot: SlotKind::StmtTail });
                break;
            }
            SExpr::App(Head::StatementList, children) => {
                if let Some(stmt) = children.first() {
                    path.push(0);
                    walk(stmt, SlotKind::Stmt, path, tree);
                    path.pop();
                }
                if children.len() == 2 {
                    path.push(1);
                    cur = &children[1];
                } else {
                    let (expected, found) = (2, children.len());
                    let kind = if found < expected {
                        IssueKind::MissingChildren { head: Head::StatementList, expected, found }
                    } else {
                        IssueKind::ExtraChildren { head: Head::StatementList, expected, found }
                    };
                    push_issue(tree, path, kind);
                    break;
                }
            }
            other => {
                push_issue(
                    tree,
                    path,
                    IssueKind::WrongContent { slot: SlotKind::StmtTail, found: describe(other) },
                );
                break;
            }
        }
    }
    path.truncate(base);
}

fn walk(s: &SExpr, slot: SlotKind, path: &mut Vec<usize>, tree: &mut PartialTree) {
    match s {
        SExpr::Atom(Atom::Hole(k)) => {
            tree.holes.push(HoleSite { index: *k, slot });
        }
        SExpr::Atom(Atom::Ellipsis) => push_issue(tree, path, IssueKind::StrayEllipsis),
        SExpr::Atom(atom) => {
            if !atom_fits(atom, slot) {
                push_issue(
                    tree,
                    path,
                    IssueKind::WrongContent { slot, found: describe(s) },
                );
            }
        }
        SExpr::Epsilon => {
            if !matches!(
                slot,
                SlotKind::StmtTail
                    | SlotKind::ExprTail
                    | SlotKind::KvTail
                    | SlotKind::IdTail
                    | SlotKind::ParamList
            ) {
                push_issue(
                    tree,
                    path,
                    IssueKind::WrongContent { slot, found: describe(s) },
                );
            }
        }
        SExpr::App(head, children) => {
            if !head_fits(*head, slot) {
                push_issue(
                    tree,
                    path,
                    IssueKind::WrongContent { slot, found: describe(s) },
                );
                // keep walking anyway so inner problems still surface
            }
            let expected = head.arity();
            if children.len() < expected {
                push_issue(
                    tree,
                    path,
                    IssueKind::MissingChildren { head: *head, expected, found: children.len() },
                );
            } else if children.len() > expected {
                push_issue(
                    tree,
                    path,
                    IssueKind::ExtraChildren { head: *head, expected, found: children.len() },
                );
            }
            for (i, (child, child_slot)) in children.iter().zip(head.slots()).enumerate() {
                path.push(i);
                match child_slot {
                    SlotKind::Suite | SlotKind::StmtTail => walk_spine(child, false, path, tree),
                    _ => walk(child, *child_slot, path, tree),
                }
                path.pop();
            }
        }
    }
}

fn atom_fits(atom: &Atom, slot: SlotKind) -> bool {
    match slot {
        SlotKind::Expr | SlotKind::LazyExpr => matches!(
            atom,
            Atom::Int(_) | Atom::Ident(_) | Atom::Bool(_) | Atom::EvalInput
        ),
        SlotKind::Target | SlotKind::IdentSlot => matches!(atom, Atom::Ident(_)),
        SlotKind::Operator => matches!(atom, Atom::Op(_)),
        SlotKind::Stmt
        | SlotKind::StmtTail
        | SlotKind::ExprTail
        | SlotKind::KvTail
        | SlotKind::IdTail
        | SlotKind::ParamList
        | SlotKind::KvPair
        | SlotKind::Suite => false,
    }
}

fn head_fits(head: Head, slot: SlotKind) -> bool {
    match slot {
        SlotKind::Expr | SlotKind::LazyExpr => head.is_expression(),
        SlotKind::Target => head == Head::Subscript,
        SlotKind::Stmt => head.is_statement(),
        SlotKind::StmtTail | SlotKind::Suite => head == Head::StatementList,
        SlotKind::ExprTail => head == Head::ExprList,
        SlotKind::KvTail => head == Head::KvList,
        SlotKind::KvPair => head == Head::Kv,
        SlotKind::IdTail | SlotKind::ParamList => head == Head::IdList,
        SlotKind::IdentSlot | SlotKind::Operator => false,
    }
}

fn describe(s: &SExpr) -> String {
    use alloc::string::ToString;
    match s {
        SExpr::Epsilon => "eps".into(),
        SExpr::Atom(a) => a.to_string(),
        SExpr::App(head, _) => alloc::format!("({} ..)", head.name()),
    }
}

/// A candidate body reconstructed as real syntax, holes readable as
/// `_param{k}` references.
#[derive(Debug, Clone, PartialEq)]
pub enum BodyAst {
    /// One or more whole statements; `open_tail` means the original match
    /// covers a prefix of a spine and the remainder stays at the call site.
    Stmts { stmts: Vec<Stmt>, open_tail: bool },
    /// A single expression.
    Expr(Expr),
}

impl BodyAst {
    pub fn size(&self) -> usize {
        match self {
            BodyAst::Stmts { stmts, .. } => stmts.iter().map(|s| s.size()).sum(),
            BodyAst::Expr(e) => e.size(),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BodyError {
    #[error("body does not reconstruct into valid syntax")]
    Invalid(PartialTree),
}

/// Reconstruct a candidate body (statement spine or expression) with holes
/// as parameter references.
pub fn body_ast(s: &SExpr) -> Result<BodyAst, BodyError> {
    let invalid = || BodyError::Invalid(analyze(s));
    match s {
        SExpr::App(Head::StatementList, _) => {
            let (stmts, open_tail) =
                to_stmts(s, HolePolicy::AsParams).map_err(|_| invalid())?;
            Ok(BodyAst::Stmts { stmts, open_tail })
        }
        _ => {
            let e = to_expr(s, HolePolicy::AsParams).map_err(|_| invalid())?;
            Ok(BodyAst::Expr(e))
        }
    }
}
