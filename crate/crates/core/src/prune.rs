//! Candidate pruning: reject search results that cannot become valid P2
//! functions. Three structural checks plus the rule against abstractions
//! that call previously learned ones. Verdicts are order-insensitive;
//! statistics attribute each rejection to the first failing check in the
//! fixed order macro-like, parameters, size, calls-learned.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;

use crate::search::Candidate;
use crate::sexpr::{analyze, body_ast, Atom, Head, IssueKind, SExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneReason {
    /// The body is an incomplete AST fragment, e.g. an operator missing an
    /// operand; only meaningful under textual substitution.
    MacroLike,
    /// A hole sits where an arbitrary expression argument is illegal: an
    /// operator slot, an assignment target, a statement or spine-tail
    /// position, a parameter list, or a short-circuited operand.
    InvalidParameter,
    TooSmall,
    CallsLearnedAbstraction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneVerdict {
    pub kept: bool,
    pub reason: Option<PruneReason>,
    pub detail: Option<String>,
}

impl PruneVerdict {
    pub fn kept() -> Self {
        PruneVerdict { kept: true, reason: None, detail: None }
    }

    pub fn rejected(reason: PruneReason, detail: String) -> Self {
        PruneVerdict { kept: false, reason: Some(reason), detail: Some(detail) }
    }
}

/// Rejection tallies for a whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PruneStats {
    pub macro_like: u64,
    pub invalid_parameter: u64,
    pub too_small: u64,
    pub calls_abstraction: u64,
}

impl PruneStats {
    pub fn record(&mut self, reason: PruneReason) {
        match reason {
            PruneReason::MacroLike => self.macro_like += 1,
            PruneReason::InvalidParameter => self.invalid_parameter += 1,
            PruneReason::TooSmall => self.too_small += 1,
            PruneReason::CallsLearnedAbstraction => self.calls_abstraction += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.macro_like + self.invalid_parameter + self.too_small + self.calls_abstraction
    }
}

/// Reject bodies that do not reconstruct into complete syntax: missing
/// required children, wrong-kinded children, or an open tail anywhere but
/// the root spine.
pub fn check_macro_like(c: &Candidate) -> PruneVerdict {
    verdict_macro_like(&c.pattern.body)
}

pub(crate) fn verdict_macro_like(body: &SExpr) -> PruneVerdict {
    let tree = analyze(body);
    match tree.issues.first() {
        None => PruneVerdict::kept(),
        Some(issue) => {
            let what = match &issue.kind {
                IssueKind::MissingChildren { head, expected, found } => {
                    format!("`{}` needs {expected} children, found {found}", head.name())
                }
                IssueKind::ExtraChildren { head, expected, found } => {
                    format!("`{}` takes {expected} children, found {found}", head.name())
                }
                IssueKind::WrongContent { found, .. } => {
                    format!("{found} cannot appear in this position")
                }
                IssueKind::StrayEllipsis => "open tail outside the root spine".into(),
            };
            PruneVerdict::rejected(
                PruneReason::MacroLike,
                format!("at path {:?}: {what}", issue.path),
            )
        }
    }
}

/// Reject candidates with a hole in a non-expression position.
pub fn check_parameters(c: &Candidate) -> PruneVerdict {
    verdict_parameters(&c.pattern.body)
}

pub(crate) fn verdict_parameters(body: &SExpr) -> PruneVerdict {
    let tree = analyze(body);
    let misplaced = tree.misplaced_holes().next().copied();
    match misplaced {
        None => PruneVerdict::kept(),
        Some(hole) => PruneVerdict::rejected(
            PruneReason::InvalidParameter,
            format!("hole #{} occupies a {:?} slot", hole.index, hole.slot),
        ),
    }
}

/// Reject bodies below the minimum size; holes count one node each, the
/// way they will once promoted to parameter references.
pub fn check_size(c: &Candidate, min_size: usize) -> PruneVerdict {
    verdict_size(&c.pattern.body, min_size)
}

pub(crate) fn verdict_size(body: &SExpr, min_size: usize) -> PruneVerdict {
    let size = match body_ast(body) {
        Ok(b) => b.size(),
        // not reconstructable; approximate so the verdict stays defined
        Err(_) => raw_node_count(body),
    };
    if size < min_size {
        PruneVerdict::rejected(
            PruneReason::TooSmall,
            format!("body has {size} nodes, minimum is {min_size}"),
        )
    } else {
        PruneVerdict::kept()
    }
}

fn raw_node_count(s: &SExpr) -> usize {
    let mut n = 0;
    s.walk(&mut |node| match node {
        SExpr::App(head, _) => {
            if !matches!(head, Head::StatementList | Head::ExprList | Head::KvList | Head::Kv | Head::IdList) {
                n += 1;
            }
        }
        SExpr::Atom(Atom::Op(_)) | SExpr::Epsilon => {}
        SExpr::Atom(_) => n += 1,
    });
    n
}

/// Reject bodies that call a learned abstraction, whether from this run or
/// (recognized by the `_leroy_fn` naming) an earlier one.
pub fn check_calls_learned(c: &Candidate, learned: &BTreeSet<String>) -> PruneVerdict {
    verdict_calls_learned(&c.pattern.body, learned)
}

pub(crate) fn verdict_calls_learned(body: &SExpr, learned: &BTreeSet<String>) -> PruneVerdict {
    let mut called: Option<String> = None;
    body.walk(&mut |node| {
        if called.is_some() {
            return;
        }
        if let SExpr::App(Head::Call, children) = node {
            if let Some(SExpr::Atom(Atom::Ident(name))) = children.first() {
                if learned.contains(name) || crate::closing::is_own_output_ident(name) {
                    called = Some(name.clone());
                }
            }
        }
    });
    match called {
        None => PruneVerdict::kept(),
        Some(name) => PruneVerdict::rejected(
            PruneReason::CallsLearnedAbstraction,
            format!("body calls learned abstraction `{name}`"),
        ),
    }
}

/// All checks in attribution order, recording the first failure.
pub fn run_checks(
    c: &Candidate,
    min_size: usize,
    learned: &BTreeSet<String>,
    stats: &mut PruneStats,
) -> PruneVerdict {
    let verdict = check_macro_like(c);
    if !verdict.kept {
        stats.record(PruneReason::MacroLike);
        return verdict;
    }
    let verdict = check_parameters(c);
    if !verdict.kept {
        stats.record(PruneReason::InvalidParameter);
        return verdict;
    }
    let verdict = check_size(c, min_size);
    if !verdict.kept {
        stats.record(PruneReason::TooSmall);
        return verdict;
    }
    let verdict = check_calls_learned(c, learned);
    if !verdict.kept {
        stats.record(PruneReason::CallsLearnedAbstraction);
        return verdict;
    }
    PruneVerdict::kept()
}
