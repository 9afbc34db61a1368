//! Call-site validation, corpus rewriting, and compression metrics.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::closing::{ClosedAbstraction, ReturnPlan};
use crate::p2::{self, ast_size, Expr, ExprKind, Program, Stmt, StmtKind};
use crate::prune::PruneStats;
use crate::search::MatchSite;
use crate::sexpr::{delispify, Head, SExpr};

/// Name used for the temporary holding a multi-value return before
/// unpacking. The `_leroy` prefix is reserved; corpora using it are
/// rejected at ingest.
pub const UNPACK_TMP: &str = "_leroy_tmp";

/// Outcome of checking one call site for name capture: if any identifier in
/// an argument is also referenced in the callee body, the argument would be
/// re-evaluated under a different binding and the site must stay as it is.
#[derive(Debug, Clone, PartialEq)]
pub struct CallSiteCheck {
    pub argument_names: BTreeSet<String>,
    pub body_names: BTreeSet<String>,
    /// `None` accepts the site; `Some(name)` names the clash.
    pub clash: Option<String>,
}

impl CallSiteCheck {
    pub fn accepted(&self) -> bool {
        self.clash.is_none()
    }
}

pub fn validate_call_site(a: &ClosedAbstraction, s: &MatchSite) -> CallSiteCheck {
    let mut argument_names = BTreeSet::new();
    for binding in &s.bindings {
        binding.collect_idents(&mut argument_names);
    }
    let body_names = a.body_names();
    let clash = argument_names.intersection(&body_names).next().cloned();
    CallSiteCheck { argument_names, body_names, clash }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RewriteError {
    #[error("site path does not lead to a statement spine in program {program}")]
    BadSitePath { program: usize },
    #[error("site bindings do not match the abstraction arity")]
    ArityMismatch,
    #[error("rewritten program {program} failed to re-parse: {message}")]
    Reparse { program: usize, message: String },
}

/// Apply a closed abstraction at its validated sites. Statement-spine sites
/// are replaced by a call statement (plus unpacking assignments when the
/// site needs returned values) followed by the unmatched remainder;
/// expression sites are replaced in place by the call expression.
///
/// `live_out_per_site` runs parallel to `sites` and drives per-site
/// unpacking: a site only unpacks the values it actually reads later.
pub fn apply(
    a: &ClosedAbstraction,
    sites: &[MatchSite],
    live_out_per_site: &[BTreeSet<String>],
    terms: &[SExpr],
) -> Result<Vec<SExpr>, RewriteError> {
    let hole_params = a
        .params
        .iter()
        .take_while(|p| p.starts_with("_param"))
        .count();
    let live_ins: &[String] = &a.params[hole_params..];

    let mut out: Vec<SExpr> = terms.to_vec();

    // splice deepest-first so earlier sites' paths stay valid
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by(|&i, &j| {
        (sites[j].program, &sites[j].path).cmp(&(sites[i].program, &sites[i].path))
    });

    for idx in order {
        let site = &sites[idx];
        if site.bindings.len() != hole_params {
            return Err(RewriteError::ArityMismatch);
        }
        let live_out = live_out_per_site.get(idx).cloned().unwrap_or_default();
        let call = call_term(a, site, live_ins);
        let program_term = &mut out[site.program];
        match site.covered {
            None => {
                let Some(node) = program_term.at_path_mut(&site.path) else {
                    return Err(RewriteError::BadSitePath { program: site.program });
                };
                *node = call;
            }
            Some(covered) => {
                let Some(node) = program_term.at_path_mut(&site.path) else {
                    return Err(RewriteError::BadSitePath { program: site.program });
                };
                if !matches!(node, SExpr::App(Head::StatementList, _)) {
                    return Err(RewriteError::BadSitePath { program: site.program });
                }
                let mut remainder = node.clone();
                for _ in 0..covered {
                    remainder = match remainder.child(1) {
                        Some(t) => t.clone(),
                        None => return Err(RewriteError::BadSitePath { program: site.program }),
                    };
                }
                let stmts = call_statements(a, call, &live_out);
                let mut spine = remainder;
                for stmt in stmts.into_iter().rev() {
                    spine = SExpr::app(Head::StatementList, alloc::vec![stmt, spine]);
                }
                *node = spine;
            }
        }
    }

    for (i, term) in out.iter().enumerate() {
        reparse_check(term, i)?;
    }
    Ok(out)
}

/// `(call name (exprlist ..))` with hole bindings first, then live-in names.
fn call_term(a: &ClosedAbstraction, site: &MatchSite, live_ins: &[String]) -> SExpr {
    let mut args = SExpr::Epsilon;
    for name in live_ins.iter().rev() {
        args = SExpr::app(
            Head::ExprList,
            alloc::vec![SExpr::ident(name.clone()), args],
        );
    }
    for binding in site.bindings.iter().rev() {
        args = SExpr::app(Head::ExprList, alloc::vec![binding.clone(), args]);
    }
    SExpr::app(Head::Call, alloc::vec![SExpr::ident(a.name.clone()), args])
}

/// Statement-site replacement for one call, honoring the return plan and
/// the site's own live-out needs.
fn call_statements(a: &ClosedAbstraction, call: SExpr, live_out: &BTreeSet<String>) -> Vec<SExpr> {
    let assign = |target: SExpr, value: SExpr| SExpr::app(Head::Assign, alloc::vec![target, value]);
    let subscript = |obj: SExpr, i: i64| {
        SExpr::app(Head::Subscript, alloc::vec![obj, SExpr::int(i)])
    };
    match &a.return_plan {
        ReturnPlan::Single(name) if live_out.contains(name) => {
            alloc::vec![assign(SExpr::ident(name.clone()), call)]
        }
        ReturnPlan::Multiple(names) => {
            let needed: Vec<(usize, &String)> = names
                .iter()
                .enumerate()
                .filter(|(_, n)| live_out.contains(*n))
                .collect();
            match needed.len() {
                0 => alloc::vec![SExpr::app(Head::ExprStmt, alloc::vec![call])],
                1 => {
                    let (i, name) = needed[0];
                    alloc::vec![assign(SExpr::ident(name.clone()), subscript(call, i as i64))]
                }
                _ => {
                    let mut stmts =
                        alloc::vec![assign(SExpr::ident(UNPACK_TMP), call)];
                    for (i, name) in needed {
                        stmts.push(assign(
                            SExpr::ident(name.clone()),
                            subscript(SExpr::ident(UNPACK_TMP), i as i64),
                        ));
                    }
                    stmts
                }
            }
        }
        _ => alloc::vec![SExpr::app(Head::ExprStmt, alloc::vec![call])],
    }
}

fn reparse_check(term: &SExpr, program: usize) -> Result<(), RewriteError> {
    let ast = delispify(term)
        .map_err(|e| RewriteError::Reparse { program, message: alloc::format!("{e}") })?;
    let text = p2::unparse(&ast);
    match p2::parse_program(&text) {
        Ok(back) if back == ast => Ok(()),
        Ok(_) => Err(RewriteError::Reparse {
            program,
            message: "reparse produced a different tree".into(),
        }),
        Err(e) => Err(RewriteError::Reparse { program, message: alloc::format!("{e}") }),
    }
}

/// Exact rational quantities in the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbstractionInfo {
    pub name: String,
    pub body_nodes: usize,
    pub params: Vec<String>,
    /// Names returned by the function; empty when it returns its trailing
    /// expression.
    pub returns: Vec<String>,
    pub sites_applied: usize,
}

/// Per-run compression metrics. All node counts are recomputed from the
/// final ASTs, never accumulated incrementally.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionReport {
    pub original_nodes: usize,
    pub rewritten_nodes_excl_library: usize,
    pub rewritten_nodes_incl_library: usize,
    /// original : rewritten (library excluded).
    pub ratio_excl: Ratio,
    /// Relative growth once the library is counted:
    /// (rewritten + library - original) / original.
    pub growth_incl: Ratio,
    pub abstractions: Vec<AbstractionInfo>,
    pub prune_stats: PruneStats,
    pub rejected_call_sites: u64,
}

pub fn measure(
    before: &[Program],
    after: &[Program],
    library: &[ClosedAbstraction],
    prune_stats: PruneStats,
    rejected_call_sites: u64,
) -> CompressionReport {
    let original_nodes: usize = before.iter().map(ast_size).sum();
    let rewritten_nodes_excl_library: usize = after.iter().map(ast_size).sum();
    let library_nodes: usize = library.iter().map(|a| a.def_stmt().size()).sum();
    let rewritten_nodes_incl_library = rewritten_nodes_excl_library + library_nodes;

    let abstractions = library
        .iter()
        .map(|a| AbstractionInfo {
            name: a.name.clone(),
            body_nodes: a.body_size(),
            params: a.params.clone(),
            returns: match &a.return_plan {
                ReturnPlan::Single(n) => alloc::vec![n.clone()],
                ReturnPlan::Multiple(ns) => ns.clone(),
                ReturnPlan::LastExpr => Vec::new(),
            },
            sites_applied: after.iter().map(|p| count_calls(p, &a.name)).sum(),
        })
        .collect();

    CompressionReport {
        original_nodes,
        rewritten_nodes_excl_library,
        rewritten_nodes_incl_library,
        ratio_excl: Ratio {
            num: original_nodes as i64,
            den: rewritten_nodes_excl_library.max(1) as i64,
        },
        growth_incl: Ratio {
            num: rewritten_nodes_incl_library as i64 - original_nodes as i64,
            den: original_nodes.max(1) as i64,
        },
        abstractions,
        prune_stats,
        rejected_call_sites,
    }
}

/// Number of `name(..)` call expressions in a program.
pub fn count_calls(p: &Program, name: &str) -> usize {
    fn in_expr(e: &Expr, name: &str) -> usize {
        let sub: usize = match &e.kind {
            ExprKind::Neg(x) | ExprKind::Not(x) | ExprKind::PrintCall(x) => in_expr(x, name),
            ExprKind::Add(l, r)
            | ExprKind::And(l, r)
            | ExprKind::Or(l, r)
            | ExprKind::Eq(l, r)
            | ExprKind::NotEq(l, r)
            | ExprKind::Is(l, r) => in_expr(l, name) + in_expr(r, name),
            ExprKind::Ternary { then_val, cond, or_else } => {
                in_expr(then_val, name) + in_expr(cond, name) + in_expr(or_else, name)
            }
            ExprKind::List(items) => items.iter().map(|i| in_expr(i, name)).sum(),
            ExprKind::Dict(pairs) => {
                pairs.iter().map(|(k, v)| in_expr(k, name) + in_expr(v, name)).sum()
            }
            ExprKind::Subscript { object, index } => {
                in_expr(object, name) + in_expr(index, name)
            }
            ExprKind::Call { callee, args } => {
                in_expr(callee, name)
                    + args.iter().map(|a| in_expr(a, name)).sum::<usize>()
            }
            _ => 0,
        };
        let own = matches!(&e.kind, ExprKind::Call { callee, .. }
            if matches!(&callee.kind, ExprKind::Name(n) if n == name));
        sub + own as usize
    }
    fn in_stmt(s: &Stmt, name: &str) -> usize {
        match &s.kind {
            StmtKind::Print(e) | StmtKind::Expr(e) | StmtKind::Return(e) => in_expr(e, name),
            StmtKind::Assign { target, value } => {
                let t = match &target.kind {
                    p2::TargetKind::Name(_) => 0,
                    p2::TargetKind::Subscript(o, i) => in_expr(o, name) + in_expr(i, name),
                };
                t + in_expr(value, name)
            }
            StmtKind::FunctionDef { suite, .. } => suite.iter().map(|s| in_stmt(s, name)).sum(),
        }
    }
    p.body.iter().map(|s| in_stmt(s, name)).sum()
}
