//! Closing: promote a pruned candidate into a real function.
//!
//! A candidate body is a fragment cut out of its surroundings, so it may
//! read variables it never defines and its assignments vanish into the
//! callee's local scope. Liveness analysis over each call site supplies the
//! fix: free variables become extra parameters, and variables that are
//! assigned in the body and read after some site become return values. With
//! no live-outs the function falls back to returning the last variable or
//! expression.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::p2::{Expr, ExprKind, Program, Stmt, StmtKind, TargetKind};
use crate::search::{Candidate, MatchSite};
use crate::sexpr::{body_ast, hole_param_name, Atom, BodyAst, SExpr};

/// What the body reads and writes, and which writes escape each site.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LivenessFacts {
    /// Names read before any assignment to them, in first-use order; these
    /// are assumed to exist in the calling scope and become parameters.
    pub live_in: Vec<String>,
    /// Names assigned anywhere in the body (subscript writes count as a
    /// write to the base name).
    pub assigned: BTreeSet<String>,
    /// Per site, the assigned names that are read after the site in its
    /// enclosing program.
    pub live_out_per_site: Vec<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReturnPlan {
    /// `return name`; call sites that need the value assign it back.
    Single(String),
    /// `return [a, b, ..]`; call sites unpack the needed indices by
    /// subscription.
    Multiple(Vec<String>),
    /// The trailing statement's expression is returned in place
    /// (`return print(..)`, `return a[i]`, or an expression body).
    LastExpr,
}

/// A candidate promoted to a real P2 function.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedAbstraction {
    pub name: String,
    /// `_param0..` for the holes in first-occurrence order, then live-in
    /// names in first-use order.
    pub params: Vec<String>,
    /// Function suite including the trailing return.
    pub body: Vec<Stmt>,
    pub return_plan: ReturnPlan,
}

impl ClosedAbstraction {
    /// The emitted `def`.
    pub fn def_stmt(&self) -> Stmt {
        Stmt::new(StmtKind::FunctionDef {
            name: self.name.clone(),
            params: self.params.clone(),
            suite: self.body.clone(),
        })
    }

    /// Node count of the function suite.
    pub fn body_size(&self) -> usize {
        self.body.iter().map(|s| s.size()).sum()
    }

    /// Every identifier referenced or bound in the closed body, parameters
    /// included. Call-site validation checks argument names against this.
    pub fn body_names(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> = self.params.iter().cloned().collect();
        for stmt in &self.body {
            collect_stmt_idents(stmt, &mut names);
        }
        names
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ClosureFailure {
    #[error("candidate body contains a `return` statement")]
    BodyHasReturn,
    #[error("candidate body contains a function definition")]
    BodyHasDef,
    #[error("candidate uses reserved identifier `{0}`")]
    ReservedName(String),
    #[error("candidate body is empty")]
    EmptyBody,
    #[error("candidate body does not reconstruct")]
    Unreconstructable,
}

/// True for names the rewriter reserves for itself: synthesized parameter
/// names and everything prefixed `_leroy`.
pub fn is_reserved_ident(name: &str) -> bool {
    if let Some(rest) = name.strip_prefix("_param") {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return true;
        }
    }
    name.starts_with("_leroy")
}

/// Reserved names the rewriter itself emits: learned function names and the
/// unpacking temporary. A rewritten corpus contains these and may be fed
/// back in.
pub fn is_own_output_ident(name: &str) -> bool {
    if name == crate::rewrite::UNPACK_TMP {
        return true;
    }
    name.strip_prefix("_leroy_fn")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Straight-line liveness for a candidate over its match sites. Supported
/// P2 has no loops or branch statements, so one forward pass per scope
/// suffices; ternaries and boolean operators read all their operands.
pub fn analyze_liveness(c: &Candidate, corpus: &[Program]) -> LivenessFacts {
    let Ok(body) = body_ast(&c.pattern.body) else {
        return LivenessFacts::default();
    };
    let (live_in, assigned) = body_flows(&body);

    let mut live_out_per_site = Vec::with_capacity(c.sites.len());
    for site in &c.sites {
        live_out_per_site.push(site_live_out(site, corpus, &assigned));
    }
    LivenessFacts { live_in, assigned, live_out_per_site }
}

/// Live-in (first-use order, hole parameters excluded) and assigned sets of
/// a body fragment.
fn body_flows(body: &BodyAst) -> (Vec<String>, BTreeSet<String>) {
    let mut live_in: Vec<String> = Vec::new();
    let mut assigned: BTreeSet<String> = BTreeSet::new();
    let note_use = |name: &String, assigned: &BTreeSet<String>, live_in: &mut Vec<String>| {
        if !assigned.contains(name)
            && !is_hole_param(name)
            && !live_in.iter().any(|n| n == name)
        {
            live_in.push(name.clone());
        }
    };
    match body {
        BodyAst::Expr(e) => {
            let mut uses = Vec::new();
            expr_reads(e, &mut uses);
            for u in &uses {
                note_use(u, &assigned, &mut live_in);
            }
        }
        BodyAst::Stmts { stmts, .. } => {
            for stmt in stmts {
                let (uses, defs) = stmt_flows(stmt);
                for u in &uses {
                    note_use(u, &assigned, &mut live_in);
                }
                assigned.extend(defs);
            }
        }
    }
    (live_in, assigned)
}

fn is_hole_param(name: &str) -> bool {
    name.strip_prefix("_param")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

fn site_live_out(
    site: &MatchSite,
    corpus: &[Program],
    assigned: &BTreeSet<String>,
) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if assigned.is_empty() {
        return out;
    }
    let Some(covered) = site.covered else {
        return out; // expression sites assign nothing
    };
    let Some(program) = corpus.get(site.program) else {
        return out;
    };
    let Some((stmts, start, in_def)) = locate_spine(program, &site.path) else {
        return out;
    };
    let rest = &stmts[(start + covered).min(stmts.len())..];
    let global_free = if in_def { BTreeSet::new() } else { functions_free_reads(program) };
    for name in assigned {
        if read_before_write(name, rest) || global_free.contains(name) {
            out.insert(name.clone());
        }
    }
    out
}

/// Follow an encoded-tree path into the program, as long as it stays on
/// statement spines (`0` = statement, `1` = tail, `2` on a def = suite).
/// Returns the enclosing statement list, the statement index the path ends
/// at, and whether that list is a function suite.
pub(crate) fn locate_spine<'p>(
    program: &'p Program,
    path: &[usize],
) -> Option<(&'p [Stmt], usize, bool)> {
    let mut stmts: &'p [Stmt] = &program.body;
    let mut pos = 0usize;
    let mut in_def = false;
    let mut at_stmt: Option<&'p Stmt> = None;
    for &step in path {
        match at_stmt {
            None => match step {
                0 => at_stmt = Some(stmts.get(pos)?),
                1 => pos += 1,
                _ => return None,
            },
            Some(stmt) => match (&stmt.kind, step) {
                (StmtKind::FunctionDef { suite, .. }, 2) => {
                    stmts = suite;
                    pos = 0;
                    in_def = true;
                    at_stmt = None;
                }
                _ => return None,
            },
        }
    }
    match at_stmt {
        None => Some((stmts, pos, in_def)),
        Some(_) => None,
    }
}

/// Names read by expressions, in textual order.
pub(crate) fn expr_reads(e: &Expr, out: &mut Vec<String>) {
    match &e.kind {
        ExprKind::Name(id) => out.push(id.clone()),
        ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::EvalInput => {}
        ExprKind::Neg(x) | ExprKind::Not(x) | ExprKind::PrintCall(x) => expr_reads(x, out),
        ExprKind::Add(l, r)
        | ExprKind::And(l, r)
        | ExprKind::Or(l, r)
        | ExprKind::Eq(l, r)
        | ExprKind::NotEq(l, r)
        | ExprKind::Is(l, r) => {
            expr_reads(l, out);
            expr_reads(r, out);
        }
        ExprKind::Ternary { then_val, cond, or_else } => {
            expr_reads(then_val, out);
            expr_reads(cond, out);
            expr_reads(or_else, out);
        }
        ExprKind::List(items) => items.iter().for_each(|i| expr_reads(i, out)),
        ExprKind::Dict(pairs) => {
            for (k, v) in pairs {
                expr_reads(k, out);
                expr_reads(v, out);
            }
        }
        ExprKind::Subscript { object, index } => {
            expr_reads(object, out);
            expr_reads(index, out);
        }
        ExprKind::Call { callee, args } => {
            expr_reads(callee, out);
            args.iter().for_each(|a| expr_reads(a, out));
        }
    }
}

/// (uses, defs) of one statement. Subscript assignment reads the base and
/// the index, and counts as a write to the base name. A `def` defines its
/// name; its suite runs later and is handled by [`functions_free_reads`].
pub(crate) fn stmt_flows(stmt: &Stmt) -> (Vec<String>, Vec<String>) {
    let mut uses = Vec::new();
    let mut defs = Vec::new();
    match &stmt.kind {
        StmtKind::Print(e) | StmtKind::Expr(e) | StmtKind::Return(e) => expr_reads(e, &mut uses),
        StmtKind::Assign { target, value } => {
            expr_reads(value, &mut uses);
            match &target.kind {
                TargetKind::Name(id) => defs.push(id.clone()),
                TargetKind::Subscript(o, i) => {
                    expr_reads(o, &mut uses);
                    expr_reads(i, &mut uses);
                    if let Some(base) = target.base_name() {
                        defs.push(base.into());
                    }
                }
            }
        }
        StmtKind::FunctionDef { name, .. } => defs.push(name.clone()),
    }
    (uses, defs)
}

fn read_before_write(name: &str, rest: &[Stmt]) -> bool {
    for stmt in rest {
        let (uses, defs) = stmt_flows(stmt);
        if uses.iter().any(|u| u == name) {
            return true;
        }
        if defs.iter().any(|d| d == name) {
            return false;
        }
    }
    false
}

/// Union of free-variable reads across all function suites in a program.
/// A function may be called at any later point, so any global it reads is
/// conservatively live after every top-level site.
pub(crate) fn functions_free_reads(program: &Program) -> BTreeSet<String> {
    let mut free = BTreeSet::new();
    for stmt in &program.body {
        if let StmtKind::FunctionDef { params, suite, .. } = &stmt.kind {
            let mut locals: BTreeSet<String> = params.iter().cloned().collect();
            for s in suite {
                let (uses, defs) = stmt_flows(s);
                for u in uses {
                    if !locals.contains(&u) {
                        free.insert(u);
                    }
                }
                locals.extend(defs);
            }
        }
    }
    free
}

/// Promote a candidate into a named function with the return plan implied
/// by its liveness facts.
pub fn close(
    c: &Candidate,
    facts: &LivenessFacts,
    name: String,
) -> Result<ClosedAbstraction, ClosureFailure> {
    // reserved spellings in the original body would collide with the
    // parameter names and temporaries the rewriter synthesizes
    let mut pattern_idents = BTreeSet::new();
    c.pattern.body.collect_idents(&mut pattern_idents);
    if let Some(bad) = pattern_idents.iter().find(|n| is_reserved_ident(n)) {
        return Err(ClosureFailure::ReservedName(bad.clone()));
    }

    let body = body_ast(&c.pattern.body).map_err(|_| ClosureFailure::Unreconstructable)?;
    let mut params: Vec<String> = (0..c.pattern.arity).map(hole_param_name).collect();
    params.extend(facts.live_in.iter().cloned());

    let (mut stmts, is_expr_body) = match body {
        BodyAst::Expr(e) => (alloc::vec![Stmt::new(StmtKind::Return(e))], true),
        BodyAst::Stmts { stmts, .. } => (stmts, false),
    };
    if stmts.is_empty() {
        return Err(ClosureFailure::EmptyBody);
    }
    for stmt in &stmts {
        match stmt.kind {
            StmtKind::Return(_) if !is_expr_body => return Err(ClosureFailure::BodyHasReturn),
            StmtKind::FunctionDef { .. } => return Err(ClosureFailure::BodyHasDef),
            _ => {}
        }
    }

    let mut union: BTreeSet<String> = BTreeSet::new();
    for site_out in &facts.live_out_per_site {
        union.extend(site_out.iter().cloned());
    }

    let return_plan = if is_expr_body {
        ReturnPlan::LastExpr
    } else if union.is_empty() {
        // no variable escapes: return the last variable or expression
        let last = stmts.pop().expect("non-empty body");
        match last.kind {
            StmtKind::Print(e) => {
                stmts.push(Stmt::new(StmtKind::Return(Expr::new(ExprKind::PrintCall(
                    Box::new(e),
                )))));
                ReturnPlan::LastExpr
            }
            StmtKind::Expr(e) => {
                stmts.push(Stmt::new(StmtKind::Return(e)));
                ReturnPlan::LastExpr
            }
            StmtKind::Assign { target, value } => {
                let ret = target.as_expr();
                let plan = match &target.kind {
                    TargetKind::Name(id) => ReturnPlan::Single(id.clone()),
                    TargetKind::Subscript(..) => ReturnPlan::LastExpr,
                };
                stmts.push(Stmt::new(StmtKind::Assign { target, value }));
                stmts.push(Stmt::new(StmtKind::Return(ret)));
                plan
            }
            StmtKind::Return(_) | StmtKind::FunctionDef { .. } => unreachable!(),
        }
    } else if union.len() == 1 {
        let name = union.iter().next().unwrap().clone();
        stmts.push(Stmt::new(StmtKind::Return(Expr::name(name.clone()))));
        ReturnPlan::Single(name)
    } else {
        let names: Vec<String> = union.into_iter().collect();
        let items = names.iter().map(|n| Expr::name(n.clone())).collect();
        stmts.push(Stmt::new(StmtKind::Return(Expr::new(ExprKind::List(items)))));
        ReturnPlan::Multiple(names)
    };

    Ok(ClosedAbstraction { name, params, body: stmts, return_plan })
}

fn collect_stmt_idents(stmt: &Stmt, out: &mut BTreeSet<String>) {
    let (uses, defs) = stmt_flows(stmt);
    out.extend(uses);
    out.extend(defs);
    if let StmtKind::FunctionDef { params, suite, .. } = &stmt.kind {
        out.extend(params.iter().cloned());
        for s in suite {
            collect_stmt_idents(s, out);
        }
    }
    // target subscription bases are already in defs; names inside target
    // index expressions are in uses
    if let StmtKind::Assign { target, .. } = &stmt.kind {
        if let TargetKind::Name(id) = &target.kind {
            out.insert(id.clone());
        }
    }
}

/// True if the candidate body can be closed at all; used by the search to
/// skip candidates that closing would have to drop.
pub fn closable(body: &SExpr) -> bool {
    let mut bad = false;
    body.walk(&mut |n| {
        match n {
            SExpr::App(crate::sexpr::Head::Return, _)
            | SExpr::App(crate::sexpr::Head::Def, _) => bad = true,
            SExpr::Atom(Atom::Ident(id)) if is_reserved_ident(id) => bad = true,
            _ => {}
        }
    });
    !bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p2::{parse_program, unparse_stmt};
    use crate::search::{find_matches, Pattern};
    use crate::sexpr::parse_sexpr;

    fn candidate_on(corpus: &[&str], pattern: &str) -> (Candidate, Vec<Program>) {
        let programs: Vec<Program> = corpus.iter().map(|s| parse_program(s).unwrap()).collect();
        let terms: Vec<_> = programs.iter().map(crate::sexpr::lispify).collect();
        let pattern = Pattern::from_sexpr(parse_sexpr(pattern).unwrap());
        let sites = find_matches(&pattern, &terms);
        let c = Candidate { pattern, sites, utility: 0 };
        (c, programs)
    }

    #[test]
    fn assigned_variable_read_after_site_is_live_out() {
        let (c, programs) = candidate_on(
            &["x = 5 + 1\nprint(x)\n"],
            "(StatementList (assign x (add #0 1)) ...)",
        );
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        assert!(facts.live_in.is_empty());
        assert_eq!(facts.assigned.len(), 1);
        assert!(facts.live_out_per_site[0].contains("x"));
    }

    #[test]
    fn trailing_print_falls_back_to_returning_the_print() {
        let (c, programs) = candidate_on(
            &["b = 2\na = 1\nprint(b + a)\n"],
            "(StatementList (assign b #0) (StatementList (assign a #1) \
             (StatementList (print (add b a)) eps)))",
        );
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        assert!(facts.live_out_per_site[0].is_empty());
        let closed = close(&c, &facts, "f".into()).unwrap();
        assert_eq!(closed.return_plan, ReturnPlan::LastExpr);
        let last = closed.body.last().unwrap();
        assert_eq!(unparse_stmt(last), "return print(b + a)\n");
    }

    #[test]
    fn free_variable_becomes_live_in_parameter() {
        let (c, programs) = candidate_on(
            &["k = 3\ny = k + 1\nprint(y)\n"],
            "(StatementList (assign y (add k #0)) (StatementList (print y) eps))",
        );
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        assert_eq!(facts.live_in, alloc::vec![String::from("k")]);
        let closed = close(&c, &facts, "f".into()).unwrap();
        assert_eq!(closed.params, alloc::vec![String::from("_param0"), String::from("k")]);
    }

    #[test]
    fn multiple_live_outs_return_a_list_in_name_order() {
        let src = "w = 1\ny = 2\nz = 3\nprint(w + y + z)\n";
        let (c, programs) = candidate_on(
            &[src],
            "(StatementList (assign w #0) (StatementList (assign y #1) \
             (StatementList (assign z #2) ...)))",
        );
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        let closed = close(&c, &facts, "f".into()).unwrap();
        assert_eq!(
            closed.return_plan,
            ReturnPlan::Multiple(alloc::vec!["w".into(), "y".into(), "z".into()])
        );
        assert_eq!(unparse_stmt(closed.body.last().unwrap()), "return [w, y, z]\n");
    }

    #[test]
    fn parameter_itself_can_be_live_out() {
        // the body assigns x from a hole; x is read later, so x returns
        let (c, programs) = candidate_on(
            &["x = 1 + 2\nprint(x)\nprint(x)\n"],
            "(StatementList (assign x (add #0 #1)) ...)",
        );
        let facts = analyze_liveness(&c, &programs);
        assert!(facts.live_out_per_site[0].contains("x"));
        let closed = close(&c, &facts, "f".into()).unwrap();
        assert_eq!(closed.return_plan, ReturnPlan::Single("x".into()));
    }

    #[test]
    fn live_in_parameter_can_also_be_returned() {
        // x is read before assignment (a parameter) and reassigned in the
        // body, then read after the site: the parameter itself is live-out
        let (c, programs) = candidate_on(
            &["x = 1\nx = x + 2 + 3\nprint(x)\n"],
            "(StatementList (assign x (add (add x #0) 3)) ...)",
        );
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        assert_eq!(facts.live_in, alloc::vec![String::from("x")]);
        assert!(facts.live_out_per_site[0].contains("x"));
        let closed = close(&c, &facts, "f".into()).unwrap();
        assert_eq!(closed.params, alloc::vec![String::from("_param0"), String::from("x")]);
        assert_eq!(closed.return_plan, ReturnPlan::Single("x".into()));
        assert_eq!(unparse_stmt(closed.body.last().unwrap()), "return x\n");
    }

    #[test]
    fn suite_sites_scope_liveness_to_the_suite() {
        // x assigned inside the def is local; nothing reads it after the
        // site within the suite, so there is no live-out
        let src = "def f(a):\n    x = a + 1\n    return a\nprint(f(1))\nprint(2)\n";
        let (c, programs) = candidate_on(&[src], "(StatementList (assign x (add #0 1)) ...)");
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        assert!(facts.live_out_per_site[0].is_empty());
    }

    #[test]
    fn global_read_inside_function_keeps_top_level_assign_live() {
        let src = "def g(a):\n    return a + x\nx = 1 + 2\nprint(g(1))\n";
        let (c, programs) = candidate_on(&[src], "(StatementList (assign x (add #0 #1)) ...)");
        assert_eq!(c.sites.len(), 1);
        let facts = analyze_liveness(&c, &programs);
        assert!(facts.live_out_per_site[0].contains("x"));
    }

    #[test]
    fn reserved_names_fail_closing() {
        let (c, programs) =
            candidate_on(&["_param3 = 1\nprint(_param3)\n"], "(StatementList (assign _param3 #0) ...)");
        let facts = analyze_liveness(&c, &programs);
        assert_eq!(
            close(&c, &facts, "f".into()),
            Err(ClosureFailure::ReservedName("_param3".into()))
        );
    }

    #[test]
    fn expression_bodies_close_to_a_return() {
        let (c, programs) = candidate_on(&["print(1 + 2)\n"], "(add #0 #1)");
        let facts = analyze_liveness(&c, &programs);
        let closed = close(&c, &facts, "f".into()).unwrap();
        assert_eq!(closed.return_plan, ReturnPlan::LastExpr);
        assert_eq!(unparse_stmt(&closed.body[0]), "return _param0 + _param1\n");
    }
}
