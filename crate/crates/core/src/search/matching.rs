//! Pattern matching over encoded corpora and the exact utility measure.

use alloc::string::String;
use alloc::vec::Vec;

use crate::p2::{Expr, ExprKind, Stmt, StmtKind};
use crate::sexpr::{body_ast, Atom, BodyAst, Head, SExpr, SlotKind};

/// An encoded tree with numbered holes; the unit of search and the body of
/// an abstraction-to-be. Hole indices are dense and numbered by first
/// occurrence in pre-order, which is also the parameter order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub body: SExpr,
    /// Number of distinct holes.
    pub arity: u32,
}

impl Pattern {
    /// Wrap a term, renumbering holes densely by first occurrence.
    pub fn from_sexpr(body: SExpr) -> Pattern {
        let mut order: Vec<u32> = Vec::new();
        let mut body = body;
        renumber(&mut body, &mut order);
        Pattern { body, arity: order.len() as u32 }
    }

    pub fn serialized(&self) -> String {
        alloc::format!("{}", self.body)
    }

    /// Statement count and openness of the root spine, when the pattern is
    /// spine-rooted.
    pub fn spine_shape(&self) -> Option<(usize, bool)> {
        spine_shape(&self.body)
    }
}

fn renumber(s: &mut SExpr, order: &mut Vec<u32>) {
    match s {
        SExpr::Atom(Atom::Hole(k)) => {
            let new = match order.iter().position(|o| o == k) {
                Some(i) => i,
                None => {
                    order.push(*k);
                    order.len() - 1
                }
            };
            *k = new as u32;
        }
        SExpr::App(_, children) => {
            for c in children {
                renumber(c, order);
            }
        }
        _ => {}
    }
}

fn spine_shape(body: &SExpr) -> Option<(usize, bool)> {
    let mut cur = body;
    let mut len = 0;
    loop {
        match cur {
            SExpr::App(Head::StatementList, children) if children.len() == 2 => {
                len += 1;
                cur = &children[1];
            }
            SExpr::Epsilon => return if len > 0 { Some((len, false)) } else { None },
            SExpr::Atom(Atom::Ellipsis) => {
                return if len > 0 { Some((len, true)) } else { None }
            }
            _ => return None,
        }
    }
}

/// One place a pattern matched: the program, the path from its root, what
/// each hole bound, and for spine-prefix matches how many statements are
/// covered and what remains at the site.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchSite {
    pub program: usize,
    /// Child-index path from the program's encoded root.
    pub path: Vec<usize>,
    /// Bound subtree per hole index.
    pub bindings: Vec<SExpr>,
    /// Statements covered when the pattern root is a spine; `None` for
    /// expression sites.
    pub covered: Option<usize>,
    /// The unmatched continuation of an open-tailed spine match.
    pub tail_rest: Option<SExpr>,
}

/// Facts about a pattern that constrain what its holes may bind.
pub(crate) struct BindingRules {
    /// Occurrence count per hole; repeated holes must bind identical
    /// subtrees, and must not bind list/dict displays (the single argument
    /// value would alias where the original built distinct objects).
    occurrences: Vec<u32>,
    /// The body writes through a subscript or calls a function, so a bound
    /// subscript expression could read differently at call time than at
    /// its original position.
    body_mutates: bool,
}

impl BindingRules {
    pub(crate) fn of(body: &SExpr) -> BindingRules {
        let mut occurrences = Vec::new();
        let mut body_mutates = false;
        body.walk(&mut |n| match n {
            SExpr::Atom(Atom::Hole(k)) => {
                let k = *k as usize;
                if occurrences.len() <= k {
                    occurrences.resize(k + 1, 0);
                }
                occurrences[k] += 1;
            }
            SExpr::App(Head::Call, _) => body_mutates = true,
            SExpr::App(Head::Assign, children) => {
                if matches!(children.first(), Some(SExpr::App(Head::Subscript, _))) {
                    body_mutates = true;
                }
            }
            _ => {}
        });
        BindingRules { occurrences, body_mutates }
    }

    /// Whether `subtree` may be bound by hole `k`. Bindings become call
    /// arguments evaluated once, up front, so they must be pure (no input,
    /// no print, no calls). See [`BindingRules::body_mutates`] for the
    /// subscript restriction and `occurrences` for the display restriction.
    pub(crate) fn binding_ok(&self, k: u32, subtree: &SExpr) -> bool {
        if !is_expression_term(subtree) {
            return false;
        }
        let mut pure = true;
        let mut has_subscript = false;
        let mut has_display = false;
        subtree.walk(&mut |n| match n {
            SExpr::Atom(Atom::EvalInput) => pure = false,
            SExpr::App(Head::Call | Head::PrintExpr, _) => pure = false,
            SExpr::App(Head::Subscript, _) => has_subscript = true,
            SExpr::App(Head::List | Head::Dict, _) => has_display = true,
            // reserved names belong to the rewriter's own plumbing; moving
            // one into an argument could interleave with its temporaries
            SExpr::Atom(Atom::Ident(id)) if crate::closing::is_reserved_ident(id) => {
                pure = false;
            }
            _ => {}
        });
        if !pure {
            return false;
        }
        if self.body_mutates && has_subscript {
            return false;
        }
        let repeated = self.occurrences.get(k as usize).copied().unwrap_or(0) > 1;
        if repeated && has_display {
            return false;
        }
        true
    }
}

pub(crate) fn is_expression_term(s: &SExpr) -> bool {
    match s {
        SExpr::Atom(a) => matches!(
            a,
            Atom::Int(_) | Atom::Ident(_) | Atom::Bool(_) | Atom::EvalInput
        ),
        SExpr::App(head, _) => head.is_expression(),
        SExpr::Epsilon => false,
    }
}

/// All maximal non-overlapping matches of a pattern over the corpus,
/// chosen greedily in leftmost-outermost order per program. Holes bind
/// only expression subtrees subject to [`BindingRules`]; repeated holes
/// require structurally identical bindings.
pub fn find_matches(pattern: &Pattern, corpus: &[SExpr]) -> Vec<MatchSite> {
    let rules = BindingRules::of(&pattern.body);
    let spine = pattern.spine_shape();
    let is_spine_pattern = spine.is_some();
    let is_expr_pattern = is_expression_term(&pattern.body)
        || matches!(&pattern.body, SExpr::Atom(Atom::Hole(_)));

    let mut sites = Vec::new();
    for (program, term) in corpus.iter().enumerate() {
        let mut raw: Vec<MatchSite> = Vec::new();
        let mut path = Vec::new();
        collect_matches(
            pattern,
            &rules,
            spine,
            is_spine_pattern,
            is_expr_pattern,
            term,
            None,
            program,
            &mut path,
            &mut raw,
        );
        // greedy leftmost-outermost selection; raw is already in pre-order
        let mut selected: Vec<MatchSite> = Vec::new();
        'candidate: for site in raw {
            for taken in &selected {
                if overlaps(taken, &site.path) {
                    continue 'candidate;
                }
            }
            selected.push(site);
        }
        sites.extend(selected);
    }
    sites
}

/// Does a new site at `path` overlap `taken`? Paths into the unmatched
/// remainder of an open-tailed spine site do not overlap it.
pub(crate) fn overlaps(taken: &MatchSite, path: &[usize]) -> bool {
    if path.len() < taken.path.len() || !path.starts_with(&taken.path) {
        return false;
    }
    match taken.covered {
        None => true,
        Some(covered) => {
            let rel = &path[taken.path.len()..];
            let through_remainder =
                rel.len() >= covered && rel[..covered].iter().all(|&s| s == 1);
            !through_remainder
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn collect_matches(
    pattern: &Pattern,
    rules: &BindingRules,
    spine: Option<(usize, bool)>,
    is_spine_pattern: bool,
    is_expr_pattern: bool,
    node: &SExpr,
    slot: Option<SlotKind>,
    program: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<MatchSite>,
) {
    let rootable_spine = is_spine_pattern && matches!(node, SExpr::App(Head::StatementList, _));
    let rootable_expr = is_expr_pattern
        && matches!(slot, Some(SlotKind::Expr) | Some(SlotKind::LazyExpr));
    if rootable_spine || rootable_expr {
        let mut bindings: Vec<Option<SExpr>> = alloc::vec![None; pattern.arity as usize];
        let mut tail_rest = None;
        if match_node(&pattern.body, node, rules, &mut bindings, &mut tail_rest) {
            let bindings: Option<Vec<SExpr>> = bindings.into_iter().collect();
            if let Some(bindings) = bindings {
                out.push(MatchSite {
                    program,
                    path: path.clone(),
                    bindings,
                    covered: spine.map(|(len, _)| len),
                    tail_rest,
                });
            }
        }
    }
    if let SExpr::App(head, children) = node {
        for (i, (child, child_slot)) in children.iter().zip(head.slots()).enumerate() {
            path.push(i);
            collect_matches(
                pattern,
                rules,
                spine,
                is_spine_pattern,
                is_expr_pattern,
                child,
                Some(*child_slot),
                program,
                path,
                out,
            );
            path.pop();
        }
    }
}

fn match_node(
    pat: &SExpr,
    node: &SExpr,
    rules: &BindingRules,
    bindings: &mut Vec<Option<SExpr>>,
    tail_rest: &mut Option<SExpr>,
) -> bool {
    match pat {
        SExpr::Atom(Atom::Hole(k)) => {
            if !rules.binding_ok(*k, node) {
                return false;
            }
            let Some(slot) = bindings.get_mut(*k as usize) else {
                return false; // hole index beyond the declared arity
            };
            match slot {
                Some(existing) => existing == node,
                None => {
                    *slot = Some(node.clone());
                    true
                }
            }
        }
        SExpr::Atom(Atom::Ellipsis) => {
            // open tail: any valid spine continuation remains at the site
            if matches!(node, SExpr::App(Head::StatementList, _) | SExpr::Epsilon) {
                *tail_rest = Some(node.clone());
                true
            } else {
                false
            }
        }
        SExpr::Atom(a) => matches!(node, SExpr::Atom(b) if a == b),
        SExpr::Epsilon => matches!(node, SExpr::Epsilon),
        SExpr::App(head, children) => match node {
            SExpr::App(node_head, node_children)
                if node_head == head && node_children.len() == children.len() =>
            {
                children
                    .iter()
                    .zip(node_children)
                    .all(|(p, n)| match_node(p, n, rules, bindings, tail_rest))
            }
            _ => false,
        },
    }
}

/// Replace holes with their bindings (and an open tail with epsilon),
/// yielding the concrete subtree a site matched.
pub fn substitute(pattern: &SExpr, bindings: &[SExpr]) -> SExpr {
    match pattern {
        SExpr::Atom(Atom::Hole(k)) => bindings
            .get(*k as usize)
            .cloned()
            .unwrap_or(SExpr::Atom(Atom::Hole(*k))),
        SExpr::Atom(Atom::Ellipsis) => SExpr::Epsilon,
        SExpr::App(head, children) => SExpr::App(
            *head,
            children.iter().map(|c| substitute(c, bindings)).collect(),
        ),
        other => other.clone(),
    }
}

/// Exact net node savings of rewriting `sites` with this pattern: for each
/// site, the nodes of the matched subtree minus the nodes of the call that
/// replaces it, minus the nodes of the emitted definition (pre-closing).
/// Computed by building the actual replacement call and definition and
/// counting, never by a formula.
pub fn utility(pattern: &Pattern, sites: &[MatchSite]) -> i64 {
    let Ok(body) = body_ast(&pattern.body) else {
        return i64::MIN;
    };
    let params: Vec<String> = (0..pattern.arity)
        .map(crate::sexpr::hole_param_name)
        .collect();
    let def_suite = match &body {
        BodyAst::Stmts { stmts, .. } => stmts.clone(),
        BodyAst::Expr(e) => alloc::vec![Stmt::new(StmtKind::Return(e.clone()))],
    };
    let def = Stmt::new(StmtKind::FunctionDef {
        name: String::from("_leroy_fn"),
        params,
        suite: def_suite,
    });
    let def_cost = def.size() as i64;

    let mut savings: i64 = 0;
    for site in sites {
        let matched = substitute(&pattern.body, &site.bindings);
        let Ok(matched_body) = body_ast(&matched) else {
            return i64::MIN;
        };
        let matched_size = matched_body.size() as i64;

        let args: Vec<Expr> = site
            .bindings
            .iter()
            .filter_map(crate::sexpr::binding_expr)
            .collect();
        if args.len() != site.bindings.len() {
            return i64::MIN;
        }
        let call = Expr::new(ExprKind::Call {
            callee: alloc::boxed::Box::new(Expr::name("_leroy_fn")),
            args,
        });
        let replacement_size = match site.covered {
            Some(_) => Stmt::new(StmtKind::Expr(call)).size() as i64,
            None => call.size() as i64,
        };
        savings += matched_size - replacement_size;
    }
    savings - def_cost
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p2::parse_program;
    use crate::sexpr::{lispify, parse_sexpr};

    fn pat(text: &str) -> Pattern {
        Pattern::from_sexpr(parse_sexpr(text).unwrap())
    }

    fn corpus(srcs: &[&str]) -> Vec<SExpr> {
        srcs.iter()
            .map(|s| lispify(&parse_program(s).unwrap()))
            .collect()
    }

    #[test]
    fn binds_both_operands() {
        let terms = corpus(&["print(1 + 2)", "print(x + y)"]);
        // match the addition expression itself
        let sites = find_matches(&pat("(add #0 #1)"), &terms);
        assert_eq!(sites.len(), 2);
        assert_eq!(sites[0].bindings, alloc::vec![SExpr::int(1), SExpr::int(2)]);
        assert_eq!(
            sites[1].bindings,
            alloc::vec![SExpr::ident("x"), SExpr::ident("y")]
        );
        assert_eq!(sites[0].covered, None);
    }

    #[test]
    fn one_site_per_snippet_for_shared_structure() {
        let terms = corpus(&["print(1 + 2)", "print(3 + 4)"]);
        let sites = find_matches(&pat("(print (add #0 #1))"), &terms);
        // statement-headed pattern bodies are not rootable; the spine form is
        assert_eq!(sites.len(), 0);
        let sites = find_matches(&pat("(StatementList (print (add #0 #1)) ...)"), &terms);
        assert_eq!(sites.len(), 2);
        assert_eq!(sites[0].covered, Some(1));
    }

    #[test]
    fn leftmost_outermost_takes_the_outer_match() {
        let terms = corpus(&["print((1 + 2) + 3)"]);
        let sites = find_matches(&pat("(add #0 #1)"), &terms);
        assert_eq!(sites.len(), 1);
        assert_eq!(
            sites[0].bindings[0],
            parse_sexpr("(add 1 2)").unwrap()
        );
    }

    #[test]
    fn repeated_holes_require_equal_subtrees() {
        let terms = corpus(&["print(x + x)", "print(1 + 2)"]);
        let sites = find_matches(&pat("(add #0 #0)"), &terms);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].program, 0);
    }

    #[test]
    fn holes_never_bind_impure_expressions() {
        let terms = corpus(&["print(eval(input()) + 1)", "print(f(2) + 1)", "print(3 + 1)"]);
        let sites = find_matches(&pat("(add #0 1)"), &terms);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].program, 2);
    }

    #[test]
    fn mutating_bodies_refuse_subscript_bindings() {
        // the body writes through a[0], so a[1] read as an argument could
        // see a different value at call time than at its original position
        let terms = corpus(&["a[0] = 1\nx = a[1]\nprint(x)\n", "a[0] = 1\nx = 7\nprint(x)\n"]);
        let p = pat("(StatementList (assign (subscript a 0) 1) (StatementList (assign x #0) ...))");
        let sites = find_matches(&p, &terms);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].program, 1);
        assert_eq!(sites[0].bindings[0], SExpr::int(7));
        // without the mutation in the body, a subscript binding is fine
        let p2 = pat("(StatementList (assign x #0) ...)");
        let sites = find_matches(&p2, &terms);
        assert_eq!(sites.len(), 2);
    }

    #[test]
    fn spine_prefix_match_records_remainder() {
        let terms = corpus(&["x = 1\ny = 2\nprint(x)\n"]);
        let sites = find_matches(&pat("(StatementList (assign x #0) ...)"), &terms);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].covered, Some(1));
        let rest = sites[0].tail_rest.as_ref().unwrap();
        assert!(alloc::format!("{rest}").starts_with("(StatementList (assign y 2)"));
    }

    #[test]
    fn nested_spine_sites_do_not_overlap_through_the_remainder() {
        let terms = corpus(&["x = 1\nx = 1\nx = 1\n"]);
        let sites = find_matches(&pat("(StatementList (assign x 1) ...)"), &terms);
        assert_eq!(sites.len(), 3);
    }

    #[test]
    fn utility_is_negative_for_a_single_site() {
        let terms = corpus(&["print(9 + 9)\nx = 1\n"]);
        let p = pat("(StatementList (print (add #0 #1)) ...)");
        let sites = find_matches(&p, &terms);
        assert_eq!(sites.len(), 1);
        assert!(utility(&p, &sites) < 0);
    }

    #[test]
    fn utility_by_simulated_rewrite_hand_count() {
        // pattern body: print(#0 + #1) under a spine, one statement covered.
        // per site: matched = print+add+two bindings(1 node each) = 4
        //           replacement = exprstmt+call+name+two args = 5
        // def = def(1) + params(2) + body(print 1 + add 1 + 2 refs) = 7
        // two sites: utility = 2*(4-5) - 7 = -9
        let terms = corpus(&["print(1 + 2)", "print(3 + 4)"]);
        let p = pat("(StatementList (print (add #0 #1)) eps)");
        let sites = find_matches(&p, &terms);
        assert_eq!(sites.len(), 2);
        assert_eq!(utility(&p, &sites), -9);
    }

    #[test]
    fn utility_positive_when_block_is_big_enough() {
        // identical 18-node statement: assign(1) + z(1) + add(1) +
        // [5 items](6) + [8 items](9)
        let block = "z = [1, 2, 3, 4, 5] + [6, 7, 8, 9, 10, 11, 12, 13]\n";
        let terms = corpus(&[block, block]);
        let p = Pattern::from_sexpr(terms[0].clone());
        let sites = find_matches(&p, &terms);
        assert_eq!(sites.len(), 2);
        // matched = 18 per site, replacement = exprstmt+call+name = 3,
        // def = 1 + 0 params + 18 = 19; utility = 2*(18-3) - 19 = 11
        assert_eq!(utility(&p, &sites), 11);
    }

    #[test]
    fn pattern_canonicalizes_hole_numbering() {
        let p = pat("(add #5 (add #9 #5))");
        assert_eq!(p.arity, 2);
        assert_eq!(p.serialized(), "(add #0 (add #1 #0))");
    }
}
