//! Independent exhaustive oracle for the search, plus a deterministic
//! random-corpus generator.
//!
//! The oracle enumerates candidate patterns by a different principle from
//! the production search: every pattern with at least one match is
//! derivable from each subtree it matches by replacing some of that
//! subtree's expression positions with holes (equal subtrees may share a
//! hole). So it walks every corpus subtree (and every statement-spine
//! prefix), generates all such holings up to the arity limit, and scores
//! each with the plain matcher and utility measure. No bounds, no
//! corpus-guided expansion. Exponential, fine for corpora of a couple of
//! hundred nodes.

use std::collections::BTreeSet;

use leroy_core::p2::parse_program;
use leroy_core::search::{find_matches, utility, Pattern, SearchConfig};
use leroy_core::sexpr::{body_ast, Atom, Head, SExpr, SlotKind};
use leroy_core::Program;

pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Best positive utility over the whole pattern space, or `None`.
pub fn oracle_best_utility(corpus: &[SExpr], cfg: &SearchConfig) -> Option<i64> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut best: Option<i64> = None;

    let mut consider = |pattern_term: SExpr, best: &mut Option<i64>| {
        let pattern = Pattern::from_sexpr(pattern_term);
        let serialized = pattern.serialized();
        if !seen.insert(serialized) {
            return;
        }
        if matches!(&pattern.body, SExpr::Atom(Atom::Hole(_))) {
            return;
        }
        let Ok(body) = body_ast(&pattern.body) else {
            return;
        };
        if body.size() < cfg.min_body_size {
            return;
        }
        let sites = find_matches(&pattern, corpus);
        if sites.len() < 2 {
            return;
        }
        let u = utility(&pattern, &sites);
        if u > 0 && best.is_none_or(|b| u > b) {
            *best = Some(u);
        }
    };

    for term in corpus {
        let mut stack = vec![(term, None::<SlotKind>)];
        while let Some((node, slot)) = stack.pop() {
            if let SExpr::App(head, children) = node {
                for (child, child_slot) in children.iter().zip(head.slots()) {
                    stack.push((child, Some(*child_slot)));
                }
            }
            // expression-rooted patterns from expression positions
            if matches!(slot, Some(SlotKind::Expr) | Some(SlotKind::LazyExpr)) {
                for (variant, _) in holings(node, false, Vec::new(), cfg.max_arity as usize) {
                    consider(variant, &mut best);
                }
            }
            // spine-rooted patterns from every spine suffix and coverage
            if matches!(node, SExpr::App(Head::StatementList, _)) {
                for truncated in spine_prefixes(node) {
                    for (variant, _) in
                        holings(&truncated, false, Vec::new(), cfg.max_arity as usize)
                    {
                        consider(variant, &mut best);
                    }
                }
            }
        }
    }
    best
}

/// Every way to truncate a spine after k >= 1 statements, ending in `eps`
/// (exact end only) or an open tail. Spines containing `def` or `return`
/// statements are outside the pattern space.
fn spine_prefixes(spine: &SExpr) -> Vec<SExpr> {
    let mut stmts = Vec::new();
    let mut cur = spine;
    loop {
        match cur {
            SExpr::App(Head::StatementList, children) if children.len() == 2 => {
                if matches!(&children[0], SExpr::App(Head::Def | Head::Return, _)) {
                    break;
                }
                stmts.push(children[0].clone());
                cur = &children[1];
            }
            _ => break,
        }
    }
    let reached_end = matches!(cur, SExpr::Epsilon);
    let mut out = Vec::new();
    for k in 1..=stmts.len() {
        let mut tails = vec![SExpr::Atom(Atom::Ellipsis)];
        if reached_end && k == stmts.len() {
            tails.push(SExpr::Epsilon);
        }
        for tail in tails {
            let mut term = tail;
            for stmt in stmts[..k].iter().rev() {
                term = SExpr::App(Head::StatementList, vec![stmt.clone(), term]);
            }
            out.push(term);
        }
    }
    out
}

/// All hole assignments for one subtree: each expression position either
/// stays concrete (recursing into it) or becomes a hole, where a hole index
/// may be reused only for an identical subtree. `labels[i]` is the content
/// of hole `i` so far.
fn holings(
    node: &SExpr,
    holeable: bool,
    labels: Vec<SExpr>,
    max_arity: usize,
) -> Vec<(SExpr, Vec<SExpr>)> {
    let mut out = Vec::new();
    if holeable {
        for (i, content) in labels.iter().enumerate() {
            if content == node {
                out.push((SExpr::Atom(Atom::Hole(i as u32)), labels.clone()));
            }
        }
        if labels.len() < max_arity {
            let mut extended = labels.clone();
            extended.push(node.clone());
            out.push((SExpr::Atom(Atom::Hole(labels.len() as u32)), extended));
        }
    }
    match node {
        SExpr::Atom(_) | SExpr::Epsilon => out.push((node.clone(), labels)),
        SExpr::App(head, children) => {
            // sequentially thread the label state through the children
            let mut partials: Vec<(Vec<SExpr>, Vec<SExpr>)> = vec![(Vec::new(), labels)];
            for (child, child_slot) in children.iter().zip(head.slots()) {
                let child_holeable = *child_slot == SlotKind::Expr;
                let mut next = Vec::new();
                for (built, lbs) in partials {
                    for (variant, lbs2) in holings(child, child_holeable, lbs.clone(), max_arity)
                    {
                        let mut b = built.clone();
                        b.push(variant);
                        next.push((b, lbs2));
                    }
                }
                partials = next;
            }
            for (built, lbs) in partials {
                out.push((SExpr::App(*head, built), lbs));
            }
        }
    }
    out
}

/// A deterministic random corpus of a handful of small programs totalling
/// at most 200 nodes, with planted repetition so positive-utility patterns
/// exist in roughly half the corpora.
pub fn random_corpus(rng: &mut XorShift) -> Vec<Program> {
    let n_programs = 4 + rng.below(3) as usize;
    // a shared statement block some programs include verbatim, and a
    // variant of it with one literal changed to exercise holes
    let shared_a = format!(
        "acc = {} + {}\nout = acc + {}\nprint(out + acc)\n",
        rng.below(9),
        rng.below(9),
        rng.below(9),
    );
    let shared_b = shared_a.replacen(&format!("{}", rng.below(9)), "8", 1);

    let mut sources = Vec::new();
    for p in 0..n_programs {
        let mut text = String::new();
        if rng.below(2) == 0 {
            text.push_str(if rng.below(3) == 0 { &shared_b } else { &shared_a });
        }
        let extras = 1 + rng.below(2);
        for _ in 0..extras {
            text.push_str(&random_statement(rng, p));
        }
        sources.push(text);
    }
    let mut programs: Vec<Program> = sources
        .iter()
        .map(|s| parse_program(s).unwrap())
        .collect();
    // trim programs until the corpus fits the node budget
    while programs
        .iter()
        .map(leroy_core::p2::ast_size)
        .sum::<usize>()
        > 200
    {
        programs.pop();
    }
    if programs.is_empty() {
        programs.push(parse_program("print(1)\n").unwrap());
    }
    programs
}

fn random_statement(rng: &mut XorShift, program: usize) -> String {
    match rng.below(7) {
        0 => format!("a{program} = {} + {}\n", rng.below(20), rng.below(20)),
        1 => format!("print({} + a{program})\n", rng.below(20)),
        2 => format!(
            "xs{program} = [{}, {}, {}]\n",
            rng.below(9),
            rng.below(9),
            rng.below(9)
        ),
        3 => format!("print({} if c{program} else {})\n", rng.below(9), rng.below(9)),
        4 => format!("v{program} = eval(input())\n"),
        5 => format!("r{program} = fn{program}({})\n", rng.below(9)),
        _ => format!(
            "d{program} = {{{}: {}}}\nprint(d{program}[{}])\n",
            rng.below(4),
            rng.below(9),
            rng.below(4)
        ),
    }
}
