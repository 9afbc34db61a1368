//! Top-down pattern enumeration with branch-and-bound.
//!
//! Search state is a pattern with a queue of undecided slots plus the set
//! of corpus positions that still match it. Deciding a slot either fills
//! it with a node kind observed at that position (corpus-guided: only
//! shapes that keep at least one match are proposed), finishes it as a
//! fresh parameter, or unifies it with an earlier parameter. A pattern is
//! evaluated once every slot is decided, so each pattern is built exactly
//! once.
//!
//! The bound: refining a pattern can only shrink its match set, and a site
//! can never save more than its whole subtree minus the minimal call (two
//! nodes), while the emitted definition can only grow. Any state whose
//! optimistic total is no better than the best utility found is dropped.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::sexpr::{body_ast, Atom, Head, SExpr, SlotKind};

use super::matching::{overlaps, BindingRules};
use super::{serialize_pattern, Candidate, MatchSite, Pattern, SearchConfig};

/// Hooks the learning driver injects into the search: per-site filtering
/// (call-site validation) and the final candidate gate (pruning checks).
/// The plain `search_best` uses a minimal implementation.
pub(crate) trait SearchPasses {
    /// May this site be rewritten? `body_idents` are the identifiers of
    /// the candidate body (the closed body references no others that an
    /// argument could capture).
    fn site_ok(
        &mut self,
        body_idents: &alloc::collections::BTreeSet<String>,
        site: &MatchSite,
    ) -> bool {
        let _ = (body_idents, site);
        true
    }

    /// Final gate for a positive-utility candidate; pruning statistics are
    /// recorded here.
    fn candidate_ok(
        &mut self,
        body: &SExpr,
        body_size: usize,
        utility: i64,
        sites: &[MatchSite],
    ) -> bool;

    /// Observe every evaluated pattern with at least two sites.
    fn frontier(&mut self, body: &SExpr, utility: i64) {
        let _ = (body, utility);
    }
}

/// Run the search over the corpus and return the best candidate.
pub(crate) fn enumerate<P: SearchPasses>(
    corpus: &[SExpr],
    cfg: &SearchConfig,
    passes: &mut P,
) -> Option<Candidate> {
    let arena = Arena::build(corpus);
    let mut ctx = Ctx { arena: &arena, cfg, passes, best: None };

    // root alternatives: group every rootable position by its shape
    let roots: Vec<Env> = (0..arena.nodes.len() as u32)
        .filter(|&i| arena.rootable(i))
        .map(|i| Env { root: i, slots: alloc::vec![i] })
        .collect();
    let state = State {
        pattern: PTree::Undecided(0),
        slots: alloc::vec![SlotInfo { kind: PSlot::Root, decided: false, root_spine_tail: false }],
        params: Vec::new(),
        envs: roots,
    };
    ctx.explore(state);
    ctx.best.map(|(_, _, c)| c)
}

// ---------------------------------------------------------------- arena

struct NodeData<'a> {
    term: &'a SExpr,
    program: usize,
    parent: u32,
    child_idx: usize,
    slot: Option<SlotKind>,
    children: Vec<u32>,
    /// Node count this position can contribute to a match: expression or
    /// statement subtree size; for spine nodes the whole statement suffix.
    full_size: usize,
    /// No input, print, or call anywhere below: usable as a hole binding.
    pure_binding: bool,
}

const NO_PARENT: u32 = u32::MAX;

struct Arena<'a> {
    nodes: Vec<NodeData<'a>>,
}

impl<'a> Arena<'a> {
    fn build(corpus: &'a [SExpr]) -> Arena<'a> {
        let mut arena = Arena { nodes: Vec::new() };
        for (program, term) in corpus.iter().enumerate() {
            arena.add(term, program, NO_PARENT, 0, None);
        }
        arena
    }

    fn add(
        &mut self,
        term: &'a SExpr,
        program: usize,
        parent: u32,
        child_idx: usize,
        slot: Option<SlotKind>,
    ) -> u32 {
        let idx = self.nodes.len() as u32;
        self.nodes.push(NodeData {
            term,
            program,
            parent,
            child_idx,
            slot,
            children: Vec::new(),
            full_size: 0,
            pure_binding: false,
        });
        if let SExpr::App(head, children) = term {
            let slots = head.slots();
            let mut ids = Vec::with_capacity(children.len());
            for (i, child) in children.iter().enumerate() {
                let child_slot = slots.get(i).copied();
                ids.push(self.add(child, program, idx, i, child_slot));
            }
            self.nodes[idx as usize].children = ids;
        }
        self.nodes[idx as usize].full_size = term_size(term);
        self.nodes[idx as usize].pure_binding = !term.contains(&|n| {
            matches!(
                n,
                SExpr::Atom(Atom::EvalInput) | SExpr::App(Head::Call | Head::PrintExpr, _)
            )
        });
        idx
    }

    fn node(&self, i: u32) -> &NodeData<'a> {
        &self.nodes[i as usize]
    }

    fn rootable(&self, i: u32) -> bool {
        let n = self.node(i);
        matches!(n.term, SExpr::App(Head::StatementList, _))
            || matches!(n.slot, Some(SlotKind::Expr) | Some(SlotKind::LazyExpr))
    }

    fn path_of(&self, mut i: u32) -> Vec<usize> {
        let mut rev = Vec::new();
        while self.node(i).parent != NO_PARENT {
            rev.push(self.node(i).child_idx);
            i = self.node(i).parent;
        }
        rev.reverse();
        rev
    }
}

/// Size a corpus term contributes when matched, aligned with the AST
/// counting rule; spine nodes size their whole statement suffix, and a
/// `def`'s own name counts zero.
fn term_size(term: &SExpr) -> usize {
    match term {
        SExpr::Epsilon => 0,
        SExpr::Atom(a) => match a {
            Atom::Int(_) | Atom::Ident(_) | Atom::Bool(_) | Atom::EvalInput => 1,
            Atom::Op(_) | Atom::Hole(_) | Atom::Ellipsis => 0,
        },
        SExpr::App(head, children) => {
            let contributes = !matches!(
                head,
                Head::StatementList | Head::ExprList | Head::KvList | Head::Kv | Head::IdList
            );
            let skip_name_child = matches!(head, Head::Def) as usize;
            children
                .iter()
                .skip(skip_name_child)
                .map(term_size)
                .sum::<usize>()
                + contributes as usize
        }
    }
}

// ---------------------------------------------------------------- state

/// Pattern under construction.
#[derive(Clone, Debug)]
enum PTree {
    Node(Head, Vec<PTree>),
    Leaf(Atom),
    Eps,
    OpenTail,
    Param(u32),
    Undecided(u32),
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum PSlot {
    Root,
    Kind(SlotKind),
}

#[derive(Clone, Debug)]
struct SlotInfo {
    kind: PSlot,
    decided: bool,
    /// Tail slot on the root statement spine: may be left open.
    root_spine_tail: bool,
}

/// One surviving corpus position: the candidate root and the node each
/// slot is pinned to.
#[derive(Clone, Debug)]
struct Env {
    root: u32,
    slots: Vec<u32>,
}

#[derive(Clone, Debug)]
struct State {
    pattern: PTree,
    slots: Vec<SlotInfo>,
    /// Slot id of each parameter, in creation order.
    params: Vec<u32>,
    envs: Vec<Env>,
}

/// Shape of a decision alternative; ordered so grouping is deterministic:
/// concrete heads in vocabulary order, then atoms, then spine endings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum AltKey {
    Head(Head),
    Int(i64),
    Bool(bool),
    Ident(String),
    EvalInput,
    Eps,
    Open,
}

struct Ctx<'a, 'c, P: SearchPasses> {
    arena: &'a Arena<'c>,
    cfg: &'a SearchConfig,
    passes: &'a mut P,
    best: Option<(i64, String, Candidate)>,
}

impl<P: SearchPasses> Ctx<'_, '_, P> {
    fn best_utility(&self) -> i64 {
        self.best.as_ref().map_or(0, |(u, _, _)| *u)
    }

    fn explore(&mut self, state: State) {
        // a pattern with fewer than two occurrences can never pay for its
        // definition, and refining only shrinks the match set
        if state.envs.len() < 2 {
            return;
        }
        if !self.cfg.exhaustive && self.upper_bound(&state) <= self.best_utility() {
            return;
        }
        let Some(slot_id) = state.slots.iter().position(|s| !s.decided) else {
            self.evaluate(&state);
            return;
        };
        for (key, envs) in self.alternatives(&state, slot_id) {
            self.explore(self.apply_decision(&state, slot_id, &key, envs));
        }
        // parameter decisions: only expression slots may stay open
        if state.slots[slot_id].kind == PSlot::Kind(SlotKind::Expr) {
            if (state.params.len() as u32) < self.cfg.max_arity {
                let envs: Vec<Env> = state
                    .envs
                    .iter()
                    .filter(|e| self.arena.node(e.slots[slot_id]).pure_binding)
                    .cloned()
                    .collect();
                let mut child = state.clone();
                child.pattern = replace_undecided(
                    &child.pattern,
                    slot_id as u32,
                    &PTree::Param(child.params.len() as u32),
                );
                child.slots[slot_id].decided = true;
                child.params.push(slot_id as u32);
                child.envs = envs;
                self.explore(child);
            }
            for j in 0..state.params.len() {
                let prior = state.params[j] as usize;
                let envs: Vec<Env> = state
                    .envs
                    .iter()
                    .filter(|e| {
                        self.arena.node(e.slots[slot_id]).term
                            == self.arena.node(e.slots[prior]).term
                    })
                    .cloned()
                    .collect();
                let mut child = state.clone();
                child.pattern =
                    replace_undecided(&child.pattern, slot_id as u32, &PTree::Param(j as u32));
                child.slots[slot_id].decided = true;
                child.envs = envs;
                self.explore(child);
            }
        }
    }

    /// Optimistic utility of any refinement of this state.
    fn upper_bound(&self, state: &State) -> i64 {
        let per_site: i64 = state
            .envs
            .iter()
            .map(|e| self.arena.node(e.root).full_size as i64 - 2)
            .filter(|s| *s > 0)
            .sum();
        let def_floor =
            1 + state.params.len() as i64 + body_size_floor(&state.pattern, &state.slots);
        per_site - def_floor
    }

    /// Concrete decision alternatives for a slot, grouped over surviving
    /// positions so only corpus-observed shapes are proposed.
    fn alternatives(&self, state: &State, slot_id: usize) -> BTreeMap<AltKey, Vec<Env>> {
        let mut groups: BTreeMap<AltKey, Vec<Env>> = BTreeMap::new();
        let slot = &state.slots[slot_id];
        for env in &state.envs {
            let term = self.arena.node(env.slots[slot_id]).term;
            let key = match slot.kind {
                PSlot::Root => match term {
                    SExpr::App(Head::StatementList, _) => Some(AltKey::Head(Head::StatementList)),
                    _ => expr_key(term),
                },
                PSlot::Kind(SlotKind::Expr) | PSlot::Kind(SlotKind::LazyExpr) => expr_key(term),
                PSlot::Kind(SlotKind::Target) => match term {
                    SExpr::Atom(Atom::Ident(id)) => Some(AltKey::Ident(id.clone())),
                    SExpr::App(Head::Subscript, _) => Some(AltKey::Head(Head::Subscript)),
                    _ => None,
                },
                PSlot::Kind(SlotKind::Stmt) => match term {
                    // def and return statements cannot move into a function
                    SExpr::App(h @ (Head::Print | Head::Assign | Head::ExprStmt), _) => {
                        Some(AltKey::Head(*h))
                    }
                    _ => None,
                },
                PSlot::Kind(SlotKind::StmtTail) => match term {
                    SExpr::Epsilon => Some(AltKey::Eps),
                    SExpr::App(Head::StatementList, _) => Some(AltKey::Head(Head::StatementList)),
                    _ => None,
                },
                PSlot::Kind(SlotKind::ExprTail) => match term {
                    SExpr::Epsilon => Some(AltKey::Eps),
                    SExpr::App(Head::ExprList, _) => Some(AltKey::Head(Head::ExprList)),
                    _ => None,
                },
                PSlot::Kind(SlotKind::KvTail) => match term {
                    SExpr::Epsilon => Some(AltKey::Eps),
                    SExpr::App(Head::KvList, _) => Some(AltKey::Head(Head::KvList)),
                    _ => None,
                },
                PSlot::Kind(SlotKind::KvPair) => match term {
                    SExpr::App(Head::Kv, _) => Some(AltKey::Head(Head::Kv)),
                    _ => None,
                },
                // def-related and operator slots never occur: def and
                // return are excluded from expansion
                PSlot::Kind(_) => None,
            };
            if let Some(key) = key {
                groups.entry(key).or_default().push(env.clone());
            }
        }
        if slot.root_spine_tail && state.envs.len() >= 2 {
            groups.insert(AltKey::Open, state.envs.clone());
        }
        groups.retain(|_, envs| envs.len() >= 2);
        groups
    }

    fn apply_decision(
        &self,
        state: &State,
        slot_id: usize,
        key: &AltKey,
        mut envs: Vec<Env>,
    ) -> State {
        let mut slots = state.slots.clone();
        slots[slot_id].decided = true;
        let replacement = match key {
            AltKey::Int(n) => PTree::Leaf(Atom::Int(*n)),
            AltKey::Bool(b) => PTree::Leaf(Atom::Bool(*b)),
            AltKey::Ident(id) => PTree::Leaf(Atom::Ident(id.clone())),
            AltKey::EvalInput => PTree::Leaf(Atom::EvalInput),
            AltKey::Eps => PTree::Eps,
            AltKey::Open => PTree::OpenTail,
            AltKey::Head(head) => {
                let child_slots = head.slots();
                let on_root_spine = *head == Head::StatementList
                    && (slot_id == 0 || state.slots[slot_id].root_spine_tail);
                let mut children = Vec::with_capacity(child_slots.len());
                for kind in child_slots {
                    let id = slots.len() as u32;
                    slots.push(SlotInfo {
                        kind: PSlot::Kind(*kind),
                        decided: false,
                        root_spine_tail: on_root_spine && *kind == SlotKind::StmtTail,
                    });
                    children.push(PTree::Undecided(id));
                }
                // pin each env's new slots to the corpus children
                for env in &mut envs {
                    let node = self.arena.node(env.slots[slot_id]);
                    debug_assert_eq!(node.children.len(), child_slots.len());
                    env.slots.extend(node.children.iter().copied());
                }
                PTree::Node(*head, children)
            }
        };
        let pattern = replace_undecided(&state.pattern, slot_id as u32, &replacement);
        State { pattern, slots, params: state.params.clone(), envs }
    }

    /// All slots decided: realize the pattern, derive and filter its
    /// sites, score it, and race it against the best so far.
    fn evaluate(&mut self, state: &State) {
        let mut order: Vec<u32> = Vec::new();
        let body = realize(&state.pattern, &mut order);
        // order maps serialized hole index -> original param index
        let arity = order.len() as u32;
        debug_assert_eq!(arity as usize, state.params.len());
        if matches!(body, SExpr::Atom(_)) && arity > 0 {
            return; // single-hole pattern
        }
        let Ok(body_repr) = body_ast(&body) else {
            return;
        };
        let body_size = body_repr.size();
        let mut body_idents = alloc::collections::BTreeSet::new();
        body.collect_idents(&mut body_idents);

        let rules = BindingRules::of(&body);
        let pattern = Pattern { body, arity };
        let spine = pattern.spine_shape();

        let mut sites: Vec<MatchSite> = Vec::new();
        'env: for env in &state.envs {
            let mut bindings = Vec::with_capacity(order.len());
            for (hole, original) in order.iter().enumerate() {
                let slot_id = state.params[*original as usize];
                let node = self.arena.node(env.slots[slot_id as usize]);
                if !rules.binding_ok(hole as u32, node.term) {
                    continue 'env;
                }
                bindings.push(node.term.clone());
            }
            let tail_rest = match spine {
                Some((len, true)) => {
                    let mut cur = self.arena.node(env.root).term;
                    for _ in 0..len {
                        match cur.child(1) {
                            Some(t) => cur = t,
                            None => continue 'env,
                        }
                    }
                    Some(cur.clone())
                }
                _ => None,
            };
            let site = MatchSite {
                program: self.arena.node(env.root).program,
                path: self.arena.path_of(env.root),
                bindings,
                covered: spine.map(|(len, _)| len),
                tail_rest,
            };
            if self.passes.site_ok(&body_idents, &site) {
                sites.push(site);
            }
        }

        // greedy leftmost-outermost over surviving sites (already in
        // arena pre-order)
        let mut selected: Vec<MatchSite> = Vec::new();
        'site: for site in sites {
            for taken in &selected {
                if taken.program == site.program && overlaps(taken, &site.path) {
                    continue 'site;
                }
            }
            selected.push(site);
        }
        if selected.len() < 2 {
            return;
        }

        let utility = super::utility(&pattern, &selected);
        self.passes.frontier(&pattern.body, utility);
        if utility <= 0 {
            return;
        }
        if !self
            .passes
            .candidate_ok(&pattern.body, body_size, utility, &selected)
        {
            return;
        }
        let serialized = serialize_pattern(&pattern.body);
        let better = match &self.best {
            None => true,
            Some((u, s, _)) => utility > *u || (utility == *u && serialized < *s),
        };
        if better {
            self.best = Some((utility, serialized, Candidate { pattern, sites: selected, utility }));
        }
    }
}

fn expr_key(term: &SExpr) -> Option<AltKey> {
    match term {
        SExpr::Atom(Atom::Int(n)) => Some(AltKey::Int(*n)),
        SExpr::Atom(Atom::Ident(id)) => Some(AltKey::Ident(id.clone())),
        SExpr::Atom(Atom::Bool(b)) => Some(AltKey::Bool(*b)),
        SExpr::Atom(Atom::EvalInput) => Some(AltKey::EvalInput),
        SExpr::App(h, _) if h.is_expression() => Some(AltKey::Head(*h)),
        _ => None,
    }
}

fn replace_undecided(tree: &PTree, id: u32, replacement: &PTree) -> PTree {
    match tree {
        PTree::Undecided(u) if *u == id => replacement.clone(),
        PTree::Node(head, children) => PTree::Node(
            *head,
            children
                .iter()
                .map(|c| replace_undecided(c, id, replacement))
                .collect(),
        ),
        other => other.clone(),
    }
}

/// Lower bound on the eventual body size: every undecided expression,
/// statement, or target slot will contribute at least one node, while an
/// undecided spine or element tail may still resolve to nothing.
fn body_size_floor(tree: &PTree, slots: &[SlotInfo]) -> i64 {
    match tree {
        PTree::Leaf(_) | PTree::Param(_) => 1,
        PTree::Eps | PTree::OpenTail => 0,
        PTree::Undecided(id) => match slots[*id as usize].kind {
            PSlot::Kind(
                SlotKind::StmtTail
                | SlotKind::ExprTail
                | SlotKind::KvTail
                | SlotKind::IdTail
                | SlotKind::ParamList,
            ) => 0,
            _ => 1,
        },
        PTree::Node(head, children) => {
            let own = !matches!(
                head,
                Head::StatementList | Head::ExprList | Head::KvList | Head::Kv | Head::IdList
            ) as i64;
            own + children.iter().map(|c| body_size_floor(c, slots)).sum::<i64>()
        }
    }
}

/// Convert the decided tree to a term, numbering parameters by first
/// occurrence in pre-order. `order[serialized_index] = original param id`.
fn realize(tree: &PTree, order: &mut Vec<u32>) -> SExpr {
    match tree {
        PTree::Node(head, children) => SExpr::App(
            *head,
            children.iter().map(|c| realize(c, order)).collect(),
        ),
        PTree::Leaf(atom) => SExpr::Atom(atom.clone()),
        PTree::Eps => SExpr::Epsilon,
        PTree::OpenTail => SExpr::Atom(Atom::Ellipsis),
        PTree::Param(p) => {
            let idx = match order.iter().position(|o| o == p) {
                Some(i) => i,
                None => {
                    order.push(*p);
                    order.len() - 1
                }
            };
            SExpr::Atom(Atom::Hole(idx as u32))
        }
        PTree::Undecided(_) => {
            debug_assert!(false, "undecided slot at realization");
            SExpr::Epsilon
        }
    }
}
