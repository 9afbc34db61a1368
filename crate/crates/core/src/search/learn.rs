//! The learning loop: search, prune, close, validate, rewrite, repeat.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::closing::{
    analyze_liveness, closable, close, is_own_output_ident, is_reserved_ident, ClosedAbstraction,
};
use crate::p2::Program;
use crate::prune::{
    verdict_calls_learned, verdict_macro_like, verdict_parameters, PruneReason, PruneStats,
};
use crate::rewrite::{apply, measure, validate_call_site, CompressionReport, RewriteError};
use crate::sexpr::{delispify, lispify, SExpr};

use super::enumerate::{enumerate, SearchPasses};
use super::matching::find_matches;
use super::{MatchSite, SearchConfig};

/// Observer for the search frontier: every evaluated pattern with its
/// utility.
pub type FrontierSink<'a> = &'a mut dyn FnMut(&SExpr, i64);

#[derive(Debug, Clone, PartialEq)]
pub struct LearnOutcome {
    /// Learned abstractions in discovery order (`_leroy_fn0`, `_leroy_fn1`, ..).
    pub library: Vec<ClosedAbstraction>,
    /// The corpus with every accepted site rewritten to call the library.
    pub rewritten: Vec<Program>,
    pub report: CompressionReport,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LearnError {
    #[error("program {program} uses reserved identifier `{name}`")]
    ReservedIdentifier { program: usize, name: String },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Learn a library from the corpus: repeatedly take the best surviving
/// candidate, close it, rewrite the corpus, and go again until no pattern
/// with positive utility survives the checks.
pub fn learn_library(corpus: &[Program], cfg: &SearchConfig) -> Result<LearnOutcome, LearnError> {
    learn_library_with(corpus, cfg, None)
}

/// [`learn_library`] with an optional observer that sees every evaluated
/// pattern and its utility (the search frontier), one call per pattern.
pub fn learn_library_with(
    corpus: &[Program],
    cfg: &SearchConfig,
    mut frontier: Option<FrontierSink<'_>>,
) -> Result<LearnOutcome, LearnError> {
    // Reserved identifiers would collide with synthesized parameter names
    // and temporaries. The tool's own output shapes (`_leroy_fnN` calls and
    // the unpacking temporary) are allowed so a rewritten corpus can be fed
    // back in and reach a fixpoint.
    let mut corpus_idents = BTreeSet::new();
    for (program, p) in corpus.iter().enumerate() {
        let mut idents = BTreeSet::new();
        lispify(p).collect_idents(&mut idents);
        if let Some(name) = idents
            .iter()
            .find(|n| is_reserved_ident(n) && !is_own_output_ident(n))
        {
            return Err(LearnError::ReservedIdentifier { program, name: name.clone() });
        }
        corpus_idents.extend(idents);
    }

    let original: Vec<Program> = corpus.to_vec();
    let mut programs: Vec<Program> = corpus.to_vec();
    let mut terms: Vec<SExpr> = programs.iter().map(lispify).collect();

    let mut library: Vec<ClosedAbstraction> = Vec::new();
    let mut learned: BTreeSet<String> = BTreeSet::new();
    let mut stats = PruneStats::default();
    let mut rejected_call_sites: u64 = 0;
    let mut next_index: u32 = 0;

    // Termination: every statement a rewrite introduces contains either a
    // call to a learned function (which pruning keeps out of later bodies
    // and purity keeps out of bindings) or a reserved temporary, so the
    // matchable material strictly shrinks each round.
    loop {
        let mut passes = LearnPasses {
            min_size: cfg.min_body_size,
            learned: &learned,
            stats: &mut stats,
            frontier: match &mut frontier {
                Some(f) => Some(&mut **f),
                None => None,
            },
        };
        let Some(candidate) = enumerate(&terms, cfg, &mut passes) else {
            break;
        };

        let name = loop {
            let name = format!("_leroy_fn{next_index}");
            next_index += 1;
            if !corpus_idents.contains(&name) {
                break name;
            }
        };
        let facts = analyze_liveness(&candidate, &programs);
        let closed = close(&candidate, &facts, name.clone())
            .map_err(|e| LearnError::Internal(format!("closing `{name}`: {e}")))?;

        // account for sites the name-capture rule refuses: what the plain
        // matcher selects minus what validates
        rejected_call_sites += find_matches(&candidate.pattern, &terms)
            .iter()
            .filter(|s| !validate_call_site(&closed, s).accepted())
            .count() as u64;
        debug_assert!(candidate
            .sites
            .iter()
            .all(|s| validate_call_site(&closed, s).accepted()));

        terms = apply(&closed, &candidate.sites, &facts.live_out_per_site, &terms)?;
        programs = terms
            .iter()
            .map(|t| {
                delispify(t).map_err(|e| LearnError::Internal(format!("delispify: {e}")))
            })
            .collect::<Result<_, _>>()?;

        learned.insert(name);
        library.push(closed);
    }

    let report = measure(&original, &programs, &library, stats, rejected_call_sites);
    Ok(LearnOutcome { library, rewritten: programs, report })
}

struct LearnPasses<'a> {
    min_size: usize,
    learned: &'a BTreeSet<String>,
    stats: &'a mut PruneStats,
    frontier: Option<FrontierSink<'a>>,
}

impl SearchPasses for LearnPasses<'_> {
    fn site_ok(&mut self, body_idents: &BTreeSet<String>, site: &MatchSite) -> bool {
        let mut argument_names = BTreeSet::new();
        for binding in &site.bindings {
            binding.collect_idents(&mut argument_names);
        }
        argument_names.is_disjoint(body_idents)
    }

    fn candidate_ok(
        &mut self,
        body: &SExpr,
        body_size: usize,
        _utility: i64,
        _sites: &[MatchSite],
    ) -> bool {
        // attribution order: macro-like, parameters, size, calls-learned
        if !verdict_macro_like(body).kept {
            self.stats.record(PruneReason::MacroLike);
            return false;
        }
        if !verdict_parameters(body).kept {
            self.stats.record(PruneReason::InvalidParameter);
            return false;
        }
        if body_size < self.min_size {
            self.stats.record(PruneReason::TooSmall);
            return false;
        }
        if !verdict_calls_learned(body, self.learned).kept {
            self.stats.record(PruneReason::CallsLearnedAbstraction);
            return false;
        }
        // closing would have to drop it (reserved names, returns): not a
        // pruning category, just not a candidate
        closable(body)
    }

    fn frontier(&mut self, body: &SExpr, utility: i64) {
        if let Some(f) = &mut self.frontier {
            f(body, utility);
        }
    }
}
