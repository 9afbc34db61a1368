//! Corpus-guided top-down search for the repeated tree pattern with the
//! best net node savings.
//!
//! A [`Pattern`] is an encoded tree with numbered holes. The search grows
//! patterns from the root downward, guided by what actually occurs in the
//! corpus: a hole is either expanded into a node observed at that position,
//! left as a parameter, or unified with an earlier parameter. Utility is
//! the exact node savings of simulating the rewrite (call sites shrink, the
//! emitted definition costs), and a branch-and-bound upper bound prunes
//! expansions that cannot beat the best candidate found so far.

mod enumerate;
mod learn;
mod matching;

pub use learn::{learn_library, learn_library_with, LearnError, LearnOutcome};
pub use matching::{find_matches, substitute, utility, MatchSite, Pattern};

pub(crate) use enumerate::{enumerate, SearchPasses};

use alloc::string::String;
use alloc::vec::Vec;

use crate::sexpr::SExpr;

/// Search parameters.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Candidates with fewer body nodes (holes counting 1) are not worth
    /// emitting as functions.
    pub min_body_size: usize,
    /// Maximum number of distinct holes, i.e. function parameters.
    pub max_arity: u32,
    /// Disable the branch-and-bound upper bound and visit everything.
    /// The result must be identical; only the work done changes.
    pub exhaustive: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { min_body_size: 20, max_arity: 4, exhaustive: false }
    }
}

/// A search result: a pattern, the non-overlapping sites it will rewrite,
/// and its exact simulated savings. Ties between equal-utility patterns are
/// broken by the lexicographically smallest serialized form.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub pattern: Pattern,
    pub sites: Vec<MatchSite>,
    pub utility: i64,
}

/// The utility-maximal candidate over the corpus, or `None` when no
/// pattern has positive utility.
pub fn search_best(corpus: &[SExpr], cfg: &SearchConfig) -> Option<Candidate> {
    struct Plain {
        min_body_size: usize,
    }
    impl SearchPasses for Plain {
        fn candidate_ok(
            &mut self,
            _body: &SExpr,
            body_size: usize,
            _utility: i64,
            _sites: &[MatchSite],
        ) -> bool {
            body_size >= self.min_body_size
        }
    }
    let mut passes = Plain { min_body_size: cfg.min_body_size };
    enumerate(corpus, cfg, &mut passes)
}

pub(crate) fn serialize_pattern(body: &SExpr) -> String {
    alloc::format!("{body}")
}
