//! Library learning for P2, a small imperative subset of Python 3.
//!
//! The pipeline: parse a corpus of `.py` files into typed ASTs ([`p2`]),
//! encode them as s-expressions ([`sexpr`]), search for the repeated tree
//! pattern with the best node-count savings ([`search`]), reject patterns
//! that cannot become real functions ([`prune`]), promote survivors into
//! functions with parameters and returns derived from liveness ([`closing`]),
//! and rewrite the corpus to call them ([`rewrite`]). A reference
//! interpreter ([`interp`]) provides the differential oracle that rewritten
//! corpora behave exactly like the originals.
//!
//! The crate is `no_std` (with `alloc`); all IO lives in the companion CLI
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod closing;
pub mod interp;
pub mod p2;
pub mod prune;
pub mod rewrite;
pub mod search;
pub mod sexpr;

pub use closing::{ClosedAbstraction, ClosureFailure, LivenessFacts, ReturnPlan};
pub use p2::{ast_size, parse_program, unparse, Program, SourceSpan, SyntaxError};
pub use prune::{PruneReason, PruneStats, PruneVerdict};
pub use rewrite::{CompressionReport, Ratio};
pub use search::{learn_library, Candidate, LearnOutcome, MatchSite, Pattern, SearchConfig};
pub use sexpr::{delispify, lispify, SExpr};
