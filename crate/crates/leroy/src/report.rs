//! JSON report with a stable schema:
//!
//! ```json
//! {
//!   "original_nodes": 0,
//!   "rewritten_nodes": 0,
//!   "rewritten_plus_library_nodes": 0,
//!   "compression_ratio": 1.0,
//!   "library_growth_pct": 0.0,
//!   "abstractions": [
//!     {"name": "", "body_nodes": 0, "params": [], "returns": [], "sites": 0}
//!   ],
//!   "pruned": {"macro_like": 0, "invalid_parameter": 0, "too_small": 0,
//!              "calls_abstraction": 0},
//!   "rejected_call_sites": 0
//! }
//! ```

use serde::Serialize;

use leroy_core::CompressionReport;

#[derive(Serialize)]
struct ReportJson<'a> {
    original_nodes: usize,
    rewritten_nodes: usize,
    rewritten_plus_library_nodes: usize,
    compression_ratio: f64,
    library_growth_pct: f64,
    abstractions: Vec<AbstractionJson<'a>>,
    pruned: PrunedJson,
    rejected_call_sites: u64,
}

#[derive(Serialize)]
struct AbstractionJson<'a> {
    name: &'a str,
    body_nodes: usize,
    params: &'a [String],
    returns: &'a [String],
    sites: usize,
}

#[derive(Serialize)]
struct PrunedJson {
    macro_like: u64,
    invalid_parameter: u64,
    too_small: u64,
    calls_abstraction: u64,
}

pub fn render(report: &CompressionReport) -> String {
    let json = ReportJson {
        original_nodes: report.original_nodes,
        rewritten_nodes: report.rewritten_nodes_excl_library,
        rewritten_plus_library_nodes: report.rewritten_nodes_incl_library,
        compression_ratio: report.ratio_excl.as_f64(),
        library_growth_pct: report.growth_incl.as_f64() * 100.0,
        abstractions: report
            .abstractions
            .iter()
            .map(|a| AbstractionJson {
                name: &a.name,
                body_nodes: a.body_nodes,
                params: &a.params,
                returns: &a.returns,
                sites: a.sites_applied,
            })
            .collect(),
        pruned: PrunedJson {
            macro_like: report.prune_stats.macro_like,
            invalid_parameter: report.prune_stats.invalid_parameter,
            too_small: report.prune_stats.too_small,
            calls_abstraction: report.prune_stats.calls_abstraction,
        },
        rejected_call_sites: report.rejected_call_sites,
    };
    let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
    text.push('\n');
    text
}
