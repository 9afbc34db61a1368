//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod oracle;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use leroy_core::closing::{analyze_liveness, close, ClosedAbstraction, ReturnPlan};
use leroy_core::interp::{self, InputScript};
use leroy_core::p2::{ast_size, parse_program, unparse};
use leroy_core::prune::{self, PruneReason, PruneStats};
use leroy_core::rewrite::{count_calls, validate_call_site};
use leroy_core::search::{find_matches, learn_library, Candidate, MatchSite, Pattern, SearchConfig};
use leroy_core::sexpr::{delispify, lispify, parse_sexpr};
use leroy_core::Program;

fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load_corpus(dir: &Path) -> (Vec<PathBuf>, Vec<Program>) {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "py"))
        .collect();
    files.sort();
    let programs = files
        .iter()
        .map(|p| {
            let src = fs::read_to_string(p).unwrap();
            parse_program(&src).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
        })
        .collect();
    (files, programs)
}

fn cfg(min_body_size: usize) -> SearchConfig {
    SearchConfig { min_body_size, max_arity: 4, exhaustive: false }
}

/// Criterion 1: on the bundled corpus covering every grammar production,
/// parse -> unparse -> parse is node-identical and the encoding round-trip
/// is the exact identity. Budget: 5 seconds.
#[test]
fn criterion_1_round_trip_suite() {
    let started = Instant::now();
    let (files, programs) = load_corpus(&fixture_dir("roundtrip"));
    assert!(files.len() >= 50, "need at least 50 programs, have {}", files.len());
    for (path, program) in files.iter().zip(&programs) {
        let printed = unparse(program);
        let reparsed = parse_program(&printed)
            .unwrap_or_else(|e| panic!("{}: reparse failed: {e}\n{printed}", path.display()));
        assert_eq!(&reparsed, program, "{}: unparse changed the tree", path.display());

        let term = lispify(program);
        let back = delispify(&term)
            .unwrap_or_else(|e| panic!("{}: delispify failed: {e}", path.display()));
        assert_eq!(&back, program, "{}: encoding round trip differs", path.display());
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "PASS criterion 1: round-trip on {} programs in {elapsed:?}",
        files.len()
    );
}

/// Criterion 2: on 20 random corpora of at most 200 AST nodes, the
/// branch-and-bound search matches the independent exhaustive enumerator's
/// optimum utility. Budget: 60 seconds.
#[test]
fn criterion_2_search_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = oracle::XorShift::new(0x5EED_0001);
    let mut checked = 0;
    for round in 0..20 {
        let corpus = oracle::random_corpus(&mut rng);
        let total_nodes: usize = corpus.iter().map(ast_size).sum();
        assert!(total_nodes <= 200, "round {round}: corpus has {total_nodes} nodes");
        let terms: Vec<_> = corpus.iter().map(lispify).collect();

        let config = cfg(1);
        let bounded = leroy_core::search::search_best(&terms, &config);
        let expected = oracle::oracle_best_utility(&terms, &config);

        let got = bounded.as_ref().map(|c| c.utility);
        assert_eq!(
            got, expected,
            "round {round}: search found {got:?}, oracle found {expected:?}\ncorpus:\n{}",
            corpus.iter().map(unparse).collect::<Vec<_>>().join("---\n")
        );
        if let Some(c) = &bounded {
            // the returned sites and utility must be mutually consistent
            assert_eq!(leroy_core::search::utility(&c.pattern, &c.sites), c.utility);
        }
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("PASS criterion 2: {checked} random corpora agree with the oracle in {elapsed:?}");
}

/// Criterion 3: the planted corpus (an identical 25-node block at 3 sites
/// across 5 programs) yields exactly one abstraction applied 3 times, with
/// node counts matching the hand-counted ledger exactly.
#[test]
fn criterion_3_planted_abstraction_recovery() {
    let (_, programs) = load_corpus(&fixture_dir("planted"));
    assert_eq!(programs.len(), 5);

    // hand-counted ledger for the planted fixture
    //   block:  acc = 1 + 2                         5 nodes
    //           mix = acc + 3                       5
    //           acc = mix + acc                     5
    //           print(acc + mix + 4 + mix + acc)   10
    //   programs: 30 + 7 + 30 + 7 + 30            104 original
    //   per site the call statement is 3 nodes:    30-22, 7, 30-22, 7, 30-22
    //   rewritten total                             38
    //   closed def: 4 block stmts with the print
    //   converted to `return print(..)` (26) + def  27
    let block: Vec<&str> = vec![
        "acc = 1 + 2",
        "mix = acc + 3",
        "acc = mix + acc",
        "print(acc + mix + 4 + mix + acc)",
    ];
    let block_program = parse_program(&block.join("\n")).unwrap();
    assert_eq!(ast_size(&block_program), 25, "planted block must be 25 nodes");

    let outcome = learn_library(&programs, &cfg(20)).unwrap();
    assert_eq!(outcome.library.len(), 1, "exactly one abstraction");
    let report = &outcome.report;
    assert_eq!(report.abstractions[0].sites_applied, 3);
    assert_eq!(report.original_nodes, 104);
    assert_eq!(report.rewritten_nodes_excl_library, 38);
    assert_eq!(report.rewritten_nodes_incl_library, 65);
    assert!(report.ratio_excl.as_f64() > 1.0);
    assert_eq!(report.ratio_excl.num, 104);
    assert_eq!(report.ratio_excl.den, 38);
    // this fixture shrinks even with the library; growth stays exact
    assert_eq!(report.growth_incl.num, 65 - 104);
    assert_eq!(report.growth_incl.den, 104);

    // the closed function returns its trailing print
    let f = &outcome.library[0];
    assert_eq!(f.return_plan, ReturnPlan::LastExpr);
    assert!(f.params.is_empty());
    let def_text = unparse(&Program { body: vec![f.def_stmt()] });
    assert!(def_text.ends_with("return print(acc + mix + 4 + mix + acc)\n"));

    // the exhaustive oracle confirms the planted block is utility-maximal:
    // 3 sites * (25 - 3 call nodes) - 26 definition nodes = 40
    let terms: Vec<_> = programs.iter().map(lispify).collect();
    let best = leroy_core::search::search_best(&terms, &cfg(20)).unwrap();
    assert_eq!(best.utility, 40);
    assert_eq!(best.sites.len(), 3);
    assert_eq!(oracle::oracle_best_utility(&terms, &cfg(20)), Some(40));

    println!(
        "PASS criterion 3: planted block recovered at 3 sites; 104 -> 38 (+27 library)"
    );
}

/// Criterion 4: hand-built invalid candidates are rejected with the right
/// reason; kept candidates survive closing, emission, and reparse.
#[test]
fn criterion_4_pruning_soundness() {
    let invalid: Vec<(&str, PruneReason)> = vec![
        // incomplete bodies (macro-like)
        ("(add #0)", PruneReason::MacroLike),
        ("(print)", PruneReason::MacroLike),
        ("(StatementList (assign x) eps)", PruneReason::MacroLike),
        ("(subscript #0)", PruneReason::MacroLike),
        ("(ternary 1 2)", PruneReason::MacroLike),
        // holes where an expression argument is illegal
        ("(compare #0 #1 #2)", PruneReason::InvalidParameter),
        ("(assign #0 #1)", PruneReason::InvalidParameter),
        ("(StatementList #0 eps)", PruneReason::InvalidParameter),
        ("(StatementList (print 1) #0)", PruneReason::InvalidParameter),
        ("(ternary #0 1 2)", PruneReason::InvalidParameter),
        ("(and 1 #0)", PruneReason::InvalidParameter),
        // well-formed but below the 20-node floor
        ("(StatementList (print (add #0 #1)) eps)", PruneReason::TooSmall),
        ("(StatementList (assign y 1) eps)", PruneReason::TooSmall),
    ];
    assert!(invalid.len() >= 10);
    let learned = BTreeSet::new();
    let mut stats = PruneStats::default();
    for (text, expected) in &invalid {
        let candidate = Candidate {
            pattern: Pattern::from_sexpr(parse_sexpr(text).unwrap()),
            sites: Vec::new(),
            utility: 0,
        };
        let verdict = prune::run_checks(&candidate, 20, &learned, &mut stats);
        assert!(!verdict.kept, "{text} should be rejected");
        assert_eq!(verdict.reason, Some(*expected), "{text}");
    }
    assert_eq!(stats.total(), invalid.len() as u64);

    // kept candidates: close them against fixture corpora and require the
    // emitted definition to reparse to the same tree
    let kept = [
        (
            "planted",
            "(StatementList (assign acc (add 1 2)) (StatementList (assign mix (add acc 3)) \
             (StatementList (assign acc (add mix acc)) (StatementList \
             (print (add (add (add (add acc mix) 4) mix) acc)) ...))))",
        ),
        (
            "capture",
            "(StatementList (assign q (add (add (list (exprlist #0 eps)) \
             (list (exprlist (ternary x 1 x) eps))) \
             (list (exprlist 7 (exprlist 8 (exprlist 9 (exprlist 10 (exprlist 11 eps)))))))) ...)",
        ),
    ];
    for (dir, text) in kept {
        let (_, programs) = load_corpus(&fixture_dir(dir));
        let terms: Vec<_> = programs.iter().map(lispify).collect();
        let pattern = Pattern::from_sexpr(parse_sexpr(text).unwrap());
        let sites = find_matches(&pattern, &terms);
        assert!(sites.len() >= 2, "{dir}: expected sites, got {}", sites.len());
        let candidate = Candidate { pattern, sites, utility: 0 };
        let verdict = prune::run_checks(&candidate, 15, &learned, &mut stats.clone());
        assert!(verdict.kept, "{dir}: {:?}", verdict.reason);
        let facts = analyze_liveness(&candidate, &programs);
        let closed = close(&candidate, &facts, "_leroy_fn0".into()).unwrap();
        let def = Program { body: vec![closed.def_stmt()] };
        let text = unparse(&def);
        let reparsed = parse_program(&text).unwrap_or_else(|e| panic!("{dir}: {e}\n{text}"));
        assert_eq!(reparsed, def, "{dir}: emitted definition changed on reparse");
    }
    println!(
        "PASS criterion 4: {} invalid candidates rejected with correct reasons; kept ones reparse",
        invalid.len()
    );
}

/// Criterion 5: a use whose argument names overlap the callee body is
/// rejected at that site; a constant-argument use of the same abstraction
/// is accepted. Reproduced both directly and through a full learn run.
#[test]
fn criterion_5_call_site_validation() {
    // direct reproduction: the body keeps referencing x, the argument is x
    let body_src = "out = _param0 + x\nprint(out)\n";
    let body = parse_program(body_src).unwrap().body;
    let f = ClosedAbstraction {
        name: "print_shifted".into(),
        params: vec!["_param0".into(), "x".into()],
        body,
        return_plan: ReturnPlan::LastExpr,
    };
    let clashing = MatchSite {
        program: 0,
        path: vec![],
        bindings: vec![parse_sexpr("(add x 1)").unwrap()],
        covered: Some(2),
        tail_rest: None,
    };
    let check = validate_call_site(&f, &clashing);
    assert_eq!(check.clash, Some("x".into()));

    let constant = MatchSite { bindings: vec![parse_sexpr("5").unwrap()], ..clashing };
    assert!(validate_call_site(&f, &constant).accepted());

    // full pipeline: program c's argument mentions x, so only a and b are
    // rewritten and the report counts the rejected site
    let (_, programs) = load_corpus(&fixture_dir("capture"));
    let outcome = learn_library(&programs, &cfg(15)).unwrap();
    assert_eq!(outcome.library.len(), 1);
    assert_eq!(outcome.report.abstractions[0].sites_applied, 2);
    assert_eq!(outcome.report.rejected_call_sites, 1);
    let name = &outcome.library[0].name;
    assert_eq!(count_calls(&outcome.rewritten[0], name), 1);
    assert_eq!(count_calls(&outcome.rewritten[1], name), 1);
    assert_eq!(count_calls(&outcome.rewritten[2], name), 0, "site c stays unrewritten");

    println!("PASS criterion 5: clashing site rejected, constant site accepted");
}

/// Criterion 6: the master oracle. For every fixture corpus, interpreter
/// output of the rewritten corpus equals the original byte-for-byte, with
/// all features enabled.
#[test]
fn criterion_6_semantic_preservation() {
    let runs: &[(&str, usize)] = &[
        ("semantic_io", 15),
        ("capture", 15),
        ("growth", 10),
        ("planted", 20),
        ("suites", 15),
        ("exprsite", 15),
        ("nested", 20),
    ];
    let mut compared = 0;
    for (dir, min_size) in runs {
        let (files, programs) = load_corpus(&fixture_dir(dir));
        let outcome = learn_library(&programs, &cfg(*min_size)).unwrap();
        assert!(
            !outcome.library.is_empty(),
            "{dir}: fixture is supposed to learn something"
        );
        for (i, path) in files.iter().enumerate() {
            let script_path = path.with_extension("in");
            let script = if script_path.exists() {
                InputScript::parse(&fs::read_to_string(&script_path).unwrap()).unwrap()
            } else {
                InputScript::empty()
            };
            let mut rewritten = outcome.rewritten[i].clone();
            for a in outcome.library.iter().rev() {
                if count_calls(&outcome.rewritten[i], &a.name) > 0 {
                    rewritten.body.insert(0, a.def_stmt());
                }
            }
            let before = interp::run(&programs[i], &script);
            let after = interp::run(&rewritten, &script);
            assert_eq!(
                before,
                after,
                "{}: rewritten behavior differs\nrewritten:\n{}",
                path.display(),
                unparse(&rewritten)
            );
            compared += 1;
        }
        // capture freedom, re-checked on the emitted trees: no call's
        // hole arguments mention an identifier from the callee body
        for program in &outcome.rewritten {
            for f in &outcome.library {
                assert_capture_free(program, f);
            }
        }
    }
    println!("PASS criterion 6: {compared} programs behave identically after rewriting");
}

/// Walk a rewritten program and check every call to `f` for capture: the
/// arguments filling hole parameters must share no identifier with the
/// body (arguments passing live-ins are the same name by construction).
fn assert_capture_free(program: &Program, f: &ClosedAbstraction) {
    let body_names = f.body_names();
    let holes = f.params.iter().take_while(|p| p.starts_with("_param")).count();
    let term = lispify(program);
    let mut stack = vec![&term];
    while let Some(node) = stack.pop() {
        if let leroy_core::SExpr::App(head, children) = node {
            stack.extend(children.iter());
            if *head == leroy_core::sexpr::Head::Call {
                let callee = matches!(
                    &children[0],
                    leroy_core::SExpr::Atom(leroy_core::sexpr::Atom::Ident(n)) if n == &f.name
                );
                if !callee {
                    continue;
                }
                // walk the first `holes` arguments of the cons spine
                let mut args = &children[1];
                for _ in 0..holes {
                    let leroy_core::SExpr::App(leroy_core::sexpr::Head::ExprList, pair) = args
                    else {
                        panic!("call to {} with too few arguments", f.name);
                    };
                    let mut names = BTreeSet::new();
                    pair[0].collect_idents(&mut names);
                    assert!(
                        names.is_disjoint(&body_names),
                        "captured argument in call to {}: {:?}",
                        f.name,
                        names.intersection(&body_names).collect::<Vec<_>>()
                    );
                    args = &pair[1];
                }
            }
        }
    }
}

/// Criterion 7: a synthetic 122-program corpus finishes end-to-end within
/// the budget and produces byte-identical output across thread counts.
#[test]
fn criterion_7_scale_and_determinism() {
    let started = Instant::now();
    let base = std::env::temp_dir().join(format!("leroy-acceptance-{}", std::process::id()));
    let corpus_dir = base.join("corpus");
    fs::create_dir_all(&corpus_dir).unwrap();
    for (name, text) in synthetic_corpus() {
        fs::write(corpus_dir.join(name), text).unwrap();
    }

    let exe = env!("CARGO_BIN_EXE_leroy");
    let mut outputs: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for threads in ["1", "4"] {
        let out_dir = base.join(format!("out-{threads}"));
        let status = Command::new(exe)
            .args(["learn", "--corpus"])
            .arg(&corpus_dir)
            .arg("--out")
            .arg(&out_dir)
            .args(["--min-size", "20", "--oracle-check"])
            .env("LEROY_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        let mut files: Vec<_> = fs::read_dir(&out_dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        outputs.push(
            files
                .iter()
                .map(|p| {
                    (
                        p.file_name().unwrap().to_string_lossy().into_owned(),
                        fs::read(p).unwrap(),
                    )
                })
                .collect(),
        );
    }
    assert_eq!(outputs[0], outputs[1], "outputs differ across thread counts");
    assert!(
        !outputs[0].is_empty()
            && outputs[0].iter().any(|(name, _)| name == "report.json")
    );

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    fs::remove_dir_all(&base).ok();
    println!(
        "PASS criterion 7: 122 programs end-to-end, both thread counts identical, in {elapsed:?}"
    );
}

/// 122 deterministic small programs averaging about 7 lines, with enough
/// repetition for learning to fire.
fn synthetic_corpus() -> Vec<(String, String)> {
    let mut files = Vec::new();
    for i in 0..122u32 {
        let mut text = String::new();
        match i % 4 {
            0 => {
                text.push_str(&format!("seed{i} = {} + {}\n", i, i + 1));
                text.push_str(
                    "base = 10\nacc = 0\nacc = acc + base\nlhs = acc + 1\nrhs = lhs + acc\nprint(rhs + lhs)\n",
                );
            }
            1 => {
                text.push_str(
                    "base = 10\nacc = 0\nacc = acc + base\nlhs = acc + 1\nrhs = lhs + acc\nprint(rhs + lhs)\n",
                );
                text.push_str(&format!("print({i} + 2)\nrow{i} = [1, {i}]\n"));
            }
            2 => {
                text.push_str(&format!(
                    "flag = {}\nprint(flag and {i})\ntable = {{1: {i}, 2: 4}}\nprint(table[1])\n",
                    if i % 8 == 2 { "True" } else { "False" }
                ));
            }
            _ => {
                text.push_str(&format!(
                    "row = [{i}, 2, 3]\nrow[0] = row[1] + {i}\nprint(row)\nwide = row + [4]\nprint(wide[-1] is wide)\n"
                ));
            }
        }
        files.push((format!("prog{i:03}.py"), text));
    }
    files
}
