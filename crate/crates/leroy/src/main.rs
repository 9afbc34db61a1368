//! leroy: learn a library of reusable functions from a corpus of programs
//! in a small Python subset, and rewrite the corpus to use it.

mod corpus;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use leroy_core::interp::{self, InputScript};
use leroy_core::p2::{parse_program, unparse};
use leroy_core::rewrite::count_calls;
use leroy_core::search::{learn_library_with, LearnError, SearchConfig};
use leroy_core::sexpr::{delispify, lispify, parse_sexpr};

const EXIT_OK: u8 = 0;
const EXIT_USER: u8 = 1;
const EXIT_INTERNAL: u8 = 2;

#[derive(Parser)]
#[command(name = "leroy", version, about = "Library learning for a Python subset")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a library from a corpus of .py files and rewrite them.
    Learn(LearnArgs),
    /// Print the s-expression encoding of a program.
    Lispify { file: PathBuf },
    /// Reconstruct a program from its s-expression encoding.
    Delispify { file: PathBuf },
    /// Run a program under the reference interpreter.
    Run {
        file: PathBuf,
        /// Input script: one literal per line, consumed by eval(input()).
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LearnArgs {
    /// Directory containing the corpus (.py files).
    #[arg(long)]
    corpus: PathBuf,
    /// Output directory for rewritten programs, library.py, and the report.
    #[arg(long)]
    out: PathBuf,
    /// Minimum abstraction body size in AST nodes.
    #[arg(long, default_value_t = 20)]
    min_size: usize,
    /// Maximum number of abstraction parameters from holes.
    #[arg(long, default_value_t = 4)]
    max_arity: u32,
    /// Where to write the JSON report (default: <out>/report.json).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also dump each program's encoding and the search frontier.
    #[arg(long)]
    dump_sexpr: bool,
    /// Re-run every program with a sibling .in script under the interpreter
    /// and require byte-identical output from the rewritten corpus.
    #[arg(long)]
    oracle_check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Learn(args) => learn(&args),
        Command::Lispify { file } => lispify_cmd(&file),
        Command::Delispify { file } => delispify_cmd(&file),
        Command::Run { file, input } => run_cmd(&file, input.as_deref()),
    };
    match code {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("leroy: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn user(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_USER, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_INTERNAL, message: message.into() }
    }
}

fn learn(args: &LearnArgs) -> Result<(), CliError> {
    let files = corpus::list_py_files(&args.corpus)
        .map_err(|e| CliError::user(format!("{}: {e}", args.corpus.display())))?;
    if files.is_empty() {
        return Err(CliError::user(format!(
            "no programs found in {}",
            args.corpus.display()
        )));
    }
    let programs = corpus::parse_files(&files).map_err(CliError::user)?;

    let cfg = SearchConfig {
        min_body_size: args.min_size,
        max_arity: args.max_arity,
        exhaustive: false,
    };

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::user(format!("{}: {e}", args.out.display())))?;

    let mut frontier_lines = String::new();
    let mut frontier_sink = |body: &leroy_core::SExpr, utility: i64| {
        if args.dump_sexpr {
            frontier_lines.push_str(&format!("{body}\t{utility}\n"));
        }
    };
    let outcome = learn_library_with(&programs, &cfg, Some(&mut frontier_sink))
        .map_err(|e| match e {
            LearnError::ReservedIdentifier { program, name } => CliError::user(format!(
                "{}: reserved identifier `{name}`",
                files[program].display()
            )),
            other => CliError::internal(other.to_string()),
        })?;

    // each rewritten program is standalone: the definitions it calls are
    // prepended, since the language has no import construct
    for (i, program) in outcome.rewritten.iter().enumerate() {
        let needed: Vec<_> = outcome
            .library
            .iter()
            .filter(|a| count_calls(program, &a.name) > 0)
            .collect();
        let mut emitted = program.clone();
        for a in needed.iter().rev() {
            emitted.body.insert(0, a.def_stmt());
        }
        let file_name = files[i].file_name().expect("corpus file name");
        let out_path = args.out.join(file_name);
        write_program(&out_path, &unparse(&emitted))?;
    }

    if !outcome.library.is_empty() {
        let mut text = String::new();
        for a in &outcome.library {
            text.push_str(&unparse(&leroy_core::Program {
                body: vec![a.def_stmt()],
            }));
        }
        write_program(&args.out.join("library.py"), &text)?;
    }

    if args.dump_sexpr {
        for (i, program) in programs.iter().enumerate() {
            let stem = files[i].file_stem().expect("stem").to_string_lossy();
            let path = args.out.join(format!("{stem}.sexpr"));
            write_program(&path, &format!("{}\n", lispify(program)))?;
        }
        write_program(&args.out.join("frontier.txt"), &frontier_lines)?;
    }

    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| args.out.join("report.json"));
    let json = report::render(&outcome.report);
    write_program(&report_path, &json)?;

    if args.oracle_check {
        oracle_check(&files, &programs, &outcome)?;
    }

    let n = outcome.library.len();
    eprintln!(
        "learned {n} abstraction{} over {} programs; compression {:.4}x",
        if n == 1 { "" } else { "s" },
        programs.len(),
        outcome.report.ratio_excl.as_f64()
    );
    Ok(())
}

/// Differential check: for every corpus file with a sibling `.in` script,
/// interpreter output of the rewritten program (library prepended) must be
/// byte-identical to the original's.
fn oracle_check(
    files: &[PathBuf],
    originals: &[leroy_core::Program],
    outcome: &leroy_core::search::LearnOutcome,
) -> Result<(), CliError> {
    for (i, path) in files.iter().enumerate() {
        let script_path = path.with_extension("in");
        let script = if script_path.exists() {
            let text = fs::read_to_string(&script_path)
                .map_err(|e| CliError::user(format!("{}: {e}", script_path.display())))?;
            InputScript::parse(&text)
                .map_err(|e| CliError::user(format!("{}: {e}", script_path.display())))?
        } else {
            InputScript::empty()
        };
        let mut rewritten = outcome.rewritten[i].clone();
        for a in outcome.library.iter().rev() {
            if count_calls(&outcome.rewritten[i], &a.name) > 0 {
                rewritten.body.insert(0, a.def_stmt());
            }
        }
        let before = interp::run(&originals[i], &script);
        let after = interp::run(&rewritten, &script);
        if before != after {
            return Err(CliError::internal(format!(
                "oracle mismatch for {}: original {:?} vs rewritten {:?}",
                path.display(),
                before,
                after
            )));
        }
    }
    eprintln!("oracle check passed for {} programs", files.len());
    Ok(())
}

fn write_program(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

fn lispify_cmd(file: &Path) -> Result<(), CliError> {
    let source = fs::read_to_string(file)
        .map_err(|e| CliError::user(format!("{}: {e}", file.display())))?;
    let program =
        parse_program(&source).map_err(|e| CliError::user(format!("{}:{e}", file.display())))?;
    println!("{}", lispify(&program));
    Ok(())
}

fn delispify_cmd(file: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::user(format!("{}: {e}", file.display())))?;
    let term =
        parse_sexpr(text.trim()).map_err(|e| CliError::user(format!("{}: {e}", file.display())))?;
    let program =
        delispify(&term).map_err(|e| CliError::user(format!("{}: {e}", file.display())))?;
    print!("{}", unparse(&program));
    Ok(())
}

fn run_cmd(file: &Path, input: Option<&Path>) -> Result<(), CliError> {
    let source = fs::read_to_string(file)
        .map_err(|e| CliError::user(format!("{}: {e}", file.display())))?;
    let program =
        parse_program(&source).map_err(|e| CliError::user(format!("{}:{e}", file.display())))?;
    let script = match input {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::user(format!("{}: {e}", p.display())))?;
            InputScript::parse(&text)
                .map_err(|e| CliError::user(format!("{}: {e}", p.display())))?
        }
        None => InputScript::empty(),
    };
    let output = interp::run(&program, &script)
        .map_err(|e| CliError::user(format!("{}: runtime error: {e}", file.display())))?;
    print!("{output}");
    Ok(())
}
