//! Corpus ingestion: list `.py` files in lexicographic order and parse them,
//! optionally across threads. Results are deterministic regardless of the
//! thread count; `LEROY_THREADS` caps the workers.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use leroy_core::p2::parse_program_in;
use leroy_core::Program;

pub fn list_py_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "py"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn thread_count(jobs: usize) -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("LEROY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(available);
    cap.min(jobs).max(1)
}

/// Parse every file; the first error (in file order) wins. Workers pull
/// indices from a shared counter and write into fixed slots, so the output
/// order is the input order.
pub fn parse_files(files: &[PathBuf]) -> Result<Vec<Program>, String> {
    let workers = thread_count(files.len());
    let results: Mutex<Vec<Option<Result<Program, String>>>> =
        Mutex::new(vec![None; files.len()]);
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let outcome = read_and_parse(&files[i], i as u32);
                results.lock().unwrap()[i] = Some(outcome);
            });
        }
    });

    let results = results.into_inner().unwrap();
    let mut programs = Vec::with_capacity(files.len());
    for slot in results {
        programs.push(slot.expect("every file parsed")?);
    }
    Ok(programs)
}

fn read_and_parse(path: &Path, file_id: u32) -> Result<Program, String> {
    let source =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_program_in(&source, file_id).map_err(|e| format!("{}:{e}", path.display()))
}
