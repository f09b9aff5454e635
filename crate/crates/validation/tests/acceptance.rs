//! Runs every acceptance criterion and prints one line per check plus a
//! verdict line per criterion. Exits non-zero if any criterion fails.
//!
//! Positional numeric arguments restrict the run to those criteria, e.g.
//! `cargo test -p burescone-validation --test acceptance -- 3 8`.

use std::process::ExitCode;

use burescone::acceptance::all_criteria;

fn main() -> ExitCode {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (k, criterion) in all_criteria().into_iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        let report = criterion();
        for line in report.lines() {
            println!("{line}");
        }
        println!();
        ran += 1;
        if !report.passed() {
            failed.push(report.id);
        }
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
