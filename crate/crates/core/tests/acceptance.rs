//! Acceptance criteria 1 to 10 at full scale, one PASS/FAIL line each.
//!
//! `cargo test -p cremona-core --test acceptance -- 5 6` runs a subset.

use std::process::ExitCode;

use cremona_core::verify::{run_criterion, Scale, CRITERIA};

fn main() -> ExitCode {
    let picked: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .filter(|id| (1..=CRITERIA).contains(id))
        .collect();
    let ids: Vec<usize> = if picked.is_empty() {
        (1..=CRITERIA).collect()
    } else {
        picked
    };
    let mut failed = Vec::new();
    for id in ids {
        let outcome = run_criterion(id, Scale::Full);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
