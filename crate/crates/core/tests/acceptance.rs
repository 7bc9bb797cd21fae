//! One pass/fail line per acceptance criterion.

use std::process::ExitCode;

use fo_core::selftest::{run_criterion, CRITERIA};

const SEED: u64 = 0x5eed;

fn main() -> ExitCode {
    let mut failed = vec![];
    for (id, _) in CRITERIA {
        let t = std::time::Instant::now();
        let out = run_criterion(id, SEED);
        println!("{} ({:.1?})", out.line(), t.elapsed());
        if !out.pass() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
