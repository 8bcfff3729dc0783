//! Runs every acceptance criterion and prints one pass/fail line each.
//! Plain binary target so the lines are never captured.

use std::process::ExitCode;

use plurival_core::verify::{run_suite, Suite, SuiteReport, DEFAULT_SEED};

fn run(suite: Suite) -> SuiteReport {
    let r = run_suite(suite, DEFAULT_SEED);
    println!("{}", r.summary_line());
    for f in &r.failures {
        println!("    failure: {f}");
    }
    for n in &r.notes {
        println!("    note: {n}");
    }
    r
}

fn main() -> ExitCode {
    println!("acceptance criteria (seed {DEFAULT_SEED})");
    let reports: Vec<SuiteReport> = Suite::ALL.iter().map(|s| run(*s)).collect();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.anchor).collect();
    println!("{} of {} criteria passed", reports.len() - failed.len(), reports.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
