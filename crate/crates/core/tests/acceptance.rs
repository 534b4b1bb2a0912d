//! Runs the twelve acceptance criteria and prints one PASS/FAIL line each.

use std::process::ExitCode;

use qshap_core::acceptance::{Suite, TITLES};

fn main() -> ExitCode {
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<usize> = if filter.is_empty() { (1..=TITLES.len()).collect() } else { filter };
    let mut suite = Suite::new();
    let mut failed = Vec::new();
    for id in ids {
        let r = suite.run(id);
        println!("{r}");
        if !r.passed {
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
